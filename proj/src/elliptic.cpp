#include "gyre/elliptic.hpp"

#include <cmath>
#include <utility>

namespace gyre::elliptic {

namespace {

void check_nome(Complex q, const char* where) {
  if (std::abs(q) > kNomeLimit) {
    throw SeriesError(std::string(where) + ": nome magnitude exceeds convergence bound");
  }
}

constexpr int kMaxTerms = 2000;

// Theta constants at v = 0 together with the sums needed for d/dq, all free of
// the q^{1/4} prefactor:
//   theta2(0,q) = 2 q^{1/4} S2,  theta3(0,q) = S3,  theta4(0,q) = S4,
//   T2 = q dS2/dq, T3 = q dS3/dq, T4 = q dS4/dq.
struct ThetaZero {
  Complex S2, S3, S4, T2, T3, T4;
};

ThetaZero theta_zero_sums(Complex q) {
  check_nome(q, "theta constants");
  ThetaZero r;
  r.S2 = 1.0;  // n = 0 term of sum q^{n(n+1)}
  r.S3 = 1.0;
  r.S4 = 1.0;
  r.T2 = 0.0;
  r.T3 = 0.0;
  r.T4 = 0.0;
  const Complex qq = q * q;
  Complex p2 = 1.0;   // q^{n(n+1)}
  Complex inc = qq;   // q^{2(n+1)}
  Complex ps = 1.0;   // q^{n^2}
  Complex odd = q;    // q^{2n+1} stepping n^2 -> (n+1)^2
  for (int n = 1; n <= kMaxTerms; ++n) {
    p2 *= inc;  // q^{n(n+1)}
    inc *= qq;
    ps *= odd;  // q^{n^2}
    odd *= qq;
    const double nn = static_cast<double>(n);
    r.S2 += p2;
    r.T2 += nn * (nn + 1.0) * p2;
    const Complex cs = 2.0 * ps;
    const double sgn = (n % 2) ? -1.0 : 1.0;
    r.S3 += cs;
    r.S4 += sgn * cs;
    r.T3 += 2.0 * nn * nn * ps;
    r.T4 += sgn * 2.0 * nn * nn * ps;
    if (std::abs(ps) * (nn + 1.0) * (nn + 1.0) < 0.25 * kSeriesEps &&
        std::abs(p2) * (nn + 2.0) * (nn + 2.0) < 0.25 * kSeriesEps) {
      return r;
    }
  }
  throw SeriesError("theta constants: series did not converge");
}

}  // namespace

Complex nome(Complex tau) {
  require_upper_half(tau, "nome");
  return std::exp(Complex(0.0, kPi) * tau);
}

Complex theta1(Complex v, Complex q) {
  check_nome(q, "theta1");
  const Complex q4 = std::pow(q, 0.25);
  const Complex qq = q * q;
  Complex qpow = 1.0;
  Complex inc = qq;
  Complex sum = 0.0;
  double scale = 0.0;
  const double iv = std::abs(v.imag());
  for (int n = 0; n <= kMaxTerms; ++n) {
    const double k = 2.0 * n + 1.0;
    Complex term = qpow * std::sin(k * v);
    if (n % 2) term = -term;
    sum += term;
    scale = std::max(scale, std::abs(term));
    const double bound = std::abs(qpow) * std::exp(k * iv);
    if (n >= 2 && bound < kSeriesEps * (scale + 1e-300)) {
      return 2.0 * q4 * sum;
    }
    qpow *= inc;
    inc *= qq;
  }
  throw SeriesError("theta1: series did not converge");
}

Complex theta2(Complex v, Complex q) {
  check_nome(q, "theta2");
  const Complex q4 = std::pow(q, 0.25);
  const Complex qq = q * q;
  Complex qpow = 1.0;
  Complex inc = qq;
  Complex sum = 0.0;
  double scale = 0.0;
  const double iv = std::abs(v.imag());
  for (int n = 0; n <= kMaxTerms; ++n) {
    const double k = 2.0 * n + 1.0;
    const Complex term = qpow * std::cos(k * v);
    sum += term;
    scale = std::max(scale, std::abs(term));
    const double bound = std::abs(qpow) * std::exp(k * iv);
    if (n >= 2 && bound < kSeriesEps * (scale + 1e-300)) {
      return 2.0 * q4 * sum;
    }
    qpow *= inc;
    inc *= qq;
  }
  throw SeriesError("theta2: series did not converge");
}

namespace {

Complex theta34(Complex v, Complex q, bool alternate, const char* name) {
  check_nome(q, name);
  const Complex qq = q * q;
  Complex qpow = 1.0;  // q^{n^2}
  Complex odd = q;     // q^{2n+1}
  Complex sum = 1.0;
  double scale = 1.0;
  const double iv = std::abs(v.imag());
  for (int n = 1; n <= kMaxTerms; ++n) {
    qpow *= odd;
    odd *= qq;
    Complex term = 2.0 * qpow * std::cos(2.0 * n * v);
    if (alternate && (n % 2)) term = -term;
    sum += term;
    scale = std::max(scale, std::abs(term));
    const double bound = 2.0 * std::abs(qpow) * std::exp(2.0 * n * iv);
    if (n >= 2 && bound < kSeriesEps * (scale + 1e-300)) {
      return sum;
    }
  }
  throw SeriesError(std::string(name) + ": series did not converge");
}

}  // namespace

Complex theta3(Complex v, Complex q) { return theta34(v, q, false, "theta3"); }
Complex theta4(Complex v, Complex q) { return theta34(v, q, true, "theta4"); }

Complex modular_lambda(Complex tau) {
  const Complex q = nome(tau);
  const ThetaZero t = theta_zero_sums(q);
  // theta2^4 / theta3^4 = 16 q (S2/S3)^4; the q^{1/4} branch drops out.
  const Complex ratio = t.S2 / t.S3;
  const Complex r2 = ratio * ratio;
  return 16.0 * q * r2 * r2;
}

Complex log_modular_lambda(Complex tau) {
  const Complex q = nome(tau);
  check_nome(q, "log_modular_lambda");
  const Complex qq = q * q;
  Complex podd = q;    // q^{2n-1}
  Complex peven = qq;  // q^{2n}
  Complex acc = 0.0;
  for (int n = 1; n <= 8 * kMaxTerms; ++n) {
    acc += std::log(1.0 + peven) - std::log(1.0 + podd);
    if (std::abs(podd) < 0.1 * kSeriesEps * (1.0 + std::abs(acc))) {
      return std::log(16.0) + Complex(0.0, kPi) * tau + 8.0 * acc;
    }
    podd *= qq;
    peven *= qq;
  }
  throw SeriesError("log_modular_lambda: series did not converge");
}

double complete_K_agm(double m) {
  if (m >= 1.0) throw DomainError("complete_K_agm: m must be < 1");
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int i = 0; i < 80 && std::abs(a - b) > 1e-17 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

Complex complete_K(Complex m) {
  if (std::abs(m) < 1e-8) {
    // K = (pi/2)(1 + m/4 + 9 m^2/64 + ...), truncation below 1e-25 here.
    return 0.5 * kPi * (1.0 + 0.25 * m + (9.0 / 64.0) * m * m);
  }
  if (std::abs(1.0 - m) < 1e-14) {
    throw DomainError("complete_K: logarithmic singularity at m = 1");
  }
  // Seed the nome from the standard ascending series in
  // eps = (1 - (1-m)^{1/4}) / (2 (1 + (1-m)^{1/4})); |eps| < 1/2 holds for all
  // m off the cut because (1-m)^{1/4} has positive real part.
  const Complex w = std::pow(1.0 - m, 0.25);
  const Complex eps = (1.0 - w) / (2.0 * (1.0 + w));
  const Complex e4 = eps * eps * eps * eps;
  static const double c[] = {1.0,       2.0,        15.0,        150.0,
                             1707.0,    20910.0,    268616.0,    3567400.0,
                             48555069.0, 673458874.0, 9481557398.0};
  Complex poly = 0.0;
  for (int i = 10; i >= 0; --i) poly = poly * e4 + c[i];
  Complex q = eps * poly;

  // Newton on the better-conditioned side: lambda(q) = m directly when |m| is
  // the small quantity, (theta4/theta3)^4 = 1 - m when 1 - m is.
  const bool near_one = std::abs(1.0 - m) < std::abs(m);
  ThetaZero t{};
  bool converged = false;
  bool polish = false;
  for (int it = 0; it < 60; ++it) {
    check_nome(q, "complete_K");
    t = theta_zero_sums(q);
    Complex F, dF;
    if (near_one) {
      const Complex ratio = t.S4 / t.S3;
      const Complex r2 = ratio * ratio;
      const Complex om = r2 * r2;  // 1 - lambda(q)
      F = om - (1.0 - m);
      dF = om * 4.0 * (t.T4 / t.S4 - t.T3 / t.S3) / q;
    } else {
      const Complex ratio = t.S2 / t.S3;
      const Complex r2 = ratio * ratio;
      const Complex lam = 16.0 * q * r2 * r2;
      F = lam - m;
      dF = lam * (1.0 + 4.0 * (t.T2 / t.S2 - t.T3 / t.S3)) / q;
    }
    const Complex dq = F / dF;
    q -= dq;
    if (polish) {
      converged = true;
      break;
    }
    // quadratic convergence: one more step after reaching 1e-12 relative
    // puts the error below machine noise
    polish = std::abs(dq) < 1e-12 * std::abs(q);
  }
  if (!converged) {
    throw SeriesError("complete_K: nome iteration did not converge");
  }
  t = theta_zero_sums(q);
  return 0.5 * kPi * t.S3 * t.S3;
}

ReducedTau reduce_tau(Complex tau) {
  require_upper_half(tau, "reduce_tau");
  int r = static_cast<int>(std::floor(tau.real() + 0.5));
  if (tau.real() - r <= -0.5) r -= 1;  // keep Re in (-1/2, 1/2]
  return {r, tau - static_cast<double>(r)};
}

EllipticModulus modulus_from_tau(Complex tau) {
  EllipticModulus md;
  md.tau = tau;
  md.red = reduce_tau(tau);
  md.q = std::exp(Complex(0.0, 2.0 * kPi) * md.red.tilde);
  check_nome(md.q, "modulus_from_tau");
  // log lambda(2 tau) assembled directly: the product series depends on tau
  // only through q, while the linear term carries the band winding.
  const Complex qq = md.q * md.q;
  Complex podd = md.q;
  Complex peven = qq;
  Complex acc = 0.0;
  for (int n = 1;; ++n) {
    acc += std::log(1.0 + peven) - std::log(1.0 + podd);
    if (std::abs(podd) < 0.1 * kSeriesEps * (1.0 + std::abs(acc))) break;
    if (n > 8 * kMaxTerms) {
      throw SeriesError("modulus_from_tau: log lambda series did not converge");
    }
    podd *= qq;
    peven *= qq;
  }
  md.log_m = std::log(16.0) + Complex(0.0, 2.0 * kPi) * tau + 8.0 * acc;
  md.m = std::exp(md.log_m);
  const ThetaZero t = theta_zero_sums(md.q);
  md.K = 0.5 * kPi * t.S3 * t.S3;
  md.K_prime = Complex(0.0, -2.0) * tau * md.K;
  return md;
}

JacobiTorus::JacobiTorus(Complex tau) : JacobiTorus(modulus_from_tau(tau)) {}

JacobiTorus::JacobiTorus(EllipticModulus md) : md_(std::move(md)) {
  th2_ = theta2(0.0, md_.q);
  th3_ = theta3(0.0, md_.q);
  th4_ = theta4(0.0, md_.q);
}

JacobiTorus::Reduced JacobiTorus::reduce_cell(Complex w) const {
  const Complex tt = md_.red.tilde;
  Reduced red;
  const double b = w.imag() / tt.imag();
  const double a = w.real() - b * tt.real();
  const double na = std::floor(a + 0.5);
  const double nb = std::floor(b + 0.5);
  red.a = a - na;
  red.b = b - nb;
  red.nb_odd = (std::llround(std::fabs(nb)) % 2) == 1;
  return red;
}

namespace {

double lattice_norm(double da, double db, Complex tt) {
  double best = 1e300;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      const double xa = da + i;
      const double xb = db + j;
      best = std::min(best, std::abs(Complex(xa + xb * tt.real(), xb * tt.imag())));
    }
  }
  return best;
}

double wrap_half(double x) { return x - std::floor(x + 0.5); }

}  // namespace

double JacobiTorus::zero_distance_cell(Complex w) const {
  const Reduced red = reduce_cell(w);
  const Complex tt = md_.red.tilde;
  const double d0 = lattice_norm(red.a, red.b, tt);
  const double d1 = lattice_norm(wrap_half(red.a - 0.5), red.b, tt);
  return std::min(d0, d1);
}

double JacobiTorus::pole_distance_cell(Complex w) const {
  const Reduced red = reduce_cell(w);
  const Complex tt = md_.red.tilde;
  const double d0 = lattice_norm(red.a, wrap_half(red.b - 0.5), tt);
  const double d1 = lattice_norm(wrap_half(red.a - 0.5), wrap_half(red.b - 0.5), tt);
  return std::min(d0, d1);
}

JacobiTorus::NearestVertex JacobiTorus::nearest_vertex(Complex w) const {
  const Reduced red = reduce_cell(w);
  const Complex tt = md_.red.tilde;
  constexpr VertexKind kinds[4] = {VertexKind::ZeroOrigin, VertexKind::ZeroHalf,
                                   VertexKind::PoleTau, VertexKind::PoleOneTau};
  constexpr double va[4] = {0.0, 0.5, 0.0, 0.5};
  constexpr double vb[4] = {0.0, 0.0, 0.5, 0.5};
  NearestVertex best{VertexKind::ZeroOrigin, Complex(0, 0), 1e300};
  for (int k = 0; k < 4; ++k) {
    const double da = wrap_half(red.a - va[k]);
    const double db = wrap_half(red.b - vb[k]);
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        const Complex delta = (da + i) + (db + j) * tt;
        const double dist = std::abs(delta);
        if (dist < best.dist) best = {kinds[k], delta, dist};
      }
    }
  }
  return best;
}

Complex JacobiTorus::sn_cell(Complex w) const {
  if (pole_distance_cell(w) < kPoleGuard) {
    throw PoleError("sn evaluated too close to a pole", w);
  }
  const Reduced red = reduce_cell(w);
  const Complex tt = md_.red.tilde;
  const Complex v = 2.0 * kPi * (red.a + red.b * tt);
  return (th3_ / th2_) * theta1(v, md_.q) / theta4(v, md_.q);
}

Complex JacobiTorus::sn(Complex z) const { return sn_cell(z / (4.0 * md_.K)); }

Complex JacobiTorus::cn(Complex z) const {
  const Complex w = z / (4.0 * md_.K);
  if (pole_distance_cell(w) < kPoleGuard) {
    throw PoleError("cn evaluated too close to a pole", w);
  }
  const Reduced red = reduce_cell(w);
  const Complex tt = md_.red.tilde;
  const Complex v = 2.0 * kPi * (red.a + red.b * tt);
  const Complex val = (th4_ / th2_) * theta2(v, md_.q) / theta4(v, md_.q);
  return red.nb_odd ? -val : val;
}

Complex JacobiTorus::dn(Complex z) const {
  const Complex w = z / (4.0 * md_.K);
  if (pole_distance_cell(w) < kPoleGuard) {
    throw PoleError("dn evaluated too close to a pole", w);
  }
  const Reduced red = reduce_cell(w);
  const Complex tt = md_.red.tilde;
  const Complex v = 2.0 * kPi * (red.a + red.b * tt);
  const Complex val = (th4_ / th3_) * theta3(v, md_.q) / theta4(v, md_.q);
  return red.nb_odd ? -val : val;
}

Complex JacobiTorus::sc(Complex z) const { return sn(z) / cn(z); }

Complex JacobiTorus::vertex_cell(VertexKind vk) const {
  const Complex tt = md_.red.tilde;
  switch (vk) {
    case VertexKind::ZeroOrigin: return 0.0;
    case VertexKind::ZeroHalf: return 0.5;
    case VertexKind::PoleTau: return 0.5 * tt;
    case VertexKind::PoleOneTau: return 0.5 * (1.0 + tt);
  }
  throw Error("vertex_cell: bad vertex kind");
}

Complex JacobiTorus::sn_cell_near(VertexKind vk, Complex delta) const {
  const Complex u = 4.0 * md_.K * delta;
  const Complex u2 = u * u;
  const Complex m = md_.m;
  // sn u = u (1 - (1+m) u^2/6 + (1 + 14 m + m^2) u^4/120 - ...)
  const Complex snu =
      u * (1.0 - (1.0 + m) * u2 / 6.0 + (1.0 + 14.0 * m + m * m) * u2 * u2 / 120.0);
  switch (vk) {
    case VertexKind::ZeroOrigin:
      return snu;
    case VertexKind::ZeroHalf:
      return -snu;
    case VertexKind::PoleTau:
    case VertexKind::PoleOneTau: {
      // 2K tau~ is the classical iK' of the reduced torus, and
      // sn(x + iK') = 1/(k sn x) with k = theta2(0)^2/theta3(0)^2;
      // shifting by 2K flips the sign.
      const Complex k = (th2_ * th2_) / (th3_ * th3_);
      Complex val = 1.0 / (k * snu);
      if (vk == VertexKind::PoleOneTau) val = -val;
      return val;
    }
  }
  throw Error("sn_cell_near: bad vertex kind");
}

Complex jacobi_sn(Complex z, Complex tau) { return JacobiTorus(tau).sn(z); }
Complex jacobi_cn(Complex z, Complex tau) { return JacobiTorus(tau).cn(z); }
Complex jacobi_dn(Complex z, Complex tau) { return JacobiTorus(tau).dn(z); }
Complex jacobi_sc(Complex z, Complex tau) { return JacobiTorus(tau).sc(z); }

}  // namespace gyre::elliptic
