#include "gyre/asymptotics.hpp"

#include <cmath>

namespace gyre {

namespace {

constexpr double kTsMax = 4.35;
constexpr int kTsLevelMin = 3;
// Two more levels than the path quadrature: near tau = 1 the modulus pushes
// a square-root plateau to within 1e-14 of the endpoint, and resolving the
// transition costs resolution that the smooth integrands elsewhere never
// need.
constexpr int kTsLevelMax = 10;
constexpr double kQuadratureCap = 1e-9;

// Tanh-sinh quadrature of f over (0, 1). The integrand receives both s and
// 1 - s exactly, so inverse-square-root endpoint factors stay accurate at
// the double-exponential nodes.
template <typename F>
Complex tanh_sinh_01(F&& f, double tol) {
  Complex prev(0.0, 0.0);
  double err = 1e300;
  Complex cur(0.0, 0.0);
  for (int level = kTsLevelMin; level <= kTsLevelMax; ++level) {
    const double h = std::ldexp(1.0, -level);
    Complex sum(0.0, 0.0);
    const int n = static_cast<int>(kTsMax / h);
    for (int k = 0; k <= n; ++k) {
      const double t = k * h;
      const double u = 0.5 * kPi * std::sinh(t);
      const double eu = std::exp(-2.0 * std::abs(u));
      const double s_far = 1.0 / (1.0 + eu);   // node closer to 1
      const double s_near = eu / (1.0 + eu);   // node closer to 0, = 1 - s_far
      const double w =
          0.5 * kPi * std::cosh(t) * 4.0 * eu / ((1.0 + eu) * (1.0 + eu));
      sum += w * (k == 0 ? f(0.5, 0.5) : f(s_far, s_near) + f(s_near, s_far));
    }
    cur = 0.5 * h * sum;
    if (level > kTsLevelMin) {
      err = std::abs(cur - prev);
      if (err < tol * std::max(1.0, std::abs(cur))) return cur;
    }
    prev = cur;
  }
  if (err > kQuadratureCap * std::max(1.0, std::abs(cur))) {
    throw QuadratureError("edge-vector quadrature stalled above 1e-9");
  }
  return cur;
}

}  // namespace

Complex psi1(Complex tau) {
  require_upper_half(tau, "psi1");
  const auto md = elliptic::modulus_from_tau(tau);
  // 1 - m zeta^2 written as (1 - zeta^2) + (1 - m) zeta^2: the direct form
  // cancels catastrophically at the deep nodes once m hugs 1.
  const Complex mc = elliptic::complement_m(md);
  const Complex j = tanh_sinh_01(
      [&](double s, double oms) {
        const Complex a = oms * (1.0 + s);
        return std::sqrt(s) / std::sqrt(a * (a + mc * (s * s)));
      },
      1e-12);
  return 2.0 * elliptic::m_power(md, 0.125) / (4.0 * md.K) * j;
}

Complex psi2(Complex tau) {
  require_upper_half(tau, "psi2");
  const auto md = elliptic::modulus_from_tau(tau);
  const Complex mt = md.m;
  // xi = s/(1-s); in these coordinates the integrand becomes
  // sqrt(s) (1-s)^{-1/2} ((1-s)^2 + s^2)^{-1/2} ((1-s)^2 + m~ s^2)^{-1/2}.
  const Complex j = tanh_sinh_01(
      [&](double s, double oms) {
        const double a = oms * oms + s * s;
        const Complex b = oms * oms + mt * (s * s);
        return std::sqrt(s) / (std::sqrt(oms) * std::sqrt(a * b));
      },
      1e-12);
  return std::exp(Complex(0.0, 0.75 * kPi)) * elliptic::m_power(md, 0.125) /
         (4.0 * md.K) * j;
}

double theta_h_asymptote(Complex tau, Family family) {
  return family == Family::T ? (1.0 - tau.real()) * kPi / 4.0
                             : (0.5 - tau.real()) * kPi / 3.0;
}

EdgeVectors closed_form_edges_T(Complex tau) {
  require_upper_half(tau, "closed_form_edges_T");
  const auto md = elliptic::modulus_from_tau(tau);
  Complex mt = md.m;
  if (mt.real() < 0.0) {
    mt = elliptic::pin_above_cut(mt, std::abs(mt.real()));
  }
  const Complex rt = std::sqrt(mt);
  const Complex qt = std::sqrt(rt);
  Complex mu = (1.0 + qt) * (1.0 + qt) / (2.0 * (1.0 + rt));
  if (mu.real() > 1.0) {
    mu = elliptic::pin_above_cut(mu, mu.real());
  }
  const Complex k_mu = elliptic::complete_K(mu);
  const Complex k_cmu = elliptic::complete_K(1.0 - mu);
  const Complex front = std::exp(Complex(0.0, md.red.r * kPi / 4.0)) /
                        (2.0 * std::sqrt(2.0)) * std::pow(mt, -0.125) /
                        (std::sqrt(1.0 + rt) * md.K);
  return {front * (k_mu - k_cmu), front * (k_mu + k_cmu)};
}

AsymptoteReport asymptote_report(Complex tau, Family family,
                                 AsymptoteRegime regime) {
  AsymptoteReport rep;
  rep.tau = tau;
  rep.regime = regime;
  rep.theta_h_numeric = theta_h(tau, family);
  rep.theta_h_limit = regime == AsymptoteRegime::TauInf
                          ? theta_h_asymptote(tau, family)
                          : 0.0;
  rep.deviation =
      std::abs(wrap_angle(rep.theta_h_numeric - rep.theta_h_limit));
  return rep;
}

}  // namespace gyre
