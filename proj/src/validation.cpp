#include "gyre/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gyre/asymptotics.hpp"
#include "gyre/elliptic.hpp"
#include "gyre/period.hpp"
#include "gyre/weierstrass.hpp"

namespace gyre {

namespace {

// One seed for every randomized battery: the report must reproduce.
constexpr std::uint64_t kSeed = 0x6779726575ull;

CheckResult check(std::string name, double worst, double bound) {
  CheckResult c;
  c.name = std::move(name);
  c.worst = worst;
  c.bound = bound;
  c.passed = worst < bound;
  return c;
}

void grow(double& worst, double err) { worst = std::max(worst, err); }

// Jacobi function identities at 100 random (z, tau). Everything is measured
// relative to 1 + |sn z| so pole-adjacent draws cannot mask failures at
// moderate points.
SuiteReport suite_identities() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> ure(-1.2, 1.2);
  std::uniform_real_distribution<double> uim(0.5, 3.0);
  std::uniform_real_distribution<double> ucell(-0.45, 0.45);

  double per_h = 0, per_v = 0, odd = 0, refl = 0, flip = 0, half = 0,
         imag = 0, deriv = 0, shift = 0, kprime = 0;

  for (int i = 0; i < 100; ++i) {
    const Complex tau(ure(rng), uim(rng));
    const elliptic::JacobiTorus tor(tau);
    const auto& md = tor.modulus();

    Complex w;
    do {
      w = ucell(rng) + ucell(rng) * md.red.tilde;
    } while (tor.zero_distance_cell(w) < 0.05 ||
             tor.pole_distance_cell(w) < 0.05);
    const Complex z = w * 4.0 * md.K;
    const Complex s = tor.sn(z);
    const double scale = 1.0 + std::abs(s);

    grow(per_h, std::abs(tor.sn(z + 4.0 * md.K) - s) / scale);
    grow(per_v, std::abs(tor.sn(z + 4.0 * tau * md.K) - s) / scale);
    grow(odd, std::abs(tor.sn(-z) + s) / scale);
    grow(refl, std::abs(tor.sn(2.0 * md.K - z) - s) / scale);
    grow(flip, std::abs(tor.sn(2.0 * md.K + z) + s) / scale);

    // sn(z + iK') sn(z) = 1/sqrt(m) with the convention root of m; the
    // principal root fails off the centered band.
    grow(half, std::abs(elliptic::m_power(md, 0.5) *
                            tor.sn(z + 2.0 * tau * md.K) * s -
                        1.0));

    // sn(i u; tau) = i sn(u; tau')/cn(u; tau') with tau' = -1/(4 tau)
    try {
      const Complex u = 0.3 * z;
      const elliptic::JacobiTorus dual(-1.0 / (4.0 * tau));
      const Complex lhs = tor.sn(Complex(0.0, 1.0) * u);
      const Complex rhs = Complex(0.0, 1.0) * dual.sn(u) / dual.cn(u);
      grow(imag, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
    } catch (const PoleError&) {
      // the transformed argument landed on a pole; other draws cover it
    }

    // five-point stencil against sn' = cn dn
    const double h = 1e-3;
    const Complex fd = (-tor.sn(z + 2.0 * h) + 8.0 * tor.sn(z + h) -
                        8.0 * tor.sn(z - h) + tor.sn(z - 2.0 * h)) /
                       (12.0 * h);
    const Complex cd = tor.cn(z) * tor.dn(z);
    grow(deriv, std::abs(fd - cd) / (1.0 + std::abs(cd)));

    grow(shift, std::abs(elliptic::modulus_from_tau(tau + 1.0).m - md.m) /
                    std::abs(md.m));

    // K' = K(1 - m) holds on the centered band, so compare at tau~
    const auto ctr = elliptic::modulus_from_tau(md.red.tilde);
    grow(kprime, std::abs(ctr.K_prime -
                          elliptic::complete_K(elliptic::complement_m(ctr))));
  }

  SuiteReport rep;
  rep.suite = "identities";
  rep.checks.push_back(check("sn period 4K", per_h, 1e-8));
  rep.checks.push_back(check("sn period 2iK'", per_v, 1e-8));
  rep.checks.push_back(check("sn oddness", odd, 1e-8));
  rep.checks.push_back(check("sn(2K - z) = sn(z)", refl, 1e-8));
  rep.checks.push_back(check("sn(2K + z) = -sn(z)", flip, 1e-8));
  rep.checks.push_back(check("sn(z + iK') sn(z) sqrt(m) = 1", half, 1e-8));
  rep.checks.push_back(check("imaginary transformation", imag, 1e-8));
  rep.checks.push_back(check("derivative sn' = cn dn", deriv, 1e-8));
  rep.checks.push_back(check("modulus shift invariance", shift, 1e-12));
  rep.checks.push_back(check("K' matches complementary K", kprime, 1e-9));
  return rep;
}

// Far-field and pinch behavior of the horizontal angle, plus the edge
// integrals against the boundary development they straighten.
SuiteReport suite_asymptotics() {
  SuiteReport rep;
  rep.suite = "asymptotics";

  for (Family fam : {Family::T, Family::R}) {
    const char* tag = fam == Family::T ? "T" : "R";
    double worst4 = 0, worst6 = 0, front = 0;
    for (double t : {4.0, 6.0, 8.0}) {
      for (double re : {-0.8, -0.3, 0.4, 0.9}) {
        const auto r =
            asymptote_report(Complex(re, t), fam, AsymptoteRegime::TauInf);
        if (t == 4.0) grow(worst4, r.deviation);
        if (t == 6.0) grow(worst6, r.deviation);
        grow(front, r.deviation * std::exp(0.5 * kPi * t));
      }
    }
    rep.checks.push_back(
        check(std::string("far field t=4 (") + tag + ")", worst4, 1e-2));
    rep.checks.push_back(
        check(std::string("far field t=6 (") + tag + ")", worst6, 1e-3));
    rep.checks.push_back(
        check(std::string("far-field front constant (") + tag + ")", front,
              10.0));
  }

  // along tau = 1 + eps e^{3 pi i/4} the angle contracts toward zero and
  // the outer integral settles onto pi/sqrt 2
  double ratio = 0.0, prev = 0.0, outer_dev = 0.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    const Complex tau = 1.0 + eps * std::exp(Complex(0.0, 0.75 * kPi));
    const double th = std::abs(theta_h(tau, Family::T));
    if (prev > 0.0) grow(ratio, th / prev);
    prev = th;
    const auto md = elliptic::modulus_from_tau(tau);
    const Complex bare = 4.0 * md.K * psi2(tau) *
                         std::exp(Complex(0.0, -0.75 * kPi)) /
                         elliptic::m_power(md, 0.125);
    outer_dev = std::abs(bare - kPi / std::sqrt(2.0));
  }
  rep.checks.push_back(check("pinch ray angle contraction", ratio, 1.0));
  rep.checks.push_back(check("outer integral at the pinch", outer_dev, 1e-7));

  // |psi2| m^{1/8} approaches Gamma(1/4)^2 / (4 pi^{3/2}) far out
  const double outer_scale =
      std::pow(std::tgamma(0.25), 2) / (4.0 * std::pow(kPi, 1.5));
  double scale_dev = 0.0;
  for (double re : {-0.4, 0.3}) {
    const Complex tau(re, 6.0);
    const auto md = elliptic::modulus_from_tau(tau);
    grow(scale_dev, std::abs(std::abs(psi2(tau) * elliptic::m_power(md, 0.125)) -
                             outer_scale));
  }
  rep.checks.push_back(check("psi2 far-field scale", scale_dev, 5e-5));

  // the edge integrals are the straightened boundary development
  double inner_dev = 0.0, step_dev = 0.0;
  for (Complex tau : {Complex(0.3, 1.1), Complex(-0.7, 0.9), Complex(1.0, 1.2)}) {
    const auto data = make_data(Family::T, tau, 0.0);
    const auto fp = flat_structure(data, FlatMap::G, 16);
    const std::size_t nb = fp.vertices.size() / 2;
    grow(inner_dev,
         std::abs((fp.vertices[1] - fp.vertices[0]) / psi1(tau) - 1.0));
    grow(step_dev,
         std::abs((fp.vertices[nb] - fp.vertices[0]) / psi2(tau) - 1.0));
  }
  rep.checks.push_back(check("psi1 vs development", inner_dev, 1e-7));
  rep.checks.push_back(check("psi2 vs development", step_dev, 1e-7));
  return rep;
}

// The explicit period expression against quadrature, and the edge closed
// forms behind it.
SuiteReport suite_closedform() {
  SuiteReport rep;
  rep.suite = "closedform";

  double psi_dev = 0.0;
  for (double re : {-0.9, -0.45, 0.0, 0.45, 0.9}) {
    for (double im : {0.8, 1.2, 1.8, 2.6}) {
      const Complex tau(re, im);
      const auto pr = psi(make_data(Family::T, tau));
      grow(psi_dev, std::abs(psi_closed_form_T(tau) - pr.psi) / std::abs(pr.psi));
    }
  }
  rep.checks.push_back(check("psi closed form vs quadrature", psi_dev, 1e-8));

  double inner_dev = 0.0, comb_dev = 0.0;
  for (Complex tau : {Complex(0.3, 1.1), Complex(-0.7, 0.9), Complex(1.0, 1.2),
                      Complex(0.5, 0.9)}) {
    const auto ev = closed_form_edges_T(tau);
    grow(inner_dev, std::abs(ev.inner / psi1(tau) - 1.0));
  }
  for (Complex tau : {Complex(1.0, 1.2), Complex(0.7, 0.9), Complex(1.3, 1.1)}) {
    const auto ev = closed_form_edges_T(tau);
    const Complex comb = 0.5 * Complex(1.0, -1.0) * (ev.inner + ev.outer);
    grow(comb_dev, std::abs(comb / psi_closed_form_T(tau) - 1.0));
  }
  rep.checks.push_back(check("inner edge closed form", inner_dev, 1e-8));
  rep.checks.push_back(check("edge combination = psi form", comb_dev, 1e-10));
  return rep;
}

// Boundary calibration, the dual period integral, the reflection functional
// equation, sign structure, and the solved family anchors.
SuiteReport suite_period_invariants() {
  SuiteReport rep;
  rep.suite = "period-invariants";

  double calib = 0.0;
  for (double t : {0.6, 1.0, 1.5, 2.0, 2.5}) {
    grow(calib, std::abs(theta_h(Complex(-1.0, t), Family::T) - 0.5 * kPi));
    grow(calib, std::abs(theta_h(Complex(-1.0, t), Family::R) - 0.5 * kPi));
    grow(calib, std::abs(theta_h(Complex(1.0, t), Family::T)));
    grow(calib, std::abs(theta_h(Complex(0.5, t), Family::R)));
  }
  rep.checks.push_back(check("boundary line calibration", calib, 1e-8));

  rep.checks.push_back(check(
      "hCLP point angle", std::abs(theta_h(Complex(0.5, 0.5), Family::R)),
      1e-6));

  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> uim(0.7, 2.5);
  std::uniform_real_distribution<double> ut(-0.95, 0.95);
  std::uniform_real_distribution<double> ur(-0.95, 0.45);

  double mismatch = 0.0;
  for (int i = 0; i < 10; ++i) {
    mismatch = std::max(
        mismatch,
        psi(make_data(Family::T, Complex(ut(rng), uim(rng)))).mismatch);
    mismatch = std::max(
        mismatch,
        psi(make_data(Family::R, Complex(ur(rng), uim(rng)))).mismatch);
  }
  rep.checks.push_back(check("dual period integral", mismatch, 1e-8));

  // The reflected point sits inside a circle disk, past the seed cut for
  // part of the domain, so its angle is continued from tau along the
  // connecting segment.
  double reflect = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Complex tau(ut(rng), uim(rng));
    for (int k : {1, 2}) {
      const Complex shifted = tau + 1.0 - 1.0 / (2.0 * k);
      grow(reflect,
           std::abs(wrap_angle(
               theta_h_continued(tau, pitch_reflect(tau, k), Family::T) +
               theta_h(tau, Family::T) - std::arg(shifted))));
    }
  }
  rep.checks.push_back(check("pitch reflection equation", reflect, 1e-8));

  // sign structure of the residual across the existence region, recorded as
  // the negated worst margin (negative = all signs correct)
  double margin = 1e9;
  for (double t : {0.8, 1.2, 1.8}) {
    margin = std::min(margin, residual(Complex(-1.0, t), Family::T));
  }
  for (double phi : {0.9, 1.6, 2.3}) {
    const Complex tau = -0.5 + 0.5 * std::exp(Complex(0.0, phi));
    margin = std::min(margin, -residual(tau, Family::T));
  }
  for (double eps : {0.2, 0.1}) {
    const Complex tau = 1.0 + eps * std::exp(Complex(0.0, 0.75 * kPi));
    margin = std::min(margin, -residual(tau, Family::T));
  }
  margin = std::min(margin, residual(Complex(0.95, 4.0), Family::T));
  rep.checks.push_back(check("residual sign structure", -margin, 0.0));

  // solved anchors: the gyroid verticals for both tori and the Lidinoid
  double resid = 0.0;
  resid = std::max(resid, std::abs(solve_on_vertical(0.0, Family::T).residual));
  resid = std::max(resid, std::abs(solve_on_vertical(-0.5, Family::R).residual));
  resid = std::max(resid, std::abs(solve_on_vertical(0.0, Family::R).residual));
  rep.checks.push_back(check("family anchor residuals", resid, 1e-10));
  return rep;
}

}  // namespace

bool SuiteReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& validation_suites() {
  static const std::vector<std::string> kNames = {
      "identities", "asymptotics", "closedform", "period-invariants"};
  return kNames;
}

SuiteReport run_validation_suite(const std::string& suite) {
  if (suite == "identities") return suite_identities();
  if (suite == "asymptotics") return suite_asymptotics();
  if (suite == "closedform") return suite_closedform();
  if (suite == "period-invariants") return suite_period_invariants();
  throw DomainError("run_validation_suite: unknown suite '" + suite + "'");
}

}  // namespace gyre
