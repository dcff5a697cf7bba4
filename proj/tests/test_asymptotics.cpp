#include <cmath>
#include <complex>

#include "doctest.h"
#include "gyre/asymptotics.hpp"
#include "gyre/elliptic.hpp"
#include "gyre/period.hpp"
#include "gyre/weierstrass.hpp"

using namespace gyre;

namespace {

// Edge integrals at three generic moduli, frozen from the tanh-sinh
// quadrature after cross-checking against the flat-structure development.
const Complex kPsi1A(0.22107883976479337, 0.05303197473216667);   // 0.3+1.1i
const Complex kPsi2A(-0.38004067823996401, 0.7603997287509533);
const Complex kPsi1B(0.30339341255553715, 0.0);                   // 0.73i
const Complex kPsi2B(-0.3700890157735694, 0.37008901577356951);
const Complex kPsi1C(0.2267608814019256, -0.1391678609233262);    // -0.7+0.9i
const Complex kPsi2C(0.24231246301360826, 0.63987824010181737);

// Limits of the bare integrals: the inner one collapses to the beta value
// int_0^1 z^{1/2} (1-z^2)^{-1/2} dz as the modulus vanishes, and the outer
// magnitude scales onto Gamma(1/4)^2/(4 pi^{3/2}).
const double kInnerBeta =
    std::tgamma(0.75) * std::tgamma(0.5) / (2.0 * std::tgamma(1.25));
const double kOuterScale =
    std::pow(std::tgamma(0.25), 2) / (4.0 * std::pow(kPi, 1.5));

// Reconstruct the bare integrals from the prefactored edge vectors.
Complex inner_integral(Complex tau) {
  const auto md = elliptic::modulus_from_tau(tau);
  return 2.0 * md.K * psi1(tau) / elliptic::m_power(md, 0.125);
}

Complex outer_integral(Complex tau) {
  const auto md = elliptic::modulus_from_tau(tau);
  return 4.0 * md.K * psi2(tau) * std::exp(Complex(0.0, -0.75 * kPi)) /
         elliptic::m_power(md, 0.125);
}

}  // namespace

TEST_CASE("edge integrals hit their frozen oracles") {
  CHECK(std::abs(psi1(Complex(0.3, 1.1)) - kPsi1A) < 1e-12);
  CHECK(std::abs(psi2(Complex(0.3, 1.1)) - kPsi2A) < 1e-12);
  CHECK(std::abs(psi1(Complex(0.0, 0.73)) - kPsi1B) < 1e-12);
  CHECK(std::abs(psi2(Complex(0.0, 0.73)) - kPsi2B) < 1e-12);
  CHECK(std::abs(psi1(Complex(-0.7, 0.9)) - kPsi1C) < 1e-12);
  CHECK(std::abs(psi2(Complex(-0.7, 0.9)) - kPsi2C) < 1e-12);
  CHECK_THROWS_AS(psi1(Complex(0.0, -1.0)), DomainError);
  CHECK_THROWS_AS(psi2(Complex(0.0, -1.0)), DomainError);
}

TEST_CASE("inner edge collapses as the torus stretches") {
  // the bare integral loses its modulus dependence, the prefactor kills it
  double prev_mag = 1.0;
  for (double t : {6.0, 8.0}) {
    const Complex tau(0.3, t);
    CHECK(std::abs(inner_integral(tau) - kInnerBeta) < 1e-12);
    const double mag = std::abs(psi1(tau));
    CHECK(mag < 5e-3);
    CHECK(mag < prev_mag);
    prev_mag = mag;
  }
}

TEST_CASE("outer edge grows onto the quarter-constant scale") {
  // |psi2| ~ kOuterScale |m|^{-1/8}; deviations frozen at 9.0e-4, 3.9e-5,
  // 1.7e-6 for t = 4, 6, 8
  const double bounds[3] = {1e-3, 5e-5, 5e-6};
  double prev = 1.0;
  int i = 0;
  for (double t : {4.0, 6.0, 8.0}) {
    const Complex tau(0.3, t);
    const auto md = elliptic::modulus_from_tau(tau);
    const double scaled = std::abs(psi2(tau) * elliptic::m_power(md, 0.125));
    const double dev = std::abs(scaled - kOuterScale);
    CHECK(dev < bounds[i++]);
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("horizontal angle reaches the far-field asymptote") {
  CHECK(theta_h_asymptote(Complex(1.0, 4.0), Family::T) ==
        doctest::Approx(0.0));
  CHECK(theta_h_asymptote(Complex(-1.0, 4.0), Family::T) ==
        doctest::Approx(kPi / 2.0));
  CHECK(theta_h_asymptote(Complex(0.5, 4.0), Family::R) ==
        doctest::Approx(0.0));

  // worst deviation over the sampled real parts decays like e^{-pi t/2};
  // the frozen front constants sit near 0.82 (T) and 0.095 (R)
  for (Family fam : {Family::T, Family::R}) {
    double prev = 1.0;
    for (double t : {4.0, 6.0, 8.0}) {
      double worst = 0.0;
      for (double re : {-0.8, -0.3, 0.4, 0.9}) {
        const auto rep =
            asymptote_report(Complex(re, t), fam, AsymptoteRegime::TauInf);
        CHECK(rep.theta_h_limit ==
              doctest::Approx(theta_h_asymptote(rep.tau, fam)));
        CHECK(rep.deviation ==
              doctest::Approx(std::abs(
                  wrap_angle(rep.theta_h_numeric - rep.theta_h_limit))));
        worst = std::max(worst, rep.deviation);
      }
      if (t == 4.0) CHECK(worst < 1e-2);
      if (t == 6.0) CHECK(worst < 1e-3);
      CHECK(worst * std::exp(kPi * t / 2.0) < 10.0);
      CHECK(worst < prev);
      prev = worst;
    }
  }
}

TEST_CASE("pinch approach along the vertical line") {
  // tau = 1 + iy keeps the reduced modulus real, so the edge integral and
  // the complete integral share a branch and psi1 -> m^{1/8}/2; the frozen
  // ratios 0.111, 0.056, 0.028 halve with y
  double prev = 1.0;
  for (double y : {0.2, 0.1, 0.05}) {
    const Complex tau(1.0, y);
    const auto md = elliptic::modulus_from_tau(tau);
    CHECK(std::abs(std::arg(md.m)) < 1e-14);
    const double dev =
        std::abs(2.0 * psi1(tau) / elliptic::m_power(md, 0.125) - 1.0);
    CHECK(dev < 0.65 * prev);
    prev = dev;
  }
  CHECK(prev < 0.03);
}

TEST_CASE("pinch approach along the oblique ray") {
  // along tau = 1 + eps e^{3 pi i/4} the reduced modulus spirals into 1 and
  // the literal inner integral tracks the principal branch of -log(1-m~)/2;
  // frozen ratio deviations 0.68, 0.22, 0.096
  double prev_dev = 1.0;
  double prev_j2 = 1.0;
  double prev_th = kPi;
  for (double eps : {0.2, 0.1, 0.05}) {
    const Complex tau = 1.0 + eps * std::exp(Complex(0.0, 0.75 * kPi));
    const auto md = elliptic::modulus_from_tau(tau);

    const Complex target = -0.5 * std::log(1.0 - md.m);
    const double dev = std::abs(inner_integral(tau) / target - 1.0);
    CHECK(dev < prev_dev);
    prev_dev = dev;

    // the outer integral settles onto pi/sqrt 2 much faster
    const double j2 = std::abs(outer_integral(tau) - kPi / std::sqrt(2.0));
    CHECK(j2 < prev_j2);
    prev_j2 = j2;

    // the horizontal angle shrinks in magnitude but stays above zero here:
    // the ray runs outside the solved family, where the period residual is
    // already negative
    const double th = theta_h(tau, Family::T);
    CHECK(th > 0.0);
    CHECK(th < prev_th);
    prev_th = th;
    CHECK(residual(tau, Family::T) < 0.0);
  }
  CHECK(prev_dev < 0.10);
  CHECK(prev_j2 < 1e-7);

  // between the ray and the unit circle the reduced modulus dips strictly
  // below the real axis
  for (auto [eps, dphi] : {std::pair{0.2, 0.05}, std::pair{0.1, 0.025}}) {
    const Complex tau =
        1.0 + eps * std::exp(Complex(0.0, 0.5 * kPi + dphi));
    CHECK(std::arg(elliptic::modulus_from_tau(tau).m) < 0.0);
  }
}

TEST_CASE("closed-form edge vectors match quadrature and development") {
  // the inner formula holds on every band, including the negative-modulus
  // band edge
  for (Complex tau : {Complex(0.3, 1.1), Complex(-0.7, 0.9),
                      Complex(-1.2, 0.9), Complex(0.5, 0.9),
                      Complex(1.0, 1.2), Complex(1.3, 1.1)}) {
    const auto ev = closed_form_edges_T(tau);
    CHECK(std::abs(ev.inner / psi1(tau) - 1.0) < 1e-10);
  }

  // the rotated edge combination reproduces the period closed form on the
  // band Re tau~ shifted by one, where that expression lives
  for (Complex tau :
       {Complex(1.0, 1.2), Complex(0.7, 0.9), Complex(1.3, 1.1)}) {
    const auto ev = closed_form_edges_T(tau);
    const Complex comb = 0.5 * Complex(1.0, -1.0) * (ev.inner + ev.outer);
    CHECK(std::abs(comb / psi_closed_form_T(tau) - 1.0) < 1e-12);
  }

  // development of the annulus boundary: first bottom edge, step up to the
  // first top vertex, first top edge (the rectangular torus exercises the
  // vanishing carry leg)
  for (Complex tau :
       {Complex(0.3, 1.1), Complex(-0.7, 0.9), Complex(1.0, 1.2)}) {
    const auto data = make_data(Family::T, tau, 0.0);
    const auto fp = flat_structure(data, FlatMap::G, 16);
    const size_t nb = fp.vertices.size() / 2;
    REQUIRE(nb >= 2);
    const Complex d_inner = fp.vertices[1] - fp.vertices[0];
    const Complex d_step = fp.vertices[nb] - fp.vertices[0];
    const Complex d_outer = fp.vertices[nb + 1] - fp.vertices[nb];
    const auto ev = closed_form_edges_T(tau);
    CHECK(std::abs(d_inner / psi1(tau) - 1.0) < 1e-10);
    CHECK(std::abs(d_step / psi2(tau) - 1.0) < 1e-10);
    CHECK(std::abs(d_outer / ev.outer - 1.0) < 1e-10);
  }
}
