#include <cmath>
#include <complex>

#include "doctest.h"
#include "gyre/period.hpp"

using namespace gyre;

namespace {

// Family anchors frozen from high-precision solves of the period condition;
// the solver itself is the oracle, cross-checked at doubled quadrature
// precision before freezing.
constexpr double kGyroidIm = 1.279261571168675;
constexpr double kGyroidTheta = 0.6634829705123069;
constexpr double kRGyroidIm = 0.7817009595864732;
constexpr double kLidinoidIm = 1.0347529839465523;

}  // namespace

TEST_CASE("vertical angle closed forms") {
  CHECK(theta_v(Complex(1.0, 1.51019), Family::T) == doctest::Approx(0.0));
  CHECK(theta_v(Complex(0.0, 1.0), Family::T) == doctest::Approx(kPi / 4.0));
  CHECK(theta_v(Complex(0.5, 1.51), Family::R) == doctest::Approx(0.0));
  // the general-pitch formula collapses to the pitch-1 arg expressions
  for (Complex tau : {Complex(0.2, 0.9), Complex(-0.6, 1.4)}) {
    CHECK(theta_v(tau, Family::T, 1) ==
          doctest::Approx(std::arg(tau - 1.0) - kPi / 2.0));
    CHECK(theta_v(tau, Family::R, 1) ==
          doctest::Approx(std::arg(tau - 0.5) - kPi / 2.0));
  }
  // higher pitch shifts the pivot toward tau = -1
  CHECK(theta_v(Complex(0.0, 1.0), Family::T, 2) ==
        doctest::Approx(std::arg(Complex(0.0, 1.0)) - kPi / 2.0));
  CHECK_THROWS_AS(theta_v(Complex(0.0, 1.0), Family::T, 0), DomainError);
  CHECK_THROWS_AS(theta_v(Complex(0.0, -1.0), Family::T), DomainError);
}

TEST_CASE("residual sign structure across the existence regions") {
  // left boundary line: horizontal angle pinned at pi/2 beats theta_v
  for (double t : {0.6, 1.0, 1.5, 2.5}) {
    CHECK(residual(Complex(-1.0, t), Family::T) > 0.0);
  }
  // lower circle |tau + 1/2| = 1/2: horizontal angle loses
  for (double ph : {0.35, 0.5, 0.65}) {
    const Complex tau =
        Complex(-0.5, 0.0) + 0.5 * std::exp(Complex(0.0, kPi * ph));
    CHECK(residual(tau, Family::T) < 0.0);
  }
  // approach to tau = 1 inside the region, and the far vertical end
  for (double eps : {0.2, 0.1, 0.05}) {
    const Complex tau = 1.0 + eps * std::exp(Complex(0.0, 3.0 * kPi / 4.0));
    CHECK(residual(tau, Family::T) < 0.0);
  }
  CHECK(residual(Complex(0.95, 3.0), Family::T) > 0.0);
  CHECK(residual(Complex(0.95, 5.0), Family::T) > 0.0);

  // R right half-circle |tau - 1/2| = 1/2: exactly one sign change, located
  // at the top point (1+i)/2
  int changes = 0;
  double prev = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double ph = kPi * (0.3 + 0.04 * i);
    const Complex tau =
        Complex(0.5, 0.0) + 0.5 * std::exp(Complex(0.0, ph));
    const double res = residual(tau, Family::R);
    if (i > 0 && res * prev < 0.0) {
      ++changes;
      CHECK(ph > 0.49 * kPi);
      CHECK(ph < 0.55 * kPi);
    }
    prev = res;
  }
  CHECK(changes == 1);
}

TEST_CASE("vertical line solves recover the frozen family anchors") {
  const SolvedPoint g = solve_on_vertical(0.0, Family::T);
  CHECK(std::abs(g.tau.imag() - kGyroidIm) < 1e-9);
  CHECK(std::abs(g.theta - kGyroidTheta) < 1e-9);
  CHECK(std::abs(g.residual) < 1e-10);
  CHECK(g.all_roots.size() == 1);

  const SolvedPoint rg = solve_on_vertical(-0.5, Family::R);
  CHECK(std::abs(rg.tau.imag() - kRGyroidIm) < 1e-8);
  CHECK(rg.all_roots.size() == 1);

  const SolvedPoint li = solve_on_vertical(0.0, Family::R);
  CHECK(std::abs(li.tau.imag() - kLidinoidIm) < 5e-8);
  CHECK(li.all_roots.size() == 1);

  // a vertical with a second, spurious crossing below the boundary circle:
  // the returned point is the topmost root, the low one is only reported
  const SolvedPoint two = solve_on_vertical(-0.6, Family::T);
  CHECK(two.all_roots.size() == 2);
  CHECK(two.tau.imag() == doctest::Approx(0.850540).epsilon(1e-4));
  CHECK(two.all_roots.front() < 0.5);

  // a loosened refinement target still brackets the same root
  const SolvedPoint loose =
      solve_on_vertical(0.0, Family::T, 1, 0.05, 20.0, 1e-6);
  CHECK(std::abs(loose.residual) < 1e-6);
  CHECK(std::abs(loose.tau.imag() - kGyroidIm) < 1e-4);
  CHECK_THROWS_AS(solve_on_vertical(0.0, Family::T, 1, 0.05, 20.0, 0.0),
                  DomainError);
}

TEST_CASE("no bracket reports the scan table") {
  try {
    solve_on_vertical(0.0, Family::T, 1, 5.0, 20.0);
    FAIL("expected BracketError");
  } catch (const BracketError& e) {
    CHECK(e.table.size() == 120);
    int valid = 0;
    for (const auto& p : e.table) {
      if (p.valid) {
        ++valid;
        CHECK(p.residual > 0.0);  // no root above the family curve
      }
    }
    CHECK(valid == 120);
  }
}

TEST_CASE("family traces stay on the curve") {
  const FamilyCurve tg = trace_family(Family::T, 1, -0.6, 0.6, 0.1);
  CHECK(tg.points.size() == 13);
  for (std::size_t i = 0; i < tg.points.size(); ++i) {
    const auto& p = tg.points[i];
    CHECK(std::abs(p.residual) < 1e-9);
    if (i > 0) {
      CHECK(p.re_tau > tg.points[i - 1].re_tau);
      CHECK(std::abs(p.im_tau - tg.points[i - 1].im_tau) < 0.1);
    }
    if (std::abs(p.re_tau) < 1e-12) {
      CHECK(std::abs(p.im_tau - kGyroidIm) < 1e-9);
      CHECK(std::abs(p.theta - kGyroidTheta) < 1e-9);
    }
  }

  const FamilyCurve rgl = trace_family(Family::R, 1, -0.7, 0.4, 0.1);
  bool saw_gyroid = false, saw_lidinoid = false;
  for (const auto& p : rgl.points) {
    CHECK(std::abs(p.residual) < 1e-9);
    if (std::abs(p.re_tau + 0.5) < 1e-12) {
      CHECK(std::abs(p.im_tau - kRGyroidIm) < 1e-8);
      saw_gyroid = true;
    }
    if (std::abs(p.re_tau) < 1e-12) {
      CHECK(std::abs(p.im_tau - kLidinoidIm) < 5e-8);
      saw_lidinoid = true;
    }
  }
  CHECK(saw_gyroid);
  CHECK(saw_lidinoid);
}

TEST_CASE("pitch reflection is the circle involution") {
  // on-circle fixed point, k = 1
  const Complex fixed(-0.5, 0.5);
  CHECK(std::abs(pitch_reflect(fixed, 1) - fixed) < 1e-15);
  // involution and upper half-plane preservation
  for (Complex tau : {Complex(0.3, 1.1), Complex(-0.45, 0.85)}) {
    for (int k : {1, 2, 3}) {
      const Complex tp = pitch_reflect(tau, k);
      CHECK(tp.imag() > 0.0);
      CHECK(std::abs(pitch_reflect(tp, k) - tau) < 1e-14);
    }
  }
  // functional equation for the horizontal angle
  for (int k : {1, 2}) {
    for (Complex tau :
         {Complex(0.3, 1.1), Complex(-0.45, 0.85), Complex(0.62, 1.42)}) {
      const Complex tp = pitch_reflect(tau, k);
      const double lhs = theta_h(tau, Family::T) + theta_h(tp, Family::T);
      const double rhs = std::arg(tau + 1.0 - 0.5 / k);
      CHECK(std::abs(std::remainder(lhs - rhs, 2.0 * kPi)) < 1e-12);
    }
  }

  // near Re tau = 0.9 the k = 1 image lands past the seed cut inside the
  // disk: the stateless angle sits on the other sheet (off by exactly pi)
  // and the segment-continued angle closes the identity
  for (Complex tau : {Complex(0.9, 0.7), Complex(0.9, 2.0)}) {
    const Complex tp = pitch_reflect(tau, 1);
    const double rhs = std::arg(tau + 0.5);
    const double stateless = theta_h(tau, Family::T) + theta_h(tp, Family::T);
    CHECK(std::abs(std::remainder(stateless - rhs, 2.0 * kPi)) ==
          doctest::Approx(kPi).epsilon(1e-9));
    const double cont =
        theta_h(tau, Family::T) + theta_h_continued(tau, tp, Family::T);
    CHECK(std::abs(std::remainder(cont - rhs, 2.0 * kPi)) < 1e-10);
  }

  // where no cut is crossed, continuation reproduces the stateless value
  const Complex near_tau(0.3, 1.1);
  const Complex near_tp = pitch_reflect(near_tau, 1);
  CHECK(theta_h_continued(near_tau, near_tp, Family::T) ==
        doctest::Approx(theta_h(near_tp, Family::T)).epsilon(1e-11));
}

TEST_CASE("family endpoints on the closing vertical lines") {
  const double tD = locate_tD_intersection();
  CHECK(std::abs(tD - 1.51019) < 2e-3);
  CHECK(std::abs(tD - 1.510191) < 1e-4);  // frozen extrapolant
  CHECK(theta_v(Complex(1.0, tD), Family::T) == doctest::Approx(0.0));

  const double rPD = locate_rPD_intersection();
  CHECK(rPD > 0.5);
  CHECK(rPD < 3.0);
  CHECK(std::abs(rPD - 1.114471) < 1e-3);  // frozen extrapolant
}

TEST_CASE("solved points align the branch point images vertically") {
  for (auto [fam, r] : {std::pair{Family::T, 0.0}, {Family::R, -0.5}}) {
    const SolvedPoint sp = solve_on_vertical(r, fam);
    const auto data = make_data(fam, sp.tau, sp.theta);
    const PsiResult pr = psi(data);
    const auto d =
        displacement({pr.psi, pr.dual}, 0.5 * (1.0 + sp.tau), sp.theta);
    const double horiz = std::hypot(d[0], d[1]);
    CHECK(horiz < 1e-8 * std::abs(d[2]));
  }
}
