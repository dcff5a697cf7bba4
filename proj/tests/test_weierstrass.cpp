#include <cmath>
#include <complex>

#include "doctest.h"
#include "gyre/weierstrass.hpp"

using namespace gyre;

namespace {

double cdist(Complex a, Complex b) { return std::abs(a - b); }

}  // namespace

TEST_CASE("family traits") {
  const auto& t = traits(Family::T);
  CHECK(t.screw_order == 4);
  CHECK(t.root_exponent == doctest::Approx(0.5));
  CHECK(t.strip_period == doctest::Approx(2.0));
  CHECK(t.torus_width == doctest::Approx(1.0));
  const auto& r = traits(Family::R);
  CHECK(r.screw_order == 3);
  CHECK(r.root_exponent == doctest::Approx(2.0 / 3.0));
  CHECK(r.strip_period == doctest::Approx(1.5));
  CHECK(r.torus_width == doctest::Approx(0.5));
}

TEST_CASE("tracked gauss map powers back to rho sn") {
  const Complex tau(0.3, 1.1);
  for (Family fam : {Family::T, Family::R}) {
    const auto data = make_data(fam, tau);
    GaussMapTracker trk(data);
    trk.seed(Complex(0.25, 0.0));
    const Complex targets[] = {{0.3, 0.2}, {0.6, 0.4}, {0.2, 0.55},
                               {-0.1, 0.3}, {0.25, 0.1}};
    for (Complex z : targets) {
      trk.advance(z);
      const Complex g = trk.g();
      const Complex rho_sn = data.rho * trk.torus().sn_cell(z);
      if (fam == Family::T) {
        CHECK(cdist(g * g, rho_sn) < 1e-10 * std::abs(rho_sn));
      } else {
        CHECK(cdist(g * g * g, rho_sn * rho_sn) <
              1e-10 * std::abs(rho_sn * rho_sn));
      }
    }
  }
}

TEST_CASE("period integral against frozen references") {
  struct Case {
    Family fam;
    Complex tau;
    Complex want;
    double tol;
  };
  const Case cases[] = {
      {Family::T, {0.3, 1.1}, {0.981478568509339899, 0.433072652971393079}, 5e-11},
      {Family::T, {-0.7, 0.9}, {0.242312463012006513, 0.639878240098024742}, 5e-11},
      {Family::T, {1.0, 1.3}, {1.29573621779616288, 0.0}, 5e-11},
      {Family::T, {0.5, 1.0}, {1.00685079087453699, 0.283915061466875784}, 5e-11},
      {Family::T, {0.0, 0.73}, {0.673482428325238303, 0.370089015772308128}, 5e-11},
      {Family::T, {0.9, 0.65}, {0.917486261474853348, 0.0390163163272059452}, 5e-11},
      // reference values for R carry ~1e-8 of their own quadrature error
      {Family::R, {0.2, 0.9}, {1.15039683067441789, 0.292475504400435238}, 5e-8},
      {Family::R, {-0.5, 0.9}, {0.606196980863818125, 0.829138328151462267}, 5e-8},
      {Family::R, {-0.3, 1.3}, {1.15693278424562007, 1.16084260427830532}, 5e-8},
  };
  for (const auto& c : cases) {
    CAPTURE(c.tau.real());
    CAPTURE(c.tau.imag());
    const auto res = psi(make_data(c.fam, c.tau));
    CHECK(cdist(res.psi, c.want) < c.tol * std::abs(c.want));
    CHECK(res.mismatch < 1e-9);
  }
}

TEST_CASE("closed form agrees with quadrature in every band") {
  const Complex taus[] = {{0.3, 1.1},  {-0.7, 0.9}, {1.0, 1.3}, {0.9, 0.65},
                          {-1.0, 1.0}, {0.5, 1.0},  {0.0, 0.73}, {-0.4, 1.7},
                          {0.5, 0.5}};
  for (Complex tau : taus) {
    CAPTURE(tau.real());
    CAPTURE(tau.imag());
    const Complex num = psi(make_data(Family::T, tau)).psi;
    const Complex closed = psi_closed_form_T(tau);
    CHECK(cdist(num, closed) < 1e-9 * std::abs(num));
  }
}

TEST_CASE("closed form reduces to the single-band product form at r = 1") {
  // In the r = 1 band the bracket collapses to K(mu)/2 and the closed form
  // factors as e^{i pi/4} (1-i)/(2 sqrt 2) m~^{-1/8} K(mu) / (sqrt(1+m~^{1/2}) K).
  for (Complex tau : {Complex(1.0, 1.3), Complex(0.9, 0.65), Complex(0.6, 0.8)}) {
    const auto md = elliptic::modulus_from_tau(tau);
    const Complex mt = md.m;
    const Complex rt = std::sqrt(mt);
    const Complex qt = std::sqrt(rt);
    const Complex mu = (1.0 + qt) * (1.0 + qt) / (2.0 * (1.0 + rt));
    const Complex product = std::exp(Complex(0.0, kPi / 4.0)) *
                            (Complex(1.0, -1.0) / (2.0 * std::sqrt(2.0))) *
                            std::pow(mt, -0.125) * elliptic::complete_K(mu) /
                            (std::sqrt(1.0 + rt) * md.K);
    CHECK(cdist(psi_closed_form_T(tau), product) < 1e-12 * std::abs(product));
  }
}

TEST_CASE("horizontal angle boundary calibration") {
  // vertical boundary of the T domain: theta_h = pi/2 on Re tau = -1,
  // 0 on Re tau = +1
  for (double t : {0.7, 1.0, 2.0}) {
    CHECK(std::abs(theta_h(Complex(-1.0, t), Family::T) - kPi / 2) < 1e-9);
  }
  CHECK(std::abs(theta_h(Complex(1.0, 1.3), Family::T)) < 1e-9);
  // R domain: theta_h = pi/2 on Re tau = -1, 0 on Re tau = 1/2
  CHECK(std::abs(theta_h(Complex(-1.0, 0.9), Family::R) - kPi / 2) < 1e-7);
  CHECK(std::abs(theta_h(Complex(0.5, 1.51), Family::R)) < 1e-7);
  CHECK(std::abs(theta_h(Complex(0.5, 0.5), Family::R)) < 1e-6);
  // interior points just above the unit arc, frozen from the prototype
  CHECK(std::abs(theta_h(std::exp(Complex(0.0, 1.8)), Family::T) -
                 0.7678915513584792) < 1e-9);
  CHECK(std::abs(theta_h(std::exp(Complex(0.0, 2.4)), Family::T) -
                 1.1824209680025557) < 1e-9);
  // frozen interior angles
  CHECK(std::abs(theta_h(Complex(0.3, 1.1), Family::T) - 0.415549579827559412) <
        1e-9);
  CHECK(std::abs(theta_h(Complex(0.0, 1.279261571168675), Family::T) -
                 0.663482970531431793) < 1e-9);
  CHECK(std::abs(theta_h(Complex(-0.5, 0.7817009595864732), Family::R) -
                 0.907313400622203892) < 1e-7);
  CHECK(std::abs(theta_h(Complex(0.0, 1.0347529839465523), Family::R) -
                 0.450123331069469113) < 1e-7);
}

TEST_CASE("gauss map along a path keeps the argument contract") {
  const auto data = make_data(Family::T, Complex(0.3, 1.1));
  const std::vector<Complex> path = {{0.25, 0.0}, {0.45, 0.35}, {0.1, 0.45},
                                     {-0.2, 0.2}};
  const auto vals = gauss_map_along(path, data, 32);
  REQUIRE(vals.size() > path.size());
  for (size_t i = 1; i < vals.size(); ++i) {
    const double dphi = std::abs(std::arg(vals[i] / vals[i - 1]));
    CHECK(dphi < 0.5 * kPi);
  }
  // touching a branch point is an error
  CHECK_THROWS_AS(
      gauss_map_along({Complex(0.25, 0.0), Complex(0.0, 0.0)}, data),
      Error);
}

TEST_CASE("flat structure development of the T annulus") {
  const auto data = make_data(Family::T, Complex(0.3, 1.1));
  const auto flat = flat_structure(data, FlatMap::G, 16);
  REQUIRE(flat.vertices.size() == 10);  // 5 per row
  REQUIRE(flat.rows[0].size() == 4 * 16 + 1);
  REQUIRE(flat.rows[1].size() == 4 * 16 + 1);

  // first bottom edge vector is the inner edge period
  const Complex e0 = flat.vertices[1] - flat.vertices[0];
  CHECK(cdist(e0, Complex(0.221078839764792839, 0.0530319747321665383)) < 2e-9);

  // consecutive bottom edges are rotations by exactly a quarter turn
  for (int j = 0; j + 1 < 4; ++j) {
    const Complex a = flat.vertices[j + 1] - flat.vertices[j];
    const Complex b = flat.vertices[j + 2] - flat.vertices[j + 1];
    const Complex ratio = b / a;
    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-9);
    CHECK(std::abs(std::abs(ratio.imag()) - 1.0) < 1e-9);
    CHECK(std::abs(ratio.real()) < 1e-9);
  }
  // the inner boundary closes up
  Complex loop = 0.0;
  for (int j = 0; j < 4; ++j) loop += flat.vertices[j + 1] - flat.vertices[j];
  CHECK(std::abs(loop) < 1e-9);

  // the step from the inner to the outer boundary is the second edge period
  const Complex step = flat.vertices[5] - flat.vertices[0];
  CHECK(cdist(step, Complex(-0.380040678239964125, 0.760399728750948634)) < 2e-9);

  // outer edges rotate by a quarter turn as well
  for (int j = 5; j + 2 < 10; ++j) {
    const Complex a = flat.vertices[j + 1] - flat.vertices[j];
    const Complex b = flat.vertices[j + 2] - flat.vertices[j + 1];
    const Complex ratio = b / a;
    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-9);
    CHECK(std::abs(ratio.real()) < 1e-9);
  }
}

TEST_CASE("flat structure development of the R annulus") {
  const auto data = make_data(Family::R, Complex(0.2, 0.9));
  for (FlatMap tag : {FlatMap::G, FlatMap::InvG}) {
    const auto flat = flat_structure(data, tag, 12);
    REQUIRE(flat.vertices.size() == 8);  // 4 per row
    // consecutive edges related by a cube root of unity; boundary triangles
    for (int base : {0, 4}) {
      Complex loop = 0.0;
      for (int j = base; j + 1 < base + 4; ++j) {
        loop += flat.vertices[j + 1] - flat.vertices[j];
        if (j + 2 < base + 4) {
          const Complex a = flat.vertices[j + 1] - flat.vertices[j];
          const Complex b = flat.vertices[j + 2] - flat.vertices[j + 1];
          const Complex ratio = b / a;
          CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-8);
          CHECK(std::abs(ratio.real() + 0.5) < 1e-8);  // Re of both cube roots
        }
      }
      CHECK(std::abs(loop) < 1e-8);
    }
  }
}

TEST_CASE("immersion reproduces frozen gyroid points") {
  const auto data =
      make_data(Family::T, Complex(0.0, 1.279261571168675), 0.6634829705123069);
  const auto field = immersion({0.3, 0.6}, {0.2, 0.45}, data);
  REQUIRE(field.nx == 2);
  REQUIRE(field.ny == 2);
  const auto& p = field.at(1, 0);  // x = 0.6, y = 0.2
  CHECK(std::abs(p[0] - 0.270327861306778883) < 1e-9);
  CHECK(std::abs(p[1] - (-0.0489439900111739018)) < 1e-9);
  CHECK(std::abs(p[2] - 0.398921121095588971) < 1e-12);
  const auto& q = field.at(0, 1);  // x = 0.3, y = 0.45
  CHECK(std::abs(q[0] - 0.0556283885354575958) < 1e-9);
  CHECK(std::abs(q[1] - (-0.34970866347588353)) < 1e-9);
  CHECK(std::abs(q[2] - 0.316531690037578473) < 1e-12);
}

TEST_CASE("immersion base point and analytic height") {
  const double theta = 0.3;
  const auto data = make_data(Family::T, Complex(0.3, 1.1), theta);
  const auto field = immersion({0.25, 0.7}, {0.0, 0.3}, data);
  const auto& base = field.at(0, 0);  // z = z0 = 1/4
  CHECK(std::abs(base[0]) < 1e-12);
  CHECK(std::abs(base[1]) < 1e-12);
  CHECK(std::abs(base[2]) < 1e-12);
  // X3 = Re(e^{-i theta}(z - 1/4)) exactly
  const auto& p = field.at(1, 1);
  const Complex dz(0.7 - 0.25, 0.3);
  CHECK(std::abs(p[2] - (std::exp(Complex(0.0, -theta)) * dz).real()) < 1e-13);
}
