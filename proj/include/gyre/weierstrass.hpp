#pragma once

#include <array>
#include <optional>
#include <vector>

#include "gyre/elliptic.hpp"
#include "gyre/types.hpp"

namespace gyre {

// Surface family on the branched square (T) or rhombic (R) torus.
enum class Family { T, R };

struct FamilyTraits {
  Family tag;
  int screw_order;        // order of the vertical screw symmetry
  double root_exponent;   // G = (rho sn)^e
  double strip_period;    // horizontal period of one annulus strip
  double torus_width;     // first lattice vector of the quotient torus
};

const FamilyTraits& traits(Family family);

// Everything needed to evaluate the Gauss map branch at one (family, tau, theta).
struct WeierstrassData {
  Family family;
  Complex tau;
  elliptic::EllipticModulus modulus;
  Complex rho;    // m^{1/4} under the continued-argument convention
  double theta;   // associate rotation angle
};

WeierstrassData make_data(Family family, Complex tau, double theta = 0.0);

// Simultaneous path integrals of the two Weierstrass forms (without the
// e^{-i theta} associate factor).
struct PathIntegral {
  Complex int_g;      // integral of G dz
  Complex int_inv_g;  // integral of dz / G
};

PathIntegral operator+(const PathIntegral& a, const PathIntegral& b);
PathIntegral operator-(const PathIntegral& a, const PathIntegral& b);

// Continuously tracked branch of log(sn(4Kz)) along piecewise-linear paths.
// All z are in torus coordinates (lattice <1, tau~>, scaled by 4K inside sn).
class GaussMapTracker {
 public:
  explicit GaussMapTracker(const WeierstrassData& data);

  // Plant the branch at z with the principal additive seed
  // log sn = Log(sn(4Kz)); z must be regular.
  void seed(Complex z);

  // Continue along the straight segment from the current point to z,
  // bisecting until each argument step is below pi/2.
  void advance(Complex z);

  // Step across a branch vertex lying on the line through the current point
  // and resume_z. vertex_below selects the side the path indents around:
  // true means the vertex lies below the path (path passes above it).
  void hop(Complex vertex, elliptic::VertexKind kind, Complex resume_z,
           bool vertex_below);

  Complex z() const { return z_; }
  Complex log_sn() const { return log_sn_; }
  // log G = e (log_m / 4 + log sn)
  Complex log_g() const;
  Complex g() const;

  // Evaluate sn(4Kz) switching to the near-vertex local model where the
  // theta quotient loses accuracy. delta_hint, when given, is the exact
  // displacement from a known vertex (used instead of lattice reduction,
  // which cannot resolve displacements below machine granularity).
  Complex sn_at(Complex z) const;
  Complex sn_near(elliptic::VertexKind kind, Complex delta) const;

  const WeierstrassData& data() const { return *data_; }
  const elliptic::JacobiTorus& torus() const { return torus_; }

  struct State {
    Complex z;
    Complex log_sn;
  };
  State state() const { return {z_, log_sn_}; }
  void restore(const State& s) { z_ = s.z; log_sn_ = s.log_sn; }

 private:
  void step_to(Complex z, int depth);

  const WeierstrassData* data_;
  elliptic::JacobiTorus torus_;
  Complex z_{0.0, 0.0};
  Complex log_sn_{0.0, 0.0};
};

// One straight integration segment. If an endpoint sits exactly on a branch
// vertex, name it so the quadrature can use exact endpoint displacements.
struct SegmentEnd {
  Complex z;
  std::optional<elliptic::VertexKind> vertex;
};

// Tanh-sinh quadrature of both forms over [a.z, b.z], branch-continued from
// `state` which must hold the tracked branch at the segment midpoint.
// Endpoint vertices are admissible integrable singularities.
PathIntegral integrate_segment(const GaussMapTracker& tracker,
                               const GaussMapTracker::State& mid_state,
                               const SegmentEnd& a, const SegmentEnd& b,
                               double tol = 1e-12);

// The period integral psi = int_0^{(1+tau)/2} G dz together with the dual
// int dz/G over the same path; the two agree for every tau and the residual
// difference measures quadrature plus branch-tracking error.
struct PsiResult {
  Complex psi;
  Complex dual;
  double mismatch;  // |psi - dual| / |psi|
};

PsiResult psi(const WeierstrassData& data, double tol = 1e-12);

// Horizontal period angle: argument of psi.
double theta_h(Complex tau, Family family);

// Closed form for the T family period integral, exact in every band.
Complex psi_closed_form_T(Complex tau);

// Gauss map values along a piecewise-linear path, branch-continued from the
// principal seed at the first point; consecutive samples differ by less than
// pi/2 in argument.
std::vector<Complex> gauss_map_along(const std::vector<Complex>& path,
                                     const WeierstrassData& data,
                                     int samples_per_edge = 64);

// Development of one annulus boundary into the plane: cumulative integrals
// of e^{-i theta} G dz (FlatMap::G) or e^{-i theta} dz / G (FlatMap::InvG)
// along the two boundary rows of the strip.
enum class FlatMap { G, InvG };

struct FlatPolyline {
  FlatMap map_tag;
  // images of the branch vertices along the bottom row then the top row
  std::vector<Complex> vertices;
  // dense samples, one polyline per boundary row
  std::vector<std::vector<Complex>> rows;
  // branch parameters of the vertices, bottom row then top row
  std::vector<Complex> vertex_params;
};

FlatPolyline flat_structure(const WeierstrassData& data, FlatMap map_tag,
                            int n_samples = 32);

// Conformal immersion over a rectangle grid in strip coordinates.
// Grid nodes must avoid branch vertices; the third coordinate is analytic.
struct ImmersionField {
  int nx = 0, ny = 0;           // node counts
  std::vector<double> xs, ys;   // grid lines
  std::vector<std::array<double, 3>> points;  // row-major, y-major order
  const std::array<double, 3>& at(int ix, int iy) const {
    return points[static_cast<size_t>(iy) * nx + ix];
  }
};

ImmersionField immersion(const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const WeierstrassData& data);

// Map a pair of accumulated path integrals to a 3-space displacement.
std::array<double, 3> displacement(const PathIntegral& acc, Complex dz,
                                   double theta);

}  // namespace gyre
