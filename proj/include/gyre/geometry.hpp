#pragma once

#include <array>
#include <string>
#include <vector>

#include "gyre/period.hpp"
#include "gyre/weierstrass.hpp"

namespace gyre {

using Vec3 = std::array<double, 3>;

// Quad mesh in raw Weierstrass units. Boundary loops are cyclic index lists;
// they may include vertices that no quad references (exact branch-point
// images inserted so the exported boundary closes at the corners).
struct Mesh {
  struct Loop {
    std::string label;
    std::vector<int> indices;
  };
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> quads;
  std::vector<Loop> boundary_loops;
  std::vector<Vec3> lattice_vectors;  // empty, or three independent vectors
};

// Rigid motions used to assemble fundamental units: the vertical screw, the
// point inversion through a branch-cell edge midpoint image, and the lattice
// translations their compositions generate.
struct Isometry {
  enum class Kind { Screw, Inversion, Translation };
  Kind kind = Kind::Translation;
  Vec3 point{};   // axis base point / inversion center
  Vec3 axis{};    // unit axis direction (screw)
  double angle = 0.0;
  Vec3 offset{};  // translation along the axis / plain translation
};

Vec3 apply_isometry(const Isometry& iso, const Vec3& p);

// The surface's vertical screw: z -> z + 1/2 in strip coordinates, rotation
// by 2 pi / screw_order about a vertical axis plus a vertical offset. The
// axis position is recovered from the images of the base point.
Isometry screw_generator(const WeierstrassData& data);

// Point inversion through the image of the k-th bottom edge midpoint
// z = 1/4 + k/2. For k = 0 the center is the immersion origin.
Isometry edge_inversion(const WeierstrassData& data, int k);

// Twisted catenoid: the strip [0, strip_period] x [0, Im tau~ / 2] at
// theta = pi/2. nu = quad columns per half-period edge (even, >= 2), so one
// strip gives 2 * strip_period * nu columns; nv = quad rows (>= 2). Columns
// are offset half a cell so no node hits a branch vertex; the seam at the
// strip period is welded. Boundary loops "bottom" and "top" run through the
// exact branch-point images.
Mesh catenoid_mesh(const WeierstrassData& data, int nu, int nv);

// Gyrating ribbon at a solved point: the same strip continued over `turns`
// strip periods, left open (boundary loop "rim"). Throws MeshError unless
// theta matches both period angles to angle_tol.
Mesh ribbon_mesh(const WeierstrassData& data, int nu, int nv, int turns,
                 double angle_tol = 1e-6);

// Two adjacent ribbons: the input plus its image under inversion through the
// first bottom edge midpoint image, with the translation lattice attached
// (two generators from composed bottom-edge inversions, one from the screw
// composed to a full turn). Throws MeshError if the identified boundary
// samples deviate by more than 1e-5 of the mesh diameter.
Mesh fundamental_unit(const Mesh& ribbon, const WeierstrassData& data);

// Max five-point Laplacian magnitude over interior grid nodes; a discrete
// minimality proxy that shrinks ~4x per grid halving for a harmonic
// immersion.
double laplacian_defect(const ImmersionField& field);

// ASCII OBJ: header comment, `v` lines at 9 significant digits, 1-based
// quad `f` lines. Deterministic byte-for-byte.
void export_obj(const Mesh& mesh, const WeierstrassData& data,
                const std::string& path);

// Flat-structure developments as an SVG (1000 x 1000 viewBox): one path per
// boundary row, 3-unit circles at the branch-point images.
void export_svg_flat(const std::vector<FlatPolyline>& polylines,
                     const std::string& path);

// Family curve as CSV: header re_tau,im_tau,theta,residual,psi_re,psi_im,
// 12 significant digits, LF endings.
void export_csv_curve(const FamilyCurve& curve, const std::string& path);
std::vector<FamilyPoint> parse_csv_curve(const std::string& path);

}  // namespace gyre
