#include "gyre/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace gyre {

namespace {

constexpr double kTol = 1e-12;

// Displacement of the immersion at z relative to the base point, routed like
// the field integrator: up to the vertex-free mid-height highway, across,
// then along the column. The last leg may end on a branch vertex (the
// quadrature resolves endpoint singularities); everything in between stays
// clear of them.
Vec3 point_at(const WeierstrassData& data, Complex z) {
  const Complex z0(0.25, 0.0);
  if (std::abs(z - z0) == 0.0) return {0.0, 0.0, 0.0};
  const double ym = 0.25 * data.modulus.red.tilde.imag();

  GaussMapTracker walker(data);
  walker.seed(z0);
  PathIntegral acc{};
  Complex prev = z0;
  const Complex legs[3] = {Complex(0.25, ym), Complex(z.real(), ym), z};
  for (const Complex& target : legs) {
    const double len = std::abs(target - prev);
    if (len == 0.0) continue;
    // short hops, like the field marcher: the continuation anchor must stay
    // close to every quadrature node
    const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.25)));
    for (int k = 1; k <= steps; ++k) {
      const Complex b = prev + (target - prev) * (double(k) / steps);
      const Complex a = prev + (target - prev) * (double(k - 1) / steps);
      walker.advance(0.5 * (a + b));
      const auto st = walker.state();
      acc = acc + integrate_segment(walker, st, {a, {}}, {b, {}}, kTol);
      if (std::abs(b - z) > 0.0) {
        walker.restore(st);
        walker.advance(b);
      }
    }
    prev = target;
  }
  return displacement(acc, z - z0, data.theta);
}

// Columns with half-cell offset: nu per half-period edge over `periods`
// strip periods. No column passes through a branch vertex for even nu.
std::vector<double> strip_columns(const FamilyTraits& tr, int nu,
                                  int periods) {
  if (nu < 2 || nu % 2 != 0) {
    throw DomainError("mesh grid needs an even number of columns per edge");
  }
  const int edges =
      static_cast<int>(std::lround(tr.strip_period / 0.5)) * periods;
  std::vector<double> xs(static_cast<size_t>(edges) * nu);
  const double hx = 0.5 / nu;
  for (size_t i = 0; i < xs.size(); ++i) xs[i] = (i + 0.5) * hx;
  return xs;
}

std::vector<double> strip_rows(double height, int nv) {
  if (nv < 2) throw DomainError("mesh grid needs at least two quad rows");
  std::vector<double> ys(static_cast<size_t>(nv) + 1);
  for (int j = 0; j <= nv; ++j) ys[j] = height * j / nv;
  return ys;
}

struct LabeledPoint {
  double x;
  int index;
};

// Boundary loop along one row: sampled nodes merged with the exact corner
// images by column position.
std::vector<int> merge_row(const std::vector<LabeledPoint>& samples,
                           const std::vector<LabeledPoint>& corners) {
  std::vector<LabeledPoint> all = samples;
  all.insert(all.end(), corners.begin(), corners.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const LabeledPoint& a, const LabeledPoint& b) {
                     return a.x < b.x;
                   });
  std::vector<int> loop(all.size());
  for (size_t i = 0; i < all.size(); ++i) loop[i] = all[i].index;
  return loop;
}

int append_vertex(Mesh& mesh, const Vec3& p) {
  mesh.vertices.push_back(p);
  return static_cast<int>(mesh.vertices.size()) - 1;
}

double mesh_diameter(const Mesh& mesh) {
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const auto& v : mesh.vertices) {
    for (int c = 0; c < 3; ++c) {
      lo[c] = std::min(lo[c], v[c]);
      hi[c] = std::max(hi[c], v[c]);
    }
  }
  if (mesh.vertices.empty()) return 0.0;
  return std::hypot(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]);
}

Vec3 rotate_about_axis(const Vec3& p, const Vec3& base, const Vec3& axis,
                       double angle) {
  const Vec3 d{p[0] - base[0], p[1] - base[1], p[2] - base[2]};
  const double c = std::cos(angle), s = std::sin(angle);
  const double k = d[0] * axis[0] + d[1] * axis[1] + d[2] * axis[2];
  const Vec3 cr{axis[1] * d[2] - axis[2] * d[1],
                axis[2] * d[0] - axis[0] * d[2],
                axis[0] * d[1] - axis[1] * d[0]};
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = base[i] + d[i] * c + cr[i] * s + axis[i] * k * (1.0 - c);
  }
  return out;
}

std::FILE* open_or_throw(const std::string& path, const char* who) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError(std::string(who) + ": cannot write " + path);
  return f;
}

}  // namespace

Vec3 apply_isometry(const Isometry& iso, const Vec3& p) {
  switch (iso.kind) {
    case Isometry::Kind::Translation:
      return {p[0] + iso.offset[0], p[1] + iso.offset[1],
              p[2] + iso.offset[2]};
    case Isometry::Kind::Inversion:
      return {2.0 * iso.point[0] - p[0], 2.0 * iso.point[1] - p[1],
              2.0 * iso.point[2] - p[2]};
    case Isometry::Kind::Screw: {
      Vec3 q = rotate_about_axis(p, iso.point, iso.axis, iso.angle);
      return {q[0] + iso.offset[0], q[1] + iso.offset[1],
              q[2] + iso.offset[2]};
    }
  }
  throw DomainError("apply_isometry: unknown isometry kind");
}

Isometry screw_generator(const WeierstrassData& data) {
  const auto& tr = traits(data.family);
  const double h = 0.5 * data.modulus.red.tilde.imag();
  // two generic probes and their half-period shifts
  const Complex za(0.3, 0.3 * h), zb(0.45, 0.45 * h);
  const Vec3 pa = point_at(data, za);
  const Vec3 pa2 = point_at(data, za + 0.5);
  const Vec3 pb = point_at(data, zb);
  const Vec3 pb2 = point_at(data, zb + 0.5);

  // rotation angle from the turning of the chord, snapped to the screw order
  const double ux = pb[0] - pa[0], uy = pb[1] - pa[1];
  const double vx = pb2[0] - pa2[0], vy = pb2[1] - pa2[1];
  const double phi = std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
  const double step = 2.0 * kPi / tr.screw_order;
  const double snapped = phi < 0.0 ? -step : step;
  if (std::abs(phi - snapped) > 1e-6) {
    throw MeshError("screw_generator: probe turning angle " +
                    std::to_string(phi) + " is not a screw of order " +
                    std::to_string(tr.screw_order));
  }

  // fixed point of the horizontal rotation part: (I - R) c = p' - R p
  const double c = std::cos(snapped), s = std::sin(snapped);
  const double rx = pa2[0] - (c * pa[0] - s * pa[1]);
  const double ry = pa2[1] - (s * pa[0] + c * pa[1]);
  const double det = 2.0 * (1.0 - c);
  const double cx = ((1.0 - c) * rx - s * ry) / det;
  const double cy = (s * rx + (1.0 - c) * ry) / det;

  Isometry iso;
  iso.kind = Isometry::Kind::Screw;
  iso.point = {cx, cy, 0.0};
  iso.axis = {0.0, 0.0, 1.0};
  iso.angle = snapped;
  iso.offset = {0.0, 0.0, pa2[2] - pa[2]};

  const Vec3 check = apply_isometry(iso, pb);
  const double scale = 1.0 + std::abs(pb2[0]) + std::abs(pb2[1]);
  if (std::hypot(check[0] - pb2[0], check[1] - pb2[1], check[2] - pb2[2]) >
      1e-8 * scale) {
    throw MeshError("screw_generator: probes do not close onto a screw");
  }
  return iso;
}

Isometry edge_inversion(const WeierstrassData& data, int k) {
  Isometry iso;
  iso.kind = Isometry::Kind::Inversion;
  iso.point = point_at(data, Complex(0.25 + 0.5 * k, 0.0));
  return iso;
}

Mesh catenoid_mesh(const WeierstrassData& data, int nu, int nv) {
  if (std::abs(wrap_angle(data.theta - 0.5 * kPi)) > 1e-9) {
    throw DomainError(
        "catenoid_mesh: boundary rows are planar only at theta = pi/2");
  }
  const auto& tr = traits(data.family);
  const Complex tt = data.modulus.red.tilde;
  const double height = 0.5 * tt.imag();
  const auto xs = strip_columns(tr, nu, 1);
  const auto ys = strip_rows(height, nv);
  const int ncol = static_cast<int>(xs.size());
  const int edges = static_cast<int>(std::lround(tr.strip_period / 0.5));

  const ImmersionField field = immersion(xs, ys, data);

  Mesh mesh;
  mesh.vertices.reserve(field.points.size() + 2 * edges);
  for (const auto& p : field.points) mesh.vertices.push_back(p);

  // welded seam: the last column of quads wraps to column 0
  for (int iy = 0; iy < nv; ++iy) {
    for (int ix = 0; ix < ncol; ++ix) {
      const int jx = (ix + 1) % ncol;
      mesh.quads.push_back({iy * ncol + ix, iy * ncol + jx,
                            (iy + 1) * ncol + jx, (iy + 1) * ncol + ix});
    }
  }

  // exact corner images interleaved into the two boundary loops
  std::vector<LabeledPoint> bottom_samples, top_samples;
  for (int ix = 0; ix < ncol; ++ix) {
    bottom_samples.push_back({xs[ix], ix});
    top_samples.push_back({xs[ix], nv * ncol + ix});
  }
  std::vector<LabeledPoint> bottom_corners, top_corners;
  for (int k = 0; k < edges; ++k) {
    const double xb = 0.5 * k;
    bottom_corners.push_back(
        {xb, append_vertex(mesh, point_at(data, Complex(xb, 0.0)))});
    double xt = 0.5 * tt.real() + 0.5 * k;
    while (xt < 0.0) xt += tr.strip_period;
    while (xt >= tr.strip_period) xt -= tr.strip_period;
    top_corners.push_back(
        {xt, append_vertex(mesh, point_at(data, Complex(xt, height)))});
  }
  mesh.boundary_loops.push_back(
      {"bottom", merge_row(bottom_samples, bottom_corners)});
  mesh.boundary_loops.push_back({"top", merge_row(top_samples, top_corners)});
  return mesh;
}

Mesh ribbon_mesh(const WeierstrassData& data, int nu, int nv, int turns,
                 double angle_tol) {
  if (turns < 1) throw DomainError("ribbon_mesh needs turns >= 1");
  if (!(angle_tol > 0.0)) {
    throw DomainError("ribbon_mesh: angle_tol must be positive");
  }
  const double gap_h = std::abs(wrap_angle(data.theta - theta_h(data.tau, data.family)));
  const double gap_v = std::abs(wrap_angle(data.theta - theta_v(data.tau, data.family)));
  if (gap_h > angle_tol || gap_v > angle_tol) {
    throw MeshError("ribbon_mesh needs a solved point: |theta - theta_h| = " +
                    std::to_string(gap_h) + ", |theta - theta_v| = " +
                    std::to_string(gap_v));
  }
  const auto& tr = traits(data.family);
  const Complex tt = data.modulus.red.tilde;
  const double height = 0.5 * tt.imag();
  const auto xs = strip_columns(tr, nu, turns);
  const auto ys = strip_rows(height, nv);
  const int ncol = static_cast<int>(xs.size());
  const int edges =
      static_cast<int>(std::lround(tr.strip_period / 0.5)) * turns;
  const double span = tr.strip_period * turns;

  const ImmersionField field = immersion(xs, ys, data);

  Mesh mesh;
  mesh.vertices.reserve(field.points.size() + 2 * edges + 2);
  for (const auto& p : field.points) mesh.vertices.push_back(p);
  for (int iy = 0; iy < nv; ++iy) {
    for (int ix = 0; ix + 1 < ncol; ++ix) {
      mesh.quads.push_back({iy * ncol + ix, iy * ncol + ix + 1,
                            (iy + 1) * ncol + ix + 1, (iy + 1) * ncol + ix});
    }
  }

  std::vector<LabeledPoint> bottom_samples, top_samples;
  for (int ix = 0; ix < ncol; ++ix) {
    bottom_samples.push_back({xs[ix], ix});
    top_samples.push_back({xs[ix], nv * ncol + ix});
  }
  std::vector<LabeledPoint> bottom_corners, top_corners;
  for (int k = 0; k <= edges; ++k) {
    const double xb = 0.5 * k;
    bottom_corners.push_back(
        {xb, append_vertex(mesh, point_at(data, Complex(xb, 0.0)))});
  }
  for (int k = -1; k <= 2 * edges; ++k) {
    const double xt = 0.5 * tt.real() + 0.5 * k;
    if (xt < 0.0 || xt > span) continue;
    top_corners.push_back(
        {xt, append_vertex(mesh, point_at(data, Complex(xt, height)))});
  }

  // single closed rim: bottom left-to-right, right cut upward, top
  // right-to-left, left cut downward
  std::vector<int> rim = merge_row(bottom_samples, bottom_corners);
  for (int iy = 1; iy < nv; ++iy) rim.push_back(iy * ncol + ncol - 1);
  std::vector<int> top = merge_row(top_samples, top_corners);
  rim.insert(rim.end(), top.rbegin(), top.rend());
  for (int iy = nv - 1; iy >= 1; --iy) rim.push_back(iy * ncol);
  mesh.boundary_loops.push_back({"rim", std::move(rim)});
  return mesh;
}

Mesh fundamental_unit(const Mesh& ribbon, const WeierstrassData& data) {
  if (ribbon.boundary_loops.empty() ||
      ribbon.boundary_loops.front().label != "rim") {
    throw DomainError("fundamental_unit expects a ribbon_mesh product");
  }
  const Isometry inv = edge_inversion(data, 0);
  const int n = static_cast<int>(ribbon.vertices.size());

  Mesh unit;
  unit.vertices.reserve(2 * ribbon.vertices.size());
  unit.vertices = ribbon.vertices;
  for (const auto& v : ribbon.vertices) unit.vertices.push_back(apply_isometry(inv, v));
  unit.quads.reserve(2 * ribbon.quads.size());
  unit.quads = ribbon.quads;
  for (const auto& q : ribbon.quads) {
    unit.quads.push_back({q[3] + n, q[2] + n, q[1] + n, q[0] + n});
  }
  for (const auto& loop : ribbon.boundary_loops) {
    unit.boundary_loops.push_back({loop.label + "_a", loop.indices});
    Mesh::Loop mirrored{loop.label + "_b", loop.indices};
    for (int& i : mirrored.indices) i += n;
    unit.boundary_loops.push_back(std::move(mirrored));
  }

  // The two copies share the first bottom edge: the inversion about its
  // midpoint pairs the edge with itself reversed, and the half-cell grid is
  // symmetric about the midpoint, so identified samples must land on top of
  // each other. Corner images were appended after the immersion grid, so
  // rim[0] (the corner at 0) has a larger index than every edge sample;
  // the next corner marks the far end of the edge.
  const auto& rim = ribbon.boundary_loops.front().indices;
  const int corner0 = rim.front();
  int pos = 1;
  while (pos < static_cast<int>(rim.size()) && rim[pos] < corner0) ++pos;
  const int nu = pos - 1;
  if (nu < 2 || pos >= static_cast<int>(rim.size())) {
    throw DomainError("fundamental_unit: rim does not start with a full edge");
  }

  const double diam = mesh_diameter(ribbon);
  double worst = 0.0;
  const auto pair_gap = [&](int ia, int ib) {
    const Vec3& a = ribbon.vertices[ia];
    const Vec3& b = unit.vertices[n + ib];
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
  };
  for (int i = 0; i < nu; ++i) {
    worst = std::max(worst, pair_gap(rim[1 + i], rim[1 + (nu - 1 - i)]));
  }
  worst = std::max(worst, pair_gap(rim[pos], rim[0]));
  worst = std::max(worst, pair_gap(rim[0], rim[pos]));
  if (worst > 1e-5 * diam) {
    throw MeshError("fundamental_unit: seam mismatch " +
                    std::to_string(worst) + " exceeds 1e-5 of diameter " +
                    std::to_string(diam));
  }

  // Translations from composing the first inversion with the second and
  // third: 2 X(3/4) and 2 X(5/4). Top-edge compositions add nothing new
  // (for R the first one reproduces the vertical generator exactly).
  const Isometry screw = screw_generator(data);
  const auto& tr = traits(data.family);
  const Vec3 g1raw = point_at(data, Complex(0.75, 0.0));
  const Vec3 g2raw = point_at(data, Complex(1.25, 0.0));
  const Vec3 g1{2.0 * g1raw[0], 2.0 * g1raw[1], 2.0 * g1raw[2]};
  const Vec3 g2{2.0 * g2raw[0], 2.0 * g2raw[1], 2.0 * g2raw[2]};
  const Vec3 g3{0.0, 0.0, tr.screw_order * screw.offset[2]};
  const double det = g1[0] * (g2[1] * g3[2] - g2[2] * g3[1]) -
                     g1[1] * (g2[0] * g3[2] - g2[2] * g3[0]) +
                     g1[2] * (g2[0] * g3[1] - g2[1] * g3[0]);
  const double scale = std::max({std::abs(g1[0]) + std::abs(g1[1]) +
                                     std::abs(g1[2]),
                                 std::abs(g2[0]) + std::abs(g2[1]) +
                                     std::abs(g2[2]),
                                 std::abs(g3[2]), 1e-12});
  if (std::abs(det) < 1e-9 * scale * scale * scale) {
    throw MeshError("fundamental_unit: degenerate lattice");
  }
  unit.lattice_vectors = {g1, g2, g3};
  return unit;
}

double laplacian_defect(const ImmersionField& field) {
  if (field.nx < 3 || field.ny < 3) {
    throw DomainError("laplacian_defect needs a 3x3 interior");
  }
  double worst = 0.0;
  for (int iy = 1; iy + 1 < field.ny; ++iy) {
    const double hyl = field.ys[iy] - field.ys[iy - 1];
    const double hyr = field.ys[iy + 1] - field.ys[iy];
    for (int ix = 1; ix + 1 < field.nx; ++ix) {
      const double hxl = field.xs[ix] - field.xs[ix - 1];
      const double hxr = field.xs[ix + 1] - field.xs[ix];
      double norm2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double fc = field.at(ix, iy)[c];
        const double dxx = 2.0 * (field.at(ix + 1, iy)[c] * hxl +
                                  field.at(ix - 1, iy)[c] * hxr -
                                  fc * (hxl + hxr)) /
                           (hxl * hxr * (hxl + hxr));
        const double dyy = 2.0 * (field.at(ix, iy + 1)[c] * hyl +
                                  field.at(ix, iy - 1)[c] * hyr -
                                  fc * (hyl + hyr)) /
                           (hyl * hyr * (hyl + hyr));
        const double lap = dxx + dyy;
        norm2 += lap * lap;
      }
      worst = std::max(worst, std::sqrt(norm2));
    }
  }
  return worst;
}

void export_obj(const Mesh& mesh, const WeierstrassData& data,
                const std::string& path) {
  std::FILE* f = open_or_throw(path, "export_obj");
  std::fprintf(f, "# gyre family=%s tau=%.9g+%.9gi theta=%.9g\n",
               data.family == Family::T ? "T" : "R", data.tau.real(),
               data.tau.imag(), data.theta);
  for (const auto& v : mesh.vertices) {
    std::fprintf(f, "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
  }
  for (const auto& q : mesh.quads) {
    std::fprintf(f, "f %d %d %d %d\n", q[0] + 1, q[1] + 1, q[2] + 1,
                 q[3] + 1);
  }
  if (std::fclose(f) != 0) {
    throw IoError("export_obj: write failed for " + path);
  }
}

void export_svg_flat(const std::vector<FlatPolyline>& polylines,
                     const std::string& path) {
  double lox = 1e300, loy = 1e300, hix = -1e300, hiy = -1e300;
  for (const auto& pl : polylines) {
    for (const auto& row : pl.rows) {
      for (const Complex& p : row) {
        lox = std::min(lox, p.real());
        hix = std::max(hix, p.real());
        loy = std::min(loy, p.imag());
        hiy = std::max(hiy, p.imag());
      }
    }
  }
  const bool empty = lox > hix;
  const double margin = 40.0;
  const double extent = empty ? 1.0 : std::max(hix - lox, hiy - loy);
  const double s = (1000.0 - 2.0 * margin) / std::max(extent, 1e-300);
  const auto px = [&](const Complex& p) { return margin + (p.real() - lox) * s; };
  const auto py = [&](const Complex& p) { return 1000.0 - margin - (p.imag() - loy) * s; };

  static const char* kPalette[] = {"#202020", "#b03030", "#3060b0", "#308050"};
  std::FILE* f = open_or_throw(path, "export_svg_flat");
  std::fprintf(f,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" "
               "viewBox=\"0 0 1000 1000\">\n");
  for (size_t k = 0; k < polylines.size(); ++k) {
    const char* color = kPalette[k % 4];
    for (const auto& row : polylines[k].rows) {
      if (row.empty()) continue;
      std::fprintf(f, "<path fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" d=\"M %.3f %.3f",
                   color, px(row[0]), py(row[0]));
      for (size_t i = 1; i < row.size(); ++i) {
        std::fprintf(f, " L %.3f %.3f", px(row[i]), py(row[i]));
      }
      std::fprintf(f, "\"/>\n");
    }
    for (const Complex& v : polylines[k].vertices) {
      std::fprintf(f, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"%s\"/>\n",
                   px(v), py(v), color);
    }
  }
  std::fprintf(f, "</svg>\n");
  if (std::fclose(f) != 0) {
    throw IoError("export_svg_flat: write failed for " + path);
  }
}

void export_csv_curve(const FamilyCurve& curve, const std::string& path) {
  std::FILE* f = open_or_throw(path, "export_csv_curve");
  std::fprintf(f, "re_tau,im_tau,theta,residual,psi_re,psi_im\n");
  for (const auto& p : curve.points) {
    std::fprintf(f, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", p.re_tau,
                 p.im_tau, p.theta, p.residual, p.psi.real(), p.psi.imag());
  }
  if (std::fclose(f) != 0) {
    throw IoError("export_csv_curve: write failed for " + path);
  }
}

std::vector<FamilyPoint> parse_csv_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("parse_csv_curve: cannot read " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "re_tau,im_tau,theta,residual,psi_re,psi_im") {
    throw IoError("parse_csv_curve: bad header in " + path);
  }
  std::vector<FamilyPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[6];
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &v[0], &v[1],
                    &v[2], &v[3], &v[4], &v[5]) != 6) {
      throw IoError("parse_csv_curve: bad row in " + path + ": " + line);
    }
    points.push_back({v[0], v[1], v[2], v[3], Complex(v[4], v[5])});
  }
  return points;
}

}  // namespace gyre
