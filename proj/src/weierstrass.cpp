#include "gyre/weierstrass.hpp"

#include <algorithm>
#include <cmath>

namespace gyre {

using elliptic::JacobiTorus;
using elliptic::VertexKind;

namespace {

// Switch to the near-vertex local model below this distance (cell units).
// Above it the theta quotient is good to ~5e-12 relative; below it the local
// expansion is exact to O(delta^6).
constexpr double kLocalSwitch = 3e-6;

// tanh-sinh truncation: the weight at t_max is ~1e-51 and the worst endpoint
// singularity (exponent -2/3) leaves a tail below 1e-12.
constexpr double kTsMax = 4.35;
constexpr int kTsLevelMin = 3;
constexpr int kTsLevelMax = 8;

constexpr double kQuadratureCap = 1e-9;

bool is_zero_kind(VertexKind vk) {
  return vk == VertexKind::ZeroOrigin || vk == VertexKind::ZeroHalf;
}

}  // namespace

const FamilyTraits& traits(Family family) {
  static const FamilyTraits t{Family::T, 4, 0.5, 2.0, 1.0};
  static const FamilyTraits r{Family::R, 3, 2.0 / 3.0, 1.5, 0.5};
  return family == Family::T ? t : r;
}

WeierstrassData make_data(Family family, Complex tau, double theta) {
  require_upper_half(tau, "make_data");
  WeierstrassData d;
  d.family = family;
  d.tau = tau;
  d.modulus = elliptic::modulus_from_tau(tau);
  d.rho = elliptic::m_power(d.modulus, 0.25);
  d.theta = theta;
  return d;
}

PathIntegral operator+(const PathIntegral& a, const PathIntegral& b) {
  return {a.int_g + b.int_g, a.int_inv_g + b.int_inv_g};
}

PathIntegral operator-(const PathIntegral& a, const PathIntegral& b) {
  return {a.int_g - b.int_g, a.int_inv_g - b.int_inv_g};
}

GaussMapTracker::GaussMapTracker(const WeierstrassData& data)
    : data_(&data), torus_(data.modulus) {}

Complex GaussMapTracker::sn_near(VertexKind kind, Complex delta) const {
  return torus_.sn_cell_near(kind, delta);
}

Complex GaussMapTracker::sn_at(Complex z) const {
  const auto nv = torus_.nearest_vertex(z);
  if (nv.dist < kLocalSwitch) return torus_.sn_cell_near(nv.kind, nv.delta);
  return torus_.sn_cell(z);
}

void GaussMapTracker::seed(Complex z) {
  const Complex v = sn_at(z);
  if (!(std::abs(v) > 0.0) || !std::isfinite(std::abs(v))) {
    throw ContinuationError("gauss map seed sits on a branch point");
  }
  z_ = z;
  log_sn_ = std::log(v);
}

void GaussMapTracker::step_to(Complex z, int depth) {
  const Complex v = sn_at(z);
  const double av = std::abs(v);
  if (!(av > 0.0) || !std::isfinite(av)) {
    throw ContinuationError("gauss map continuation hit a branch point");
  }
  const double d = std::remainder(std::arg(v) - log_sn_.imag(), 2.0 * kPi);
  if (std::abs(d) > 0.5 * kPi) {
    if (depth >= 48) {
      throw ContinuationError(
          "gauss map continuation failed to resolve an argument jump");
    }
    step_to(0.5 * (z_ + z), depth + 1);
    step_to(z, depth + 1);
    return;
  }
  z_ = z;
  log_sn_ = Complex(std::log(av), log_sn_.imag() + d);
}

void GaussMapTracker::advance(Complex z) { step_to(z, 0); }

void GaussMapTracker::hop(Complex vertex, VertexKind kind, Complex resume_z,
                          bool vertex_below) {
  const int k = is_zero_kind(kind) ? 1 : -1;
  const Complex din = z_ - vertex;
  const Complex dout = resume_z - vertex;
  double darg = std::remainder(std::arg(dout) - std::arg(din), 2.0 * kPi);
  if (vertex_below && darg > 0.0) darg -= 2.0 * kPi;
  if (!vertex_below && darg < 0.0) darg += 2.0 * kPi;
  const double predicted = log_sn_.imag() + k * darg;

  const Complex v = sn_at(resume_z);
  const double principal = std::arg(v);
  const double snapped =
      principal + 2.0 * kPi * std::round((predicted - principal) / (2.0 * kPi));
  if (std::abs(snapped - predicted) > 1.0) {
    throw ContinuationError("vertex hop prediction disagrees with evaluation");
  }
  z_ = resume_z;
  log_sn_ = Complex(std::log(std::abs(v)), snapped);
}

Complex GaussMapTracker::log_g() const {
  const double e = traits(data_->family).root_exponent;
  return e * (data_->modulus.log_m / 4.0 + log_sn_);
}

Complex GaussMapTracker::g() const { return std::exp(log_g()); }

namespace {

// One straight segment with branch-continued tanh-sinh quadrature of G dz and
// dz/G. The branch is carried outward from the midpoint state in two monotone
// passes, so a singular endpoint is approached but never crossed.
class SegmentQuad {
 public:
  SegmentQuad(const GaussMapTracker& tracker,
              const GaussMapTracker::State& mid_state, const SegmentEnd& a,
              const SegmentEnd& b, double tol)
      : torus_(tracker.torus()),
        exponent_(traits(tracker.data().family).root_exponent),
        log_m4_(tracker.data().modulus.log_m / 4.0),
        a_(a),
        b_(b),
        dz_(b.z - a.z),
        mid_state_(mid_state),
        tol_(tol) {
    const double len = std::abs(dz_);
    if (!(len > 0.0)) throw QuadratureError("degenerate integration segment");
    s_switch_ = kLocalSwitch / len;
    resolve_end(a_, va_, da0_);
    resolve_end(b_, vb_, db0_);
  }

  PathIntegral run() {
    PathIntegral prev{};
    double err = 1e300;
    for (int level = kTsLevelMin; level <= kTsLevelMax; ++level) {
      const PathIntegral cur = walk_level(level);
      if (level > kTsLevelMin) {
        err = std::max(std::abs(cur.int_g - prev.int_g),
                       std::abs(cur.int_inv_g - prev.int_inv_g));
        const double scale = std::max(
            {1.0, std::abs(cur.int_g), std::abs(cur.int_inv_g)});
        if (err < tol_ * scale) return cur;
      }
      prev = cur;
    }
    const double scale =
        std::max({1.0, std::abs(prev.int_g), std::abs(prev.int_inv_g)});
    if (err > kQuadratureCap * scale) {
      throw QuadratureError("tanh-sinh quadrature stalled above 1e-9");
    }
    return prev;
  }

 private:
  void resolve_end(const SegmentEnd& end, std::optional<VertexKind>& kind,
                   Complex& delta0) {
    kind = end.vertex;
    delta0 = Complex(0.0, 0.0);
    const auto nv = torus_.nearest_vertex(end.z);
    if (!kind && nv.dist < 1e-9) kind = nv.kind;
    // Keep only genuine endpoint displacements. Residuals at the lattice
    // reduction noise floor would otherwise put a spurious zero crossing of
    // delta0 + s*dz at s ~ |delta0|/|dz|, an arg jump of pi that no amount
    // of bisection can track through.
    if (kind && nv.dist > 1e-13) delta0 = nv.delta;
  }

  // sn at parameter s, with exact endpoint displacements near declared
  // vertices (lattice reduction cannot resolve them).
  Complex sn_of(double s, double oms) const {
    if (va_ && s < s_switch_) return torus_.sn_cell_near(*va_, da0_ + s * dz_);
    if (vb_ && oms < s_switch_)
      return torus_.sn_cell_near(*vb_, db0_ - oms * dz_);
    const Complex z = s <= 0.5 ? a_.z + s * dz_ : b_.z - oms * dz_;
    const auto nv = torus_.nearest_vertex(z);
    if (nv.dist < kLocalSwitch) return torus_.sn_cell_near(nv.kind, nv.delta);
    return torus_.sn_cell(z);
  }

  // Continue the tracked argument from (s_prev, arg_prev) to s_cur; bisects
  // until each step moves the argument by less than pi/2.
  double continue_arg(double s_prev, double oms_prev, double arg_prev,
                      double s_cur, double oms_cur, int depth) const {
    const Complex v = sn_of(s_cur, oms_cur);
    const double d = std::remainder(std::arg(v) - arg_prev, 2.0 * kPi);
    if (std::abs(d) <= 0.5 * kPi) return arg_prev + d;
    if (depth >= 48) {
      throw ContinuationError("quadrature branch tracking lost continuity");
    }
    const double sm = 0.5 * (s_prev + s_cur);
    const double omsm = 0.5 * (oms_prev + oms_cur);
    const double am = continue_arg(s_prev, oms_prev, arg_prev, sm, omsm,
                                   depth + 1);
    return continue_arg(sm, omsm, am, s_cur, oms_cur, depth + 1);
  }

  PathIntegral walk_level(int level) const {
    const double h = std::ldexp(1.0, -level);
    const int kmax = static_cast<int>(std::ceil(kTsMax / h));
    Complex sum_g{0.0, 0.0}, sum_inv{0.0, 0.0};
    for (int dir = -1; dir <= 1; dir += 2) {
      double arg_cur = mid_state_.log_sn.imag();
      double s_prev = 0.5, oms_prev = 0.5;
      const int kfrom = dir < 0 ? 0 : 1;  // midpoint node only counted once
      for (int k = kfrom; k <= kmax; ++k) {
        const double t = dir * k * h;
        const double u = 0.5 * kPi * std::sinh(t);
        const double s = 1.0 / (1.0 + std::exp(-2.0 * u));
        const double oms = 1.0 / (1.0 + std::exp(2.0 * u));
        const double eau = std::exp(-2.0 * std::abs(u));
        const double sech2 = 4.0 * eau / ((1.0 + eau) * (1.0 + eau));
        const double w = 0.5 * kPi * std::cosh(t) * sech2;
        arg_cur = continue_arg(s_prev, oms_prev, arg_cur, s, oms, 0);
        const Complex v = sn_of(s, oms);
        const Complex log_g =
            exponent_ * (log_m4_ + Complex(std::log(std::abs(v)), arg_cur));
        sum_g += w * std::exp(log_g);
        sum_inv += w * std::exp(-log_g);
        s_prev = s;
        oms_prev = oms;
      }
    }
    const Complex factor = dz_ * (0.5 * h);
    return {factor * sum_g, factor * sum_inv};
  }

  const JacobiTorus& torus_;
  double exponent_;
  Complex log_m4_;
  SegmentEnd a_, b_;
  Complex dz_;
  GaussMapTracker::State mid_state_;
  double tol_;
  double s_switch_ = 0.0;
  std::optional<VertexKind> va_, vb_;
  Complex da0_{0.0, 0.0}, db0_{0.0, 0.0};
};

}  // namespace

PathIntegral integrate_segment(const GaussMapTracker& tracker,
                               const GaussMapTracker::State& mid_state,
                               const SegmentEnd& a, const SegmentEnd& b,
                               double tol) {
  return SegmentQuad(tracker, mid_state, a, b, tol).run();
}

namespace {

// Least distance from the open interior of [a, b] to any branch vertex,
// sampled; endpoints themselves are allowed to be vertices.
double min_interior_vertex_dist(const JacobiTorus& torus, Complex a, Complex b) {
  double best = 1e300;
  for (int i = 1; i < 64; ++i) {
    const Complex z = a + (b - a) * (static_cast<double>(i) / 64.0);
    if (std::abs(z - a) < 1e-3 || std::abs(z - b) < 1e-3) continue;
    best = std::min(best, torus.nearest_vertex(z).dist);
  }
  return best;
}

}  // namespace

PsiResult psi(const WeierstrassData& data, double tol) {
  const Complex end = 0.5 * (1.0 + data.tau);
  GaussMapTracker tracker(data);

  // The straight chord 0 -> (1+tau)/2, split at its midpoint, stays clear of
  // branch vertices everywhere above the Im tau floor. If the sampler ever
  // trips, reroute through the hyperelliptic point 1/4.
  std::vector<Complex> route = {Complex(0.0, 0.0), 0.5 * end, end};
  if (min_interior_vertex_dist(tracker.torus(), route[0], end) < 1e-4) {
    route = {Complex(0.0, 0.0), Complex(0.25, 0.0), end};
    if (min_interior_vertex_dist(tracker.torus(), route[1], end) < 1e-4) {
      throw ContinuationError(
          "period integration path passes through a branch vertex");
    }
  }

  tracker.seed(1e-4 * route[1]);
  PathIntegral total{};
  for (size_t i = 0; i + 1 < route.size(); ++i) {
    tracker.advance(0.5 * (route[i] + route[i + 1]));
    const auto st = tracker.state();
    total = total + integrate_segment(tracker, st, {route[i], {}},
                                      {route[i + 1], {}}, tol);
    tracker.restore(st);
  }

  PsiResult out;
  out.psi = total.int_g;
  out.dual = total.int_inv_g;
  out.mismatch = std::abs(out.psi - out.dual) / std::abs(out.psi);
  if (!(out.mismatch < 1e-7)) {
    throw QuadratureError("period integral and its dual disagree");
  }
  return out;
}

double theta_h(Complex tau, Family family) {
  return std::arg(psi(make_data(family, tau)).psi);
}

Complex psi_closed_form_T(Complex tau) {
  const auto md = elliptic::modulus_from_tau(tau);
  Complex mt = md.m;
  if (mt.real() < 0.0) {
    mt = elliptic::pin_above_cut(mt, std::abs(mt.real()));
  }
  const Complex rt = std::sqrt(mt);
  const Complex qt = std::sqrt(rt);  // mt^{1/4}, principal
  Complex mu = (1.0 + qt) * (1.0 + qt) / (2.0 * (1.0 + rt));
  // mu crosses the K cut exactly at m~ = -1, again approached from above
  if (mu.real() > 1.0) {
    mu = elliptic::pin_above_cut(mu, mu.real());
  }
  const Complex k_mu = elliptic::complete_K(mu);
  const Complex k_cmu = elliptic::complete_K(1.0 - mu);
  const int r = md.red.r;

  // sigma_r = sum_{j=0}^{r} (-i)^j, geometric; empty sum for r = -1 and the
  // analytic continuation of the same closed form for other bands.
  static const Complex ipow[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
  const int e4 = ((r + 1) % 4 + 4) % 4;
  const Complex sigma = (1.0 - ipow[e4]) / Complex(1.0, 1.0);

  const Complex phase_r = std::exp(Complex(0.0, r * kPi / 4.0));
  const Complex phase_1r = std::exp(Complex(0.0, (1.0 - r) * kPi / 4.0));
  const Complex bracket = sigma * phase_r * (k_mu - k_cmu) / (2.0 * std::sqrt(2.0)) +
                          phase_1r * 0.5 * k_cmu;
  return std::pow(mt, -0.125) / (std::sqrt(1.0 + rt) * md.K) * bracket;
}

std::vector<Complex> gauss_map_along(const std::vector<Complex>& path,
                                     const WeierstrassData& data,
                                     int samples_per_edge) {
  if (path.size() < 2) throw DomainError("gauss_map_along needs a path");
  GaussMapTracker tracker(data);
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<Complex> out;
    tracker.seed(path.front());
    out.push_back(tracker.g());
    bool ok = true;
    double prev_arg = tracker.log_g().imag();
    for (size_t i = 0; i + 1 < path.size() && ok; ++i) {
      for (int k = 1; k <= samples_per_edge; ++k) {
        const double s = static_cast<double>(k) / samples_per_edge;
        tracker.advance(path[i] + s * (path[i + 1] - path[i]));
        const double cur_arg = tracker.log_g().imag();
        if (std::abs(cur_arg - prev_arg) >= 0.5 * kPi) {
          ok = false;
          break;
        }
        prev_arg = cur_arg;
        out.push_back(tracker.g());
      }
    }
    if (ok) return out;
    samples_per_edge *= 2;
  }
  throw ContinuationError("gauss_map_along could not meet the pi/2 sampling bound");
}

namespace {

// Walk the tracker from one edge midpoint to the next along a boundary row,
// hopping across the separating vertex.
void walk_across_vertex(GaussMapTracker& tracker, Complex vertex,
                        VertexKind kind, Complex next_mid, bool vertex_below) {
  const Complex dir = (next_mid - vertex) / std::abs(next_mid - vertex);
  // stay inside the crossed vertex's dominance region
  const double imtt = tracker.data().modulus.red.tilde.imag();
  const double clearance = std::min(0.05, imtt / 16.0);
  tracker.advance(vertex - clearance * dir);
  tracker.hop(vertex, kind, vertex + clearance * dir, vertex_below);
  tracker.advance(next_mid);
}

Complex map_value(const PathIntegral& p, FlatMap tag, double theta) {
  const Complex phase = std::exp(Complex(0.0, -theta));
  return phase * (tag == FlatMap::G ? p.int_g : p.int_inv_g);
}

}  // namespace

FlatPolyline flat_structure(const WeierstrassData& data, FlatMap map_tag,
                            int n_samples) {
  if (n_samples < 2) throw DomainError("flat_structure needs n_samples >= 2");
  const auto& tr = traits(data.family);
  const Complex tt = data.modulus.red.tilde;
  const int n_edges = static_cast<int>(std::lround(tr.strip_period / 0.5));

  FlatPolyline out;
  out.map_tag = map_tag;
  out.rows.resize(2);

  GaussMapTracker tracker(data);
  tracker.seed(Complex(0.25, 0.0));

  // Cumulative map value at the bottom-left vertex anchors the development.
  const double tol = 1e-12;
  Complex phi = Complex(0.0, 0.0);

  for (int row = 0; row < 2; ++row) {
    const Complex row_base = row == 0 ? Complex(0.0, 0.0) : 0.5 * tt;
    if (row == 1) {
      // Carry the branch and the accumulated value to the top row through the
      // strip interior: up from 1/4, across at mid-height, up to the first
      // top-edge midpoint. The value moves by the integral along the path.
      GaussMapTracker carry(data);
      carry.seed(Complex(0.25, 0.0));
      const Complex top_mid = row_base + 0.25;
      const Complex p0(0.25, 0.0);
      const Complex p1(0.25, 0.25 * tt.imag());
      const Complex p2(top_mid.real(), 0.25 * tt.imag());
      const Complex legs[3][2] = {{p0, p1}, {p1, p2}, {p2, top_mid}};
      Complex acc(0.0, 0.0);
      for (const auto& leg : legs) {
        // the horizontal leg vanishes on rectangular tori (Re tau~ = 0)
        if (std::abs(leg[1] - leg[0]) == 0.0) continue;
        carry.advance(0.5 * (leg[0] + leg[1]));
        const auto st = carry.state();
        const PathIntegral pi_leg =
            integrate_segment(carry, st, {leg[0], {}}, {leg[1], {}}, tol);
        acc += map_value(pi_leg, map_tag, data.theta);
        carry.restore(st);
        carry.advance(leg[1]);
      }
      // value(1/4) relative to the bottom-left vertex: half the first bottom
      // edge; value(top-left vertex) = value(top_mid) - half top edge.
      GaussMapTracker bseed(data);
      bseed.seed(Complex(0.25, 0.0));
      bseed.advance(Complex(0.125, 0.0));
      const auto stb = bseed.state();
      const PathIntegral first_half = integrate_segment(
          bseed, stb, {Complex(0.0, 0.0), {}}, {Complex(0.25, 0.0), {}}, tol);
      GaussMapTracker half = carry;
      half.advance(row_base + 0.125);
      const auto sth = half.state();
      const PathIntegral top_half =
          integrate_segment(half, sth, {row_base, {}}, {top_mid, {}}, tol);
      phi = map_value(first_half, map_tag, data.theta) + acc -
            map_value(top_half, map_tag, data.theta);
      // leave the tracker branch at the first top-edge midpoint
      tracker = carry;
    }

    for (int edge = 0; edge < n_edges; ++edge) {
      const Complex ea = row_base + 0.5 * edge;
      const Complex eb = row_base + 0.5 * (edge + 1);
      const Complex emid = 0.5 * (ea + eb);
      if (edge > 0) {
        const auto nv = tracker.torus().nearest_vertex(ea);
        walk_across_vertex(tracker, ea, nv.kind, emid, row == 0);
      } else {
        tracker.advance(emid);
      }
      const auto mid_st = tracker.state();

      if (edge == 0) {
        out.vertex_params.push_back(ea);
        out.vertices.push_back(phi);
        out.rows[row].push_back(phi);
      }
      // cumulative samples across the edge
      Complex val = phi;
      for (int k = 0; k < n_samples; ++k) {
        const double s0 = static_cast<double>(k) / n_samples;
        const double s1 = static_cast<double>(k + 1) / n_samples;
        const Complex za = ea + s0 * (eb - ea);
        const Complex zb = ea + s1 * (eb - ea);
        tracker.restore(mid_st);
        tracker.advance(0.5 * (za + zb));
        const auto sub_st = tracker.state();
        const PathIntegral sub =
            integrate_segment(tracker, sub_st, {za, {}}, {zb, {}}, tol);
        val += map_value(sub, map_tag, data.theta);
        out.rows[row].push_back(val);
      }
      phi = val;
      out.vertex_params.push_back(eb);
      out.vertices.push_back(phi);
      tracker.restore(mid_st);
    }
  }
  return out;
}

std::array<double, 3> displacement(const PathIntegral& acc, Complex dz,
                                   double theta) {
  const Complex phase = std::exp(Complex(0.0, -theta));
  const Complex w1 = phase * 0.5 * (acc.int_inv_g - acc.int_g);
  const Complex w2 = phase * Complex(0.0, 0.5) * (acc.int_inv_g + acc.int_g);
  const Complex w3 = phase * dz;
  return {w1.real(), w2.real(), w3.real()};
}

ImmersionField immersion(const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const WeierstrassData& data) {
  if (xs.empty() || ys.empty()) throw DomainError("immersion needs a grid");
  if (!std::is_sorted(xs.begin(), xs.end()) ||
      !std::is_sorted(ys.begin(), ys.end())) {
    throw DomainError("immersion grid lines must be sorted");
  }
  const Complex tt = data.modulus.red.tilde;
  const double ym = 0.25 * tt.imag();
  const double tol = 1e-12;
  const Complex z0(0.25, 0.0);

  ImmersionField field;
  field.nx = static_cast<int>(xs.size());
  field.ny = static_cast<int>(ys.size());
  field.xs = xs;
  field.ys = ys;
  field.points.resize(xs.size() * ys.size());

  GaussMapTracker tracker(data);
  tracker.seed(z0);

  // Integral from z0 up to the mid-height highway.
  const Complex h0(0.25, ym);
  tracker.advance(0.5 * (z0 + h0));
  auto st = tracker.state();
  const PathIntegral up0 = integrate_segment(tracker, st, {z0, {}}, {h0, {}}, tol);

  // March along the highway to every column, left and right of x = 1/4.
  struct Anchor {
    PathIntegral acc;
    GaussMapTracker::State state;
  };
  std::vector<Anchor> anchors(xs.size());
  const auto march = [&](bool rightward) {
    GaussMapTracker walker(data);
    walker.seed(z0);
    walker.advance(h0);
    PathIntegral acc = up0;
    Complex prev = h0;
    auto idx = std::vector<size_t>();
    for (size_t j = 0; j < xs.size(); ++j) {
      if (rightward ? xs[j] >= 0.25 : xs[j] < 0.25) idx.push_back(j);
    }
    if (rightward) std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return xs[a] < xs[b];
    });
    else std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return xs[a] > xs[b];
    });
    for (size_t j : idx) {
      const Complex target(xs[j], ym);
      if (std::abs(target - prev) > 0.0) {
        walker.advance(0.5 * (prev + target));
        const auto stw = walker.state();
        const PathIntegral leg = integrate_segment(
            walker, stw, {prev, {}}, {target, {}}, tol);
        acc = acc + leg;
        walker.restore(stw);
        walker.advance(target);
      }
      anchors[j] = {acc, walker.state()};
      prev = target;
    }
  };
  march(true);
  march(false);

  // Columns: cumulative vertical integrals from the highway to each row.
  for (size_t j = 0; j < xs.size(); ++j) {
    const double x = xs[j];
    for (int dir = 0; dir < 2; ++dir) {
      // dir 0: rows below the highway, descending; dir 1: rows above.
      std::vector<size_t> rows;
      for (size_t i = 0; i < ys.size(); ++i) {
        if (dir == 0 ? ys[i] <= ym : ys[i] > ym) rows.push_back(i);
      }
      if (dir == 0) std::sort(rows.begin(), rows.end(), [&](size_t a, size_t b) {
        return ys[a] > ys[b];
      });
      else std::sort(rows.begin(), rows.end(), [&](size_t a, size_t b) {
        return ys[a] < ys[b];
      });
      GaussMapTracker walker(data);
      walker.restore(anchors[j].state);
      PathIntegral acc = anchors[j].acc;
      Complex prev(x, ym);
      for (size_t i : rows) {
        const Complex target(x, ys[i]);
        if (std::abs(target - prev) > 0.0) {
          walker.advance(0.5 * (prev + target));
          const auto stw = walker.state();
          const PathIntegral leg = integrate_segment(
              walker, stw, {prev, {}}, {target, {}}, tol);
          acc = acc + leg;
          walker.restore(stw);
          walker.advance(target);
        }
        const Complex z = target;
        field.points[i * xs.size() + j] = displacement(acc, z - z0, data.theta);
        prev = target;
      }
    }
  }
  return field;
}

}  // namespace gyre
