#include "gyre/period.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

namespace gyre {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr int kScanPoints = 120;

// Brent root refinement on [a, b] with f(a) f(b) <= 0. Stops once
// |f| < ftol or the bracket collapses to machine width.
double brent(const std::function<double(double)>& f, double a, double b,
             double fa, double fb, double ftol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 1e-15;
    const double xm = 0.5 * (c - b);
    if (std::abs(fb) < ftol || std::abs(xm) <= tol1) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic / secant step
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

double family_r_max(Family family) {
  return family == Family::T ? 1.0 : 0.5;
}

void require_interior_r(double r, Family family, const char* where) {
  if (!(r > -1.0) || !(r < family_r_max(family))) {
    std::ostringstream os;
    os << where << ": Re tau = " << r << " outside the open range (-1, "
       << family_r_max(family) << ")";
    throw DomainError(os.str());
  }
}

// All roots on the vertical from an explicit scan table; brackets whose
// endpoints differ by more than pi are wrap jumps of the angle, not zeros.
std::vector<double> roots_from_scan(const std::function<double(double)>& f,
                                    const std::vector<ScanPoint>& scan,
                                    double ftol) {
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    const auto& a = scan[i];
    const auto& b = scan[i + 1];
    if (!a.valid || !b.valid) continue;
    if (!(a.residual * b.residual < 0.0)) continue;
    if (std::abs(a.residual - b.residual) > kPi) continue;
    const double root = brent(f, a.t, b.t, a.residual, b.residual, ftol);
    if (roots.empty() || root - roots.back() > 1e-8 * root) {
      roots.push_back(root);
    }
  }
  return roots;
}

SolvedPoint pack_point(double r, double t, Family family, int pitch) {
  SolvedPoint out;
  out.tau = Complex(r, t);
  out.theta = theta_v(out.tau, family, pitch);
  const PsiResult pr = psi(make_data(family, out.tau));
  out.psi = pr.psi;
  out.residual = wrap_angle(std::arg(pr.psi) - out.theta);
  return out;
}

// Warm-started local solve: bracket around the predicted root, expanding up
// to four times before giving up.
std::optional<double> solve_near(const std::function<double(double)>& f,
                                 double t_guess, double half_width,
                                 double ftol = kResidualTol) {
  double w = std::max(half_width, 1e-4 * t_guess);
  for (int attempt = 0; attempt < 4; ++attempt, w *= 2.0) {
    const double a = std::max(t_guess - w, 1e-3);
    const double b = t_guess + w;
    double fa, fb;
    try {
      fa = f(a);
      fb = f(b);
    } catch (const Error&) {
      continue;
    }
    if (fa * fb > 0.0 || std::abs(fa - fb) > kPi) continue;
    return brent(f, a, b, fa, fb, ftol);
  }
  return std::nullopt;
}

// Aitken limit of a sequence produced by halving approach distances. The
// difference ratio must look geometric, otherwise the sequence has not
// entered its asymptotic regime and the extrapolant is meaningless.
double aitken_limit(const std::vector<double>& x, const char* what) {
  const std::size_t n = x.size();
  if (n < 3) throw ExtrapolationError(std::string(what) + ": too few terms");
  const double d1 = x[n - 2] - x[n - 3];
  const double d2 = x[n - 1] - x[n - 2];
  const double denom = d2 - d1;
  if (std::abs(d2) >= 0.95 * std::abs(d1) || denom == 0.0) {
    std::ostringstream os;
    os << what << ": difference ratio " << (d1 == 0.0 ? 0.0 : d2 / d1)
       << " is not contracting";
    throw ExtrapolationError(os.str());
  }
  return x[n - 1] - d2 * d2 / denom;
}

// Extrapolated family endpoint on Re tau = r_limit, approached at
// r = r_limit - 2^{-k}. `line_residual` evaluates the residual at r + it.
double extrapolate_endpoint(
    double r_limit, Family family, int pitch,
    const std::function<double(double, double)>& line_residual,
    const char* what) {
  std::vector<double> ts;
  double t_prev = 0.0;
  for (int k = 2; k <= 8; ++k) {
    const double r = r_limit - std::pow(2.0, -k);
    const std::function<double(double)> f = [&](double t) {
      return line_residual(r, t);
    };
    std::optional<double> root;
    if (k > 2) root = solve_near(f, t_prev, 0.25 * std::abs(t_prev));
    if (!root) {
      const SolvedPoint sp = solve_on_vertical(r, family, pitch);
      root = sp.tau.imag();
      // re-refine under the supplied residual so both runs use one oracle
      root = solve_near(f, *root, 0.05 * *root).value_or(*root);
    }
    ts.push_back(*root);
    t_prev = *root;
  }
  return aitken_limit(ts, what);
}

}  // namespace

double theta_v(Complex tau, Family family, int pitch) {
  require_upper_half(tau, "theta_v");
  if (pitch < 1) {
    throw DomainError("theta_v: pitch 0 is the degenerate tag, no angle");
  }
  const double shift = family == Family::T ? 2.0 / pitch : 1.5 / pitch;
  return std::arg(tau + 1.0 - shift) - 0.5 * kPi;
}

double residual(Complex tau, Family family, int pitch) {
  return wrap_angle(theta_h(tau, family) - theta_v(tau, family, pitch));
}

SolvedPoint solve_on_vertical(double r, Family family, int pitch,
                              double t_min, double t_max, double refine_tol) {
  require_interior_r(r, family, "solve_on_vertical");
  if (!(t_min > 0.0) || !(t_max > t_min)) {
    throw DomainError("solve_on_vertical: need 0 < t_min < t_max");
  }
  if (!(refine_tol > 0.0)) {
    throw DomainError("solve_on_vertical: refine_tol must be positive");
  }
  const std::function<double(double)> f = [&](double t) {
    return residual(Complex(r, t), family, pitch);
  };

  std::vector<ScanPoint> scan(kScanPoints);
  const double step = std::log(t_max / t_min) / (kScanPoints - 1);
  for (int i = 0; i < kScanPoints; ++i) {
    ScanPoint& p = scan[i];
    p.t = t_min * std::exp(step * i);
    try {
      p.residual = f(p.t);
      p.valid = true;
    } catch (const Error&) {
      p.valid = false;
    }
  }

  const std::vector<double> roots = roots_from_scan(f, scan, refine_tol);
  if (roots.empty()) {
    std::ostringstream os;
    os << "solve_on_vertical: no sign change on Re tau = " << r << ", Im tau in ["
       << t_min << ", " << t_max << "]";
    throw BracketError(os.str(), std::move(scan));
  }
  // The residual tends to the positive asymptote above the family curve, so
  // the topmost root is the family point; lower crossings sit outside the
  // existence region and are reported through all_roots only.
  SolvedPoint out = pack_point(r, roots.back(), family, pitch);
  out.all_roots = roots;
  return out;
}

FamilyCurve trace_family(Family family, int pitch, double r_min, double r_max,
                         double step, double refine_tol) {
  require_interior_r(r_min, family, "trace_family");
  require_interior_r(r_max, family, "trace_family");
  if (!(step > 0.0) || !(r_max > r_min)) {
    throw DomainError("trace_family: need r_min < r_max and step > 0");
  }
  if (!(refine_tol > 0.0)) {
    throw DomainError("trace_family: refine_tol must be positive");
  }

  FamilyCurve curve;
  curve.family = family;
  curve.pitch = pitch;

  auto push = [&](const SolvedPoint& sp) {
    curve.points.push_back({sp.tau.real(), sp.tau.imag(), sp.theta,
                            sp.residual, sp.psi});
  };

  SolvedPoint sp = solve_on_vertical(r_min, family, pitch, 0.05, 20.0,
                                     refine_tol);
  push(sp);

  double slope = 0.0;
  double dr = step;
  while (curve.points.back().re_tau < r_max - 1e-12) {
    const FamilyPoint& prev = curve.points.back();
    dr = std::min(dr, r_max - prev.re_tau);
    bool stepped = false;
    for (; dr > step / 64.0 - 1e-15; dr *= 0.5) {
      double r = prev.re_tau + dr;
      if (r_max - r < 1e-6 * step) r = r_max;
      const double t_pred = prev.im_tau + slope * dr;
      const double pred_step = std::max(std::abs(slope) * dr, 0.01);
      const std::function<double(double)> f = [&](double t) {
        return residual(Complex(r, t), family, pitch);
      };
      std::optional<double> root =
          solve_near(f, t_pred, std::max(2.0 * pred_step, 0.02), refine_tol);
      if (!root) {
        try {
          const SolvedPoint sp =
              solve_on_vertical(r, family, pitch, 0.05, 20.0, refine_tol);
          root = sp.all_roots.front();
          for (double cand : sp.all_roots) {
            if (std::abs(cand - t_pred) < std::abs(*root - t_pred)) {
              root = cand;
            }
          }
        } catch (const BracketError&) {
          continue;  // halve and retry closer to the last good point
        }
      }
      // Two halving triggers: the output curve must stay visibly continuous
      // (Im steps under 0.1), and when a slope estimate exists the corrector
      // must land near the prediction, else the root likely switched branch.
      if (std::abs(*root - prev.im_tau) > 0.095) continue;
      if (curve.points.size() >= 2 &&
          std::abs(*root - t_pred) > 5.0 * pred_step) {
        continue;
      }
      slope = (*root - prev.im_tau) / dr;
      push(pack_point(r, *root, family, pitch));
      dr = std::min(2.0 * dr, step);
      stepped = true;
      break;
    }
    if (!stepped) {
      std::ostringstream os;
      os << "trace_family: continuation broke after tau = ("
         << prev.re_tau << ", " << prev.im_tau << ")";
      throw ContinuationError(os.str());
    }
  }
  return curve;
}

double locate_tD_intersection() {
  const double via_quadrature = extrapolate_endpoint(
      1.0, Family::T, 1,
      [](double r, double t) {
        return residual(Complex(r, t), Family::T, 1);
      },
      "tD intersection (quadrature)");
  const double via_closed_form = extrapolate_endpoint(
      1.0, Family::T, 1,
      [](double r, double t) {
        const Complex tau(r, t);
        return wrap_angle(std::arg(psi_closed_form_T(tau)) -
                          theta_v(tau, Family::T, 1));
      },
      "tD intersection (closed form)");
  if (std::abs(via_quadrature - via_closed_form) > 1e-6) {
    std::ostringstream os;
    os << "tD intersection: quadrature " << via_quadrature
       << " vs closed form " << via_closed_form << " disagree";
    throw ExtrapolationError(os.str());
  }
  return via_quadrature;
}

double locate_rPD_intersection() {
  return extrapolate_endpoint(
      0.5, Family::R, 1,
      [](double r, double t) {
        return residual(Complex(r, t), Family::R, 1);
      },
      "rPD intersection");
}

Complex pitch_reflect(Complex tau, int k) {
  require_upper_half(tau, "pitch_reflect");
  if (k < 1) throw DomainError("pitch_reflect: k must be >= 1");
  const Complex tb = std::conj(tau);
  const double a = 2.0 * k - 1.0;
  return -(a * tb + (2.0 * k - 2.0)) / (2.0 * k * tb + a);
}

double theta_h_continued(Complex from, Complex to, Family family,
                         int min_steps) {
  require_upper_half(from, "theta_h_continued");
  require_upper_half(to, "theta_h_continued");
  // A seed shift multiplies psi by a power of exp(2 pi i e), so arg psi is
  // defined up to pi (T) or 2 pi/3 (R); snapping by that lattice recovers
  // the continued branch as long as the true variation per step stays under
  // half the spacing.
  const double spacing = family == Family::T ? kPi : 2.0 * kPi / 3.0;
  const double start = theta_h(from, family);
  for (int n = std::max(min_steps, 2); n <= 512; n *= 2) {
    double prev = start;
    bool ok = true;
    for (int i = 1; i <= n && ok; ++i) {
      const Complex t = from + (to - from) * (double(i) / n);
      const double raw = theta_h(t, family);
      const double adj =
          raw + std::round((prev - raw) / spacing) * spacing;
      if (std::abs(adj - prev) > 0.25 * spacing) ok = false;
      prev = adj;
    }
    if (ok) return prev;
  }
  throw ContinuationError(
      "theta_h_continued: step refinement exhausted before the ambiguity "
      "bound held");
}

}  // namespace gyre
