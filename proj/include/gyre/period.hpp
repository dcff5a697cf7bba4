#pragma once

// Period-condition layer. The vertical angle theta_v is a closed form of tau
// and the screw pitch; theta_h comes from the horizontal period integral. A
// surface closes up exactly where the wrapped residual theta_h - theta_v
// vanishes, so family curves are the zero set of `residual` traced along
// vertical lines Re tau = r.

#include <vector>

#include "gyre/weierstrass.hpp"

namespace gyre {

// Arg(tau + 1 - 2/p) - pi/2 for T, Arg(tau + 1 - 3/(2p)) - pi/2 for R.
// pitch >= 1; pitch 0 tags the degenerate straight members and has no angle.
double theta_v(Complex tau, Family family, int pitch = 1);

// theta_h(tau) - theta_v(tau; pitch), wrapped to (-pi, pi].
double residual(Complex tau, Family family, int pitch = 1);

struct SolvedPoint {
  Complex tau;
  double theta = 0.0;     // theta_v at the root (= theta_h within tolerance)
  double residual = 0.0;  // achieved residual
  Complex psi;
  // Every root found on the scanned line, increasing in Im tau. The returned
  // point is the last entry; more than one entry is evidence worth reporting
  // upstream.
  std::vector<double> all_roots;
};

// Scan residual(r + it) on a geometric grid of t, bracket every sign change
// that is not a branch wrap, and refine each by Brent to
// |residual| < refine_tol. Returns the topmost root (the family point: the
// residual approaches its positive asymptote from above the curve, while
// lower crossings lie outside the existence region). Throws BracketError
// carrying the scan table when no bracket exists.
SolvedPoint solve_on_vertical(double r, Family family, int pitch = 1,
                              double t_min = 0.05, double t_max = 20.0,
                              double refine_tol = 1e-10);

struct FamilyPoint {
  double re_tau = 0.0;
  double im_tau = 0.0;
  double theta = 0.0;
  double residual = 0.0;
  Complex psi;
};

struct FamilyCurve {
  Family family = Family::T;
  int pitch = 1;
  std::vector<FamilyPoint> points;  // re_tau strictly increasing
};

// March r from r_min to r_max with warm-started local brackets (predictor:
// linear extrapolation of Im tau). The step halves whenever the corrected
// root jumps more than 5x the predicted change, and recovers toward `step`
// afterwards; a full-line rescan is the fallback when a local bracket fails.
// Throws ContinuationError naming the last good point if halving bottoms out.
FamilyCurve trace_family(Family family, int pitch, double r_min, double r_max,
                         double step, double refine_tol = 1e-10);

// Im tau of the endpoint of the tG family on Re tau = 1, where it meets the
// tD line: solves verticals at r = 1 - 2^{-k} and Aitken-extrapolates, then
// repeats the run on the closed-form psi as an independent cross-check.
double locate_tD_intersection();

// rGL analog: endpoint on Re tau = 1/2, where the family meets rPD. No
// closed form exists on this side, so only the extrapolant is returned.
double locate_rPD_intersection();

// tau' = -(((2k-1) conj(tau) + (2k-2)) / (2k conj(tau) + (2k-1))), the
// reflection across |tau + 1 - 1/(2k)| = 1/(2k). It sends pitch-p solutions
// to pitch-(4k-p) solutions, and theta_h(tau) + theta_h(tau') =
// arg(tau + 1 - 1/(2k)) mod 2 pi, with theta_h at tau' continued from tau
// (see theta_h_continued).
Complex pitch_reflect(Complex tau, int k);

// arg psi continued along the straight segment from `from` to `to`: starts
// at theta_h(from) and snaps every sample step by the seed-root ambiguity
// (pi for T, 2 pi/3 for R). On the calibrated region this equals theta_h;
// past the seed cut inside the reflection disks it keeps the sheet instead
// of re-pinning, which is the branch the reflection identity pairs. The
// result is not wrapped. Throws ContinuationError if refinement cannot
// bound the per-step variation.
double theta_h_continued(Complex from, Complex to, Family family,
                         int min_steps = 8);

}  // namespace gyre
