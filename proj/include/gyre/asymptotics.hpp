#pragma once

// Straightened edge vectors of the flat annulus and the far-field behavior
// of the horizontal angle, computed directly from their one-dimensional
// integral representations. Everything here is independent of the path
// quadrature in the weierstrass layer and serves as its validator.

#include "gyre/weierstrass.hpp"

namespace gyre {

// Inner edge vector of the twisted annulus (T conventions),
//   psi1 = 2 m^{1/8}/(4 K~) . int_0^1 zeta^{1/2} dzeta
//                              / sqrt((1 - zeta^2)(1 - m~ zeta^2)),
// by tanh-sinh quadrature with the 1 - zeta endpoint computed exactly.
Complex psi1(Complex tau);

// Step from an inner vertex to the nearest outer vertex,
//   psi2 = e^{3 pi i/4} m^{1/8}/(4 K~) . int_0^inf xi^{1/2} dxi
//                                        / sqrt((1 + xi^2)(1 + m~ xi^2)),
// compactified by xi = u/(1 - u) so one tanh-sinh pass covers both the
// origin weight and the algebraic tail.
Complex psi2(Complex tau);

// Limit of theta_h as Im tau grows: Re(1 - tau) pi/4 for T,
// Re(1/2 - tau) pi/3 for R.
double theta_h_asymptote(Complex tau, Family family);

// Elliptic-integral closed forms of the annulus edge vectors (T only),
//   e^{r pi i/4}/(2 sqrt 2) . m~^{-1/8} (1 + m~^{1/2})^{-1/2} / K~
//     . (K(mu) -+ K(1 - mu)),   mu = (1 + m~^{1/4})^2 / (2 + 2 m~^{1/2}),
// with - for the inner and + for the outer edge. Band-edge arguments on the
// cuts take the interior limit from Im m~ > 0.
struct EdgeVectors {
  Complex inner;
  Complex outer;
};
EdgeVectors closed_form_edges_T(Complex tau);

enum class AsymptoteRegime { TauInf, TauToOne };

// Side-by-side record of the measured horizontal angle and the regime limit
// (the far-field formula, or 0 for the approach to tau = 1).
struct AsymptoteReport {
  Complex tau;
  AsymptoteRegime regime = AsymptoteRegime::TauInf;
  double theta_h_numeric = 0.0;
  double theta_h_limit = 0.0;
  double deviation = 0.0;  // wrapped |numeric - limit|
};
AsymptoteReport asymptote_report(Complex tau, Family family,
                                 AsymptoteRegime regime);

}  // namespace gyre
