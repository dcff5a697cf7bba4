#pragma once

// Elliptic layer: theta series, modular lambda with a global analytic
// logarithm, complete elliptic integrals, and Jacobi functions on the
// branched-torus convention used by the rest of the library:
//
//   m = lambda(2 tau),  K = K(m),  K' = -2 i tau K,
//
// so sn(z; tau) has periods 4K and 2iK', zeros at 0, 2K and poles at
// iK', 2K + iK' (mod lattice). The nome entering every series is
// q = exp(2 pi i tau), which is invariant under integer shifts of tau.

#include <optional>

#include "gyre/types.hpp"

namespace gyre::elliptic {

// Series stop once the next term falls below this fraction of the partial sum.
inline constexpr double kSeriesEps = 1e-16;
// Hard convergence bound on any nome magnitude (Im tau floor ~ 0.0008 for the
// sn nome exp(2 pi i tau), ~ 0.0024 for lambda's exp(i pi tau_arg)).
inline constexpr double kNomeLimit = 0.985;
// Reject evaluation closer than this to a pole, measured in the reduced
// (1, tau~) cell chart.
inline constexpr double kPoleGuard = 1e-8;

// exp(i pi tau); the standard nome of half-period ratio tau.
Complex nome(Complex tau);

// Jacobi theta functions of argument v and nome q (|q| < kNomeLimit).
Complex theta1(Complex v, Complex q);
Complex theta2(Complex v, Complex q);
Complex theta3(Complex v, Complex q);
Complex theta4(Complex v, Complex q);

// lambda(tau) = theta2(0,q)^4 / theta3(0,q)^4 with q = exp(i pi tau).
// Callers on the library's convention pass 2 tau.
Complex modular_lambda(Complex tau);

// Analytic branch of log lambda(tau) on the upper half-plane, normalized so
// the value is real on the imaginary axis:
//   log lambda = log 16 + i pi tau + 8 sum_n [Log(1+q^{2n}) - Log(1+q^{2n-1})].
// Every factor has positive real part, so each principal Log is analytic and
// the sum is the global branch. Its imaginary part realizes the marked-torus
// argument convention arg m = 2 pi r + Arg(m~) and extends it continuously to
// the whole half-plane.
Complex log_modular_lambda(Complex tau);

// Complete elliptic integral of the first kind, parameter m (not modulus k),
// principal branch on the plane cut along [1, inf). Computed by inverting m
// through the lambda nome series (with Newton polish on the theta quotient)
// and evaluating (pi/2) theta3(0,q)^2.
Complex complete_K(Complex m);

// Independent AGM evaluation for real m in [0, 1); oracle path for tests.
double complete_K_agm(double m);

// Band reduction tau = r + tau~ with r integer and -1/2 < Re tau~ <= 1/2.
struct ReducedTau {
  int r = 0;
  Complex tilde;
};
ReducedTau reduce_tau(Complex tau);

// Everything derived from one tau that the rest of the library needs.
struct EllipticModulus {
  Complex tau;      // marked-torus parameter, Im > 0
  ReducedTau red;   // band bookkeeping
  Complex q;        // exp(2 pi i tau), the sn/lambda nome
  Complex log_m;    // analytic branch of log lambda(2 tau)
  Complex m;        // exp(log_m); equals lambda(2 tau)
  Complex K;        // complete elliptic integral for parameter m
  Complex K_prime;  // -2 i tau K, the marked vertical half-period
};
EllipticModulus modulus_from_tau(Complex tau);

// Convention fractional power m^alpha = exp(alpha log_m).
inline Complex m_power(const EllipticModulus& md, double alpha) {
  return std::exp(alpha * md.log_m);
}

// Complementary parameter 1 - m. Near the tau = 1 cusp m hugs 1 to within
// 1e-14 and the direct subtraction keeps only absolute ulp accuracy; the
// expm1 expansion of the principal log recovers full relative accuracy.
inline Complex complement_m(const EllipticModulus& md) {
  const Complex w = md.log_m - Complex(0.0, 2.0 * kPi * md.red.r);
  if (std::abs(w) > 1e-3) return 1.0 - md.m;
  return -w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0)));
}

// On the band edge Re tau~ = 1/2 the reduced modulus is negative real, and
// the fractional powers and K arguments of the annulus closed forms sit
// exactly on their cuts. The edge attaches to the band interior, which
// approaches from Im > 0; this pins rounding noise to that side. `ref` is
// the magnitude scale of w.
inline Complex pin_above_cut(Complex w, double ref) {
  if (std::abs(w.imag()) < 1e-13 * ref) {
    w = Complex(w.real(), std::abs(w.imag()) + 1e-15 * ref);
  }
  return w;
}

// The branch points of the gauss map sit at the zeros and poles of sn on the
// cell torus: zeros at w = 0, 1/2 and poles at w = tau~/2, (1+tau~)/2.
enum class VertexKind { ZeroOrigin, ZeroHalf, PoleTau, PoleOneTau };

// Precomputed evaluation context for Jacobi functions at fixed tau.
class JacobiTorus {
 public:
  explicit JacobiTorus(Complex tau);
  explicit JacobiTorus(EllipticModulus md);

  const EllipticModulus& modulus() const { return md_; }

  // Jacobi functions of the unreduced argument z.
  Complex sn(Complex z) const;
  Complex cn(Complex z) const;
  Complex dn(Complex z) const;
  Complex sc(Complex z) const;

  // sn with z expressed in cell units: sn_cell(w) = sn(4K w). The zeros sit
  // at w = 0, 1/2 and the poles at w = tau~/2, (1+tau~)/2 (mod <1, tau~>).
  Complex sn_cell(Complex w) const;

  // Position of a branch vertex in cell units.
  Complex vertex_cell(VertexKind vk) const;

  // sn_cell(vertex + delta) through the local expansion at the vertex. Full
  // relative accuracy for tiny |delta|, where the theta quotient would lose
  // everything to cancellation; callers switch over below ~1e-4 cell units.
  Complex sn_cell_near(VertexKind vk, Complex delta) const;

  // Distance from w (cell units) to the nearest zero or pole of sn_cell,
  // measured in the reduced (1, tau~) chart.
  double zero_distance_cell(Complex w) const;
  double pole_distance_cell(Complex w) const;

  // Nearest branch vertex of any kind, with the wrapped displacement from it.
  // The displacement is only as accurate as the lattice reduction (absolute
  // granularity ~1e-16 |tau~|); callers holding an exact displacement from a
  // known vertex should keep it instead.
  struct NearestVertex {
    VertexKind kind;
    Complex delta;
    double dist;
  };
  NearestVertex nearest_vertex(Complex w) const;

 private:
  struct Reduced {
    double a = 0.0, b = 0.0;  // z/(4K) = a + b tau~ reduced to [-1/2, 1/2)
    bool nb_odd = false;      // parity of the removed tau~ shift (cn/dn sign)
  };
  Reduced reduce_cell(Complex w) const;

  EllipticModulus md_;
  Complex th2_, th3_, th4_;  // theta constants at v = 0
};

// Convenience wrappers constructing a fresh context per call.
Complex jacobi_sn(Complex z, Complex tau);
Complex jacobi_cn(Complex z, Complex tau);
Complex jacobi_dn(Complex z, Complex tau);
Complex jacobi_sc(Complex z, Complex tau);

}  // namespace gyre::elliptic
