#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gyre {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input (tau off the upper half-plane, pitch < 1, bad grid, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Theta/lambda series cannot converge: nome too close to the unit circle.
class SeriesError : public Error {
 public:
  explicit SeriesError(const std::string& msg) : Error(msg) {}
};

// Evaluation point too close to a pole or zero of the elliptic function.
// Carries the offending point in lattice-reduced coordinates.
class PoleError : public Error {
 public:
  PoleError(const std::string& msg, Complex reduced)
      : Error(msg), reduced_point(reduced) {}
  Complex reduced_point;
};

// Branch continuation could not resolve the root selection (step refinement
// exhausted, or a singular point lies in the path interior).
class ContinuationError : public Error {
 public:
  explicit ContinuationError(const std::string& msg) : Error(msg) {}
};

// Adaptive quadrature failed to reach the requested tolerance, or the
// dual-integrand consistency check failed.
class QuadratureError : public Error {
 public:
  explicit QuadratureError(const std::string& msg) : Error(msg) {}
};

// Root solve found no sign change; carries the scanned residual table.
struct ScanPoint {
  double t = 0.0;        // Im tau sample
  double residual = 0.0; // wrapped angle residual at that sample
  bool valid = false;    // false if the residual evaluation failed there
};

class BracketError : public Error {
 public:
  BracketError(const std::string& msg, std::vector<ScanPoint> scanned)
      : Error(msg), table(std::move(scanned)) {}
  std::vector<ScanPoint> table;
};

// A solver sequence meant to extrapolate (Aitken/Richardson) failed to
// settle, or the independent cross-check disagreed.
class ExtrapolationError : public Error {
 public:
  explicit ExtrapolationError(const std::string& msg) : Error(msg) {}
};

// Mesh assembly failure (seam mismatch and similar).
class MeshError : public Error {
 public:
  explicit MeshError(const std::string& msg) : Error(msg) {}
};

// File I/O failure; the message carries the path.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

inline void require_upper_half(Complex tau, const char* where) {
  if (!(tau.imag() > 0.0))
    throw DomainError(std::string(where) + ": Im tau must be positive, got " +
                      std::to_string(tau.imag()));
}

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace gyre
