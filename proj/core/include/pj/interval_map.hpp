#pragma once

#include <vector>

#include "pj/errors.hpp"
#include "pj/polynomial.hpp"

namespace pj {

/// Critical point of the restriction to the real line with its order:
/// Df, ..., D^{ell-1}f vanish at c while D^{ell}f does not.
struct CriticalPoint {
  double c = 0.0;
  int ell = 2;
};

struct CriticalStructure {
  std::vector<CriticalPoint> points;  // ascending in c
  int sign = 1;                       // +1 iff f(1) = 1
  int degree = 2;                     // sum of the orders ell_i
};

/// Real polynomial self-map of I = [-1, 1] with f({-1,1}) inside {-1,1},
/// analytic on the halo Omega_a = { z : dist(z, I) < a }.
///
/// Internally f is kept in the factored form
///     f(x) = m + s x + (x^2 - 1) q(x),  m = (f(1)+f(-1))/2,  s = (f(1)-f(-1))/2,
/// with m, s integers, so the boundary images evaluate to +-1 exactly.
/// Construction projects the raw coefficients onto that form; the dropped
/// remainder must be below the validation tolerance.
class IntervalMap {
public:
  /// Throws Error codes NotBoundaryPreserving, CriticalPointOnBoundary,
  /// NoCriticalPoint.
  IntervalMap(const Polynomial& f, double a);

  /// Expanded coefficient view of the normalized map (for serialization).
  Polynomial poly() const;
  /// Expanded derivative.
  Polynomial dpoly() const;
  double halo() const { return a_; }

  const CriticalStructure& structure() const { return structure_; }
  const std::vector<CriticalPoint>& critical_points() const { return structure_.points; }
  int sign() const { return structure_.sign; }
  int degree() const { return structure_.degree; }

  double operator()(double x) const;
  Complex operator()(const Complex& z) const;
  double deriv(double x) const;
  Complex deriv(const Complex& z) const;
  double deriv2(double x) const;

  double iterate(double x, int n) const;
  Complex iterate(Complex z, int n) const;

  /// Orbit x, f(x), ..., f^n(x) with chain-rule derivatives Df^k(x), Df^0 = 1.
  /// Throws OverflowEscape when an iterate leaves |z| <= escape_radius().
  struct RealOrbit {
    std::vector<double> points;
    std::vector<double> derivs;
  };
  RealOrbit orbit(double x, int n) const;
  struct ComplexOrbit {
    std::vector<Complex> points;
    std::vector<Complex> derivs;
  };
  ComplexOrbit orbit(Complex z, int n) const;

  /// distance(z, I) < a.
  bool in_halo(const Complex& z) const;
  static double dist_to_interval(const Complex& z);

  /// The map f + t v for a boundary-flat field v; same halo.
  IntervalMap perturbed(const class PolyVectorField& v, double t) const;

  static constexpr double escape_radius() { return 1e8; }

private:
  double m_ = 0.0;  // integer-valued midpoint of the boundary images
  double s_ = 1.0;  // integer-valued half-difference
  Polynomial q_;    // cofactor of (x^2 - 1)
  Polynomial dq_;
  Polynomial d2q_;
  double a_ = 0.5;
  CriticalStructure structure_;
};

/// Polynomial vector field vanishing at the boundary of I, stored factored as
/// v(x) = (x^2 - 1) w(x) so the boundary zeros are exact.
class PolyVectorField {
public:
  PolyVectorField() = default;
  explicit PolyVectorField(Polynomial cofactor);

  const Polynomial& cofactor() const { return w_; }
  Polynomial poly() const;   // expanded (x^2-1) w
  Polynomial dpoly() const;  // expanded derivative

  double operator()(double x) const;
  Complex operator()(const Complex& z) const;
  double deriv(double x) const;
  Complex deriv(const Complex& z) const;

private:
  Polynomial w_;
  Polynomial dw_;
};

/// Validates raw coefficients as a tangent vector at f: v(+-1) = 0 and
/// v^{(j)}(c_i) = 0 for 1 <= j <= ell_i - 2 at every critical point.
/// Throws ConstraintViolation listing the failures.
PolyVectorField make_tangent_vector(const IntervalMap& f, const Polynomial& raw);

/// True when v additionally freezes every critical point of f to first order:
/// v^{(j)}(c_i) = 0 for 1 <= j <= ell_i - 1.
bool freezes_critical_points(const IntervalMap& f, const PolyVectorField& v,
                             double tol = 1e-9);

}  // namespace pj
