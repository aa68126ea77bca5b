#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace pj {

using Complex = std::complex<double>;

/// Dense real polynomial, coefficients in ascending order:
/// p(x) = c[0] + c[1] x + ... + c[n] x^n.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial monomial(int k, double a = 1.0);

  const std::vector<double>& coeffs() const { return c_; }
  /// Degree ignoring exact trailing zeros; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  double coeff(int k) const;
  /// Sum of |c_k|; bounds |p| on [-1, 1].
  double coeff_norm() const;

  double operator()(double x) const;
  Complex operator()(const Complex& z) const;
  /// Value and first derivative in one pass.
  std::pair<double, double> eval_d(double x) const;
  std::pair<Complex, Complex> eval_d(const Complex& z) const;

  Polynomial derivative(int order = 1) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { a += b; return a; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { a -= b; return a; }
  friend Polynomial operator*(Polynomial a, double s) { a *= s; return a; }
  friend Polynomial operator*(double s, Polynomial a) { a *= s; return a; }

  Polynomial times(const Polynomial& o) const;
  /// this(inner(x)); degree multiplies, so guard at call sites.
  Polynomial composed_with(const Polynomial& inner) const;

  /// Quotient and remainder on division by (x^2 - 1); remainder is r0 + r1 x.
  struct DivX2m1;
  DivX2m1 divide_by_x2_minus_1() const;

private:
  std::vector<double> c_;
};

struct Polynomial::DivX2m1 {
  Polynomial quotient;
  double r0 = 0.0;
  double r1 = 0.0;
};

/// Real polynomial with prescribed real roots (with multiplicities) and
/// leading factor: leading * prod (x - root_i)^{mult_i}.
Polynomial poly_from_roots(const std::vector<std::pair<double, int>>& roots,
                           double leading = 1.0);

/// Value and first three derivatives of the n-th iterate of f at x,
/// by the chain rule / Faa di Bruno one step at a time.
struct Jet3 {
  double y = 0.0;   // f^n(x)
  double d1 = 1.0;  // D f^n(x)
  double d2 = 0.0;  // D^2 f^n(x)
  double d3 = 0.0;  // D^3 f^n(x)
};
Jet3 iterate_jet3(const Polynomial& f, double x, int n);

}  // namespace pj
