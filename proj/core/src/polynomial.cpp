#include "pj/polynomial.hpp"

#include <cmath>
#include <cstddef>

namespace pj {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::monomial(int k, double a) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = a;
  return Polynomial(std::move(c));
}

int Polynomial::degree() const { return static_cast<int>(c_.size()) - 1; }

double Polynomial::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
  return c_[static_cast<std::size_t>(k)];
}

double Polynomial::coeff_norm() const {
  double s = 0.0;
  for (double ck : c_) s += std::abs(ck);
  return s;
}

double Polynomial::operator()(double x) const {
  double y = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) y = y * x + c_[i];
  return y;
}

Complex Polynomial::operator()(const Complex& z) const {
  Complex y = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) y = y * z + c_[i];
  return y;
}

std::pair<double, double> Polynomial::eval_d(double x) const {
  double y = 0.0, d = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) {
    d = d * x + y;
    y = y * x + c_[i];
  }
  return {y, d};
}

std::pair<Complex, Complex> Polynomial::eval_d(const Complex& z) const {
  Complex y = 0.0, d = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) {
    d = d * z + y;
    y = y * z + c_[i];
  }
  return {y, d};
}

Polynomial Polynomial::derivative(int order) const {
  Polynomial p = *this;
  for (int k = 0; k < order; ++k) {
    if (p.c_.size() <= 1) return Polynomial();
    std::vector<double> d(p.c_.size() - 1);
    for (std::size_t i = 1; i < p.c_.size(); ++i)
      d[i - 1] = p.c_[i] * static_cast<double>(i);
    p = Polynomial(std::move(d));
  }
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& ck : c_) ck *= s;
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  return *this;
}

Polynomial Polynomial::times(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial();
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::composed_with(const Polynomial& inner) const {
  Polynomial r;
  for (std::size_t i = c_.size(); i-- > 0;) {
    r = r.times(inner);
    r += Polynomial({c_[i]});
  }
  return r;
}

Polynomial::DivX2m1 Polynomial::divide_by_x2_minus_1() const {
  DivX2m1 out;
  if (c_.size() < 3) {
    out.r0 = coeff(0);
    out.r1 = coeff(1);
    return out;
  }
  std::vector<double> rem = c_;
  std::vector<double> q(c_.size() - 2, 0.0);
  for (std::size_t i = rem.size(); i-- > 2;) {
    double f = rem[i];
    q[i - 2] = f;
    rem[i] = 0.0;
    rem[i - 2] += f;  // x^i = x^{i-2} (x^2 - 1) + x^{i-2}
  }
  out.quotient = Polynomial(std::move(q));
  out.r0 = rem[0];
  out.r1 = rem[1];
  return out;
}

Polynomial poly_from_roots(const std::vector<std::pair<double, int>>& roots,
                           double leading) {
  Polynomial p({leading});
  for (const auto& [r, m] : roots)
    for (int k = 0; k < m; ++k) p = p.times(Polynomial({-r, 1.0}));
  return p;
}

Jet3 iterate_jet3(const Polynomial& f, double x, int n) {
  const Polynomial d1 = f.derivative();
  const Polynomial d2 = d1.derivative();
  const Polynomial d3 = d2.derivative();
  Jet3 j;
  j.y = x;
  for (int k = 0; k < n; ++k) {
    const double u = j.y;
    const double f1 = d1(u), f2 = d2(u), f3 = d3(u);
    const double g1 = j.d1, g2 = j.d2, g3 = j.d3;
    j.y = f(u);
    j.d1 = f1 * g1;
    j.d2 = f2 * g1 * g1 + f1 * g2;
    j.d3 = f3 * g1 * g1 * g1 + 3.0 * f2 * g1 * g2 + f1 * g3;
  }
  return j;
}

}  // namespace pj
