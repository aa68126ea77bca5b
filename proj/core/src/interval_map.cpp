#include "pj/interval_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pj/roots.hpp"

namespace pj {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kDerivVanishFactor = 1e-9;  // relative threshold for order detection

int round_to_sign(double y) { return y >= 0.0 ? 1 : -1; }

}  // namespace

IntervalMap::IntervalMap(const Polynomial& f, double a) : a_(a) {
  if (!(a > 0.0)) fail("InvalidHalo", "half-width a must be positive");
  const double f1 = f(1.0), fm1 = f(-1.0);
  if (std::abs(std::abs(f1) - 1.0) > kBoundaryTol ||
      std::abs(std::abs(fm1) - 1.0) > kBoundaryTol) {
    std::ostringstream os;
    os << "boundary images f(1)=" << f1 << ", f(-1)=" << fm1
       << " not within " << kBoundaryTol << " of {-1,1}";
    fail("NotBoundaryPreserving", os.str());
  }
  const int t1 = round_to_sign(f1), tm1 = round_to_sign(fm1);
  m_ = 0.5 * (t1 + tm1);
  s_ = 0.5 * (t1 - tm1);

  Polynomial g = f;
  g -= Polynomial({m_, s_});
  auto div = g.divide_by_x2_minus_1();
  // The remainder is the projection defect at the boundary; it was bounded above.
  q_ = div.quotient;
  dq_ = q_.derivative();
  d2q_ = dq_.derivative();

  // Critical points: zeros of Df on (-1, 1), found through the expanded
  // derivative polynomial and polished against the factored evaluation.
  const Polynomial df = dpoly();
  std::vector<double> crit = real_roots_in(df, -1.0, 1.0);
  const double dscale = std::max(1.0, df.coeff_norm());
  for (double c : crit) {
    if (std::min(std::abs(c - 1.0), std::abs(c + 1.0)) < 1e-9)
      fail("CriticalPointOnBoundary", "Df vanishes at an endpoint of I");
  }
  if (std::abs(deriv(1.0)) < kDerivVanishFactor * dscale ||
      std::abs(deriv(-1.0)) < kDerivVanishFactor * dscale)
    fail("CriticalPointOnBoundary", "Df vanishes at an endpoint of I");
  if (crit.empty())
    fail("NoCriticalPoint", "map has no critical point in (-1, 1)");

  structure_.points.clear();
  const Polynomial fexp = poly();
  for (double c : crit) {
    // Order: first non-vanishing derivative at c beyond the first.
    int ell = 0;
    Polynomial d = df;
    double scale = dscale;
    for (int j = 1; j <= fexp.degree(); ++j) {
      if (std::abs(d(c)) > kDerivVanishFactor * std::max(1.0, scale)) {
        ell = j;
        break;
      }
      d = d.derivative();
      scale = d.coeff_norm();
    }
    if (ell < 2) continue;  // a simple zero of f, not of Df; cannot happen for true roots
    structure_.points.push_back({c, ell});
  }
  if (structure_.points.empty())
    fail("NoCriticalPoint", "map has no critical point in (-1, 1)");
  std::sort(structure_.points.begin(), structure_.points.end(),
            [](const CriticalPoint& x, const CriticalPoint& y) { return x.c < y.c; });

  structure_.sign = t1;
  structure_.degree = 0;
  for (const auto& cp : structure_.points) structure_.degree += cp.ell;
}

Polynomial IntervalMap::poly() const {
  Polynomial p = Polynomial({-1.0, 0.0, 1.0}).times(q_);
  p += Polynomial({m_, s_});
  return p;
}

Polynomial IntervalMap::dpoly() const { return poly().derivative(); }

double IntervalMap::operator()(double x) const {
  return m_ + s_ * x + (x * x - 1.0) * q_(x);
}

Complex IntervalMap::operator()(const Complex& z) const {
  return m_ + s_ * z + (z * z - 1.0) * q_(z);
}

double IntervalMap::deriv(double x) const {
  return s_ + 2.0 * x * q_(x) + (x * x - 1.0) * dq_(x);
}

Complex IntervalMap::deriv(const Complex& z) const {
  return s_ + 2.0 * z * q_(z) + (z * z - 1.0) * dq_(z);
}

double IntervalMap::deriv2(double x) const {
  return 2.0 * q_(x) + 4.0 * x * dq_(x) + (x * x - 1.0) * d2q_(x);
}

double IntervalMap::iterate(double x, int n) const {
  for (int k = 0; k < n; ++k) {
    x = (*this)(x);
    if (std::abs(x) > escape_radius())
      fail("OverflowEscape", "iterate escaped past the overflow radius");
  }
  return x;
}

Complex IntervalMap::iterate(Complex z, int n) const {
  for (int k = 0; k < n; ++k) {
    z = (*this)(z);
    if (std::abs(z) > escape_radius())
      fail("OverflowEscape", "iterate escaped past the overflow radius");
  }
  return z;
}

IntervalMap::RealOrbit IntervalMap::orbit(double x, int n) const {
  RealOrbit o;
  o.points.reserve(static_cast<std::size_t>(n) + 1);
  o.derivs.reserve(static_cast<std::size_t>(n) + 1);
  o.points.push_back(x);
  o.derivs.push_back(1.0);
  for (int k = 1; k <= n; ++k) {
    const double prev = o.points.back();
    o.derivs.push_back(o.derivs.back() * deriv(prev));
    o.points.push_back((*this)(prev));
    if (std::abs(o.points.back()) > escape_radius())
      fail("OverflowEscape", "orbit escaped past the overflow radius");
  }
  return o;
}

IntervalMap::ComplexOrbit IntervalMap::orbit(Complex z, int n) const {
  ComplexOrbit o;
  o.points.reserve(static_cast<std::size_t>(n) + 1);
  o.derivs.reserve(static_cast<std::size_t>(n) + 1);
  o.points.push_back(z);
  o.derivs.push_back(1.0);
  for (int k = 1; k <= n; ++k) {
    const Complex prev = o.points.back();
    o.derivs.push_back(o.derivs.back() * deriv(prev));
    o.points.push_back((*this)(prev));
    if (std::abs(o.points.back()) > escape_radius())
      fail("OverflowEscape", "orbit escaped past the overflow radius");
  }
  return o;
}

double IntervalMap::dist_to_interval(const Complex& z) {
  const double x = z.real(), y = z.imag();
  if (x > 1.0) return std::hypot(x - 1.0, y);
  if (x < -1.0) return std::hypot(x + 1.0, y);
  return std::abs(y);
}

bool IntervalMap::in_halo(const Complex& z) const { return dist_to_interval(z) < a_; }

IntervalMap IntervalMap::perturbed(const PolyVectorField& v, double t) const {
  Polynomial p = poly();
  p += v.poly() * t;
  return IntervalMap(p, a_);
}

PolyVectorField::PolyVectorField(Polynomial cofactor)
    : w_(std::move(cofactor)), dw_(w_.derivative()) {}

Polynomial PolyVectorField::poly() const {
  return Polynomial({-1.0, 0.0, 1.0}).times(w_);
}

Polynomial PolyVectorField::dpoly() const { return poly().derivative(); }

double PolyVectorField::operator()(double x) const { return (x * x - 1.0) * w_(x); }

Complex PolyVectorField::operator()(const Complex& z) const {
  return (z * z - 1.0) * w_(z);
}

double PolyVectorField::deriv(double x) const {
  return 2.0 * x * w_(x) + (x * x - 1.0) * dw_(x);
}

Complex PolyVectorField::deriv(const Complex& z) const {
  return 2.0 * z * w_(z) + (z * z - 1.0) * dw_(z);
}

PolyVectorField make_tangent_vector(const IntervalMap& f, const Polynomial& raw) {
  const double scale = std::max(1.0, raw.coeff_norm());
  std::vector<std::string> violations;
  const double v1 = raw(1.0), vm1 = raw(-1.0);
  if (std::abs(v1) > 1e-12 * scale) {
    std::ostringstream os;
    os << "v(1) = " << v1 << " != 0";
    violations.push_back(os.str());
  }
  if (std::abs(vm1) > 1e-12 * scale) {
    std::ostringstream os;
    os << "v(-1) = " << vm1 << " != 0";
    violations.push_back(os.str());
  }
  if (violations.empty()) {
    for (std::size_t i = 0; i < f.critical_points().size(); ++i) {
      const auto& cp = f.critical_points()[i];
      Polynomial d = raw.derivative();
      for (int j = 1; j <= cp.ell - 2; ++j) {
        if (std::abs(d(cp.c)) > 1e-9 * std::max(1.0, d.coeff_norm())) {
          std::ostringstream os;
          os << "v^(" << j << ")(c_" << i << ") = " << d(cp.c) << " != 0 (order "
             << cp.ell << ")";
          violations.push_back(os.str());
        }
        d = d.derivative();
      }
    }
  }
  if (!violations.empty()) {
    std::string msg = "tangent constraints violated:";
    for (const auto& s : violations) msg += " " + s + ";";
    fail("ConstraintViolation", msg);
  }
  auto div = raw.divide_by_x2_minus_1();
  return PolyVectorField(div.quotient);
}

bool freezes_critical_points(const IntervalMap& f, const PolyVectorField& v, double tol) {
  const Polynomial vp = v.poly();
  for (const auto& cp : f.critical_points()) {
    Polynomial d = vp.derivative();
    for (int j = 1; j <= cp.ell - 1; ++j) {
      if (std::abs(d(cp.c)) > tol * std::max(1.0, d.coeff_norm())) return false;
      d = d.derivative();
    }
  }
  return true;
}

}  // namespace pj
