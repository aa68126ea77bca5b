#include "pj/koenigs.hpp"

#include <cmath>
#include <limits>

namespace pj {

namespace {

// f(a + h) - f(a) evaluated as h * sum_k c_k T_k with T_k = sum_{i<k} a^i u^{k-1-i},
// u = a + h. No large-value cancellation, so the difference stays accurate
// down to |h| near roundoff.
Complex poly_diff(const std::vector<double>& c, double a, const Complex& h) {
  const Complex u = a + h;
  Complex t(0.0, 0.0);
  Complex up(1.0, 0.0);
  Complex s(0.0, 0.0);
  for (std::size_t k = 1; k < c.size(); ++k) {
    t = a * t + up;
    up *= u;
    s += c[k] * t;
  }
  return h * s;
}

}  // namespace

KoenigsChart::KoenigsChart(const IntervalMap& f, const PeriodicOrbitRecord& orbit,
                           const KoenigsParams& params)
    : f_(&f), p_(orbit.points.front()), r_(orbit.period), lambda_(orbit.multiplier),
      params_(params), coeffs_(f.poly().coeffs()) {
  if (orbit.stability == Stability::SuperAttracting || lambda_ == 0.0)
    fail("SuperAttracting", "Koenigs linearization needs a nonzero multiplier");
  if (!orbit.attracting_like() || std::abs(lambda_) >= 1.0)
    fail("NotAttracting", "Koenigs chart requires an attracting orbit");

  // Polish the cycle to roundoff so the difference orbit below can contract
  // to the conv_tol floor instead of stalling on the stored points' error.
  for (int it = 0; it < 4; ++it) {
    const auto orb = f.orbit(p_, r_);
    const double der = orb.derivs[static_cast<std::size_t>(r_)];
    p_ -= (orb.points[static_cast<std::size_t>(r_)] - p_) / (der - 1.0);
  }
  cycle_.resize(static_cast<std::size_t>(r_));
  double x = p_;
  lambda_ = 1.0;
  for (int j = 0; j < r_; ++j) {
    cycle_[static_cast<std::size_t>(j)] = x;
    lambda_ *= f.deriv(x);
    x = f(x);
  }
  // The difference orbit below treats the polished cycle as exactly
  // periodic. That evaluates the chart of a map one roundoff away from f,
  // a smooth ulp-level bias, in exchange for factors that stay clean when
  // the orbit distance reaches the closing error of the stored points.
}

KoenigsChart::KoenigsChart(const IntervalMap& f, const PeriodicOrbitRecord& orbit,
                           double anchor, const KoenigsParams& params)
    : KoenigsChart(f, orbit, params) {
  const Complex u = limits(Complex(anchor, 0.0)).value;
  if (std::abs(u) < 1e-8)
    fail("NotInBasin", "normalization anchor linearizes to zero");
  // phi is evaluated as sign * raw(z) / raw(anchor); re-evaluating at the
  // anchor reproduces raw(anchor) bitwise, so phi(anchor) is exactly +-1.
  norm_u_ = u.real();
  sign_ = anchor > p_ ? -1.0 : 1.0;
}

// Both Koenigs limits in telescoped product form:
//   raw(z)  = (z - p) prod_n y_{n+1} / (lambda y_n),
//   Draw(z) = prod_n Df^r(z_n) / lambda,
// with y_n = f^{rn}(z) - p advanced in difference coordinates around the
// cycle. Every factor is 1 + O(dist), so no lambda^-n roundoff blowup.
KoenigsChart::Products KoenigsChart::limits(const Complex& z) const {
  const double scale = std::max(1.0, std::abs(p_));
  const double floor = 0.1 * params_.conv_tol * scale;
  Complex y = z - p_;
  if (std::abs(y) <= floor) return {y, Complex(1.0, 0.0)};
  Complex vprod(1.0, 0.0);
  Complex dprod(1.0, 0.0);
  Complex vfac(1.0, 0.0);
  Complex dfac(1.0, 0.0);
  for (int n = 0; n < params_.n_max; ++n) {
    if (std::abs(y) > 1e3)
      fail("NotInBasin", "iterates do not converge to the periodic point");
    Complex ynext = y;
    Complex slope(1.0, 0.0);
    for (int j = 0; j < r_; ++j) {
      const double a = cycle_[static_cast<std::size_t>(j)];
      slope *= f_->deriv(a + ynext);
      ynext = poly_diff(coeffs_, a, ynext) + res_[static_cast<std::size_t>(j)];
    }
    vfac = ynext / (lambda_ * y);
    dfac = slope / lambda_;
    vprod *= vfac;
    dprod *= dfac;
    y = ynext;
    if (std::abs(y) <= floor) return {(z - p_) * vprod, dprod};
  }
  // Slow contraction: the remaining factors are 1 + O(dist) with dist
  // shrinking geometrically, so sum the tail to first order.
  if (std::abs(y) <= 1e-6 * scale) {
    const double tail = lambda_ / (1.0 - lambda_);
    return {(z - p_) * vprod * (1.0 + (vfac - 1.0) * tail),
            dprod * (1.0 + (dfac - 1.0) * tail)};
  }
  fail("NotInBasin", "Koenigs limit did not converge within n_max iterations");
}

Complex KoenigsChart::operator()(const Complex& z) const {
  return sign_ * (limits(z).value / norm_u_);
}

double KoenigsChart::operator()(double x) const {
  return sign_ * (limits(Complex(x, 0.0)).value.real() / norm_u_);
}

Complex KoenigsChart::derivative(const Complex& z) const {
  return sign_ * (limits(z).deriv / norm_u_);
}

double KoenigsChart::derivative(double x) const {
  return sign_ * (limits(Complex(x, 0.0)).deriv.real() / norm_u_);
}

KoenigsChart make_koenigs_chart(const IntervalMap& f,
                                const std::vector<PeriodicOrbitRecord>& orbits,
                                const CriticalClassification& cls, int orbit_index,
                                const KoenigsParams& params) {
  const auto& orbit = orbits.at(static_cast<std::size_t>(orbit_index));
  for (const auto& rec : cls.records) {
    if (rec.fate == CriticalFate::InAttractingBasin && rec.attractor == orbit_index &&
        rec.preferred) {
      const double c = f.critical_points()[static_cast<std::size_t>(rec.index)].c;
      const double anchor = f.iterate(c, rec.entry);
      return KoenigsChart(f, orbit, anchor, params);
    }
  }
  fail("NoCriticalInBasin",
       "attractor has no designated critical point for normalization");
}

}  // namespace pj
