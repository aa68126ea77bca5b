#pragma once

#include "pj/interval_map.hpp"
#include "pj/orbits.hpp"

namespace pj {

struct KoenigsParams {
  double rho = 0.05;        // nominal evaluation radius around p
  int n_max = 200;          // iteration depth cap
  double conv_tol = 1e-12;  // orbit distance (x0.1) where the limit counts as attained
};

/// Linearizing coordinate at an attracting hyperbolic periodic point:
/// phi(z) = kappa * lim_n (f^{nr}(z) - p) / lambda^n, phi o f^r = lambda phi.
/// kappa normalizes phi(anchor) to -1 when the anchor lies right of p and
/// +1 when it lies left, so the designated critical-orbit point maps to a
/// unit position.
class KoenigsChart {
public:
  /// Unnormalized chart (kappa = 1).
  KoenigsChart(const IntervalMap& f, const PeriodicOrbitRecord& orbit,
               const KoenigsParams& params = {});
  /// Chart normalized at the anchor point (the designated critical-orbit
  /// point f^{n_c}(c(p)) in the intended use).
  KoenigsChart(const IntervalMap& f, const PeriodicOrbitRecord& orbit, double anchor,
               const KoenigsParams& params = {});

  Complex operator()(const Complex& z) const;
  double operator()(double x) const;
  /// Chart derivative kappa * lim_n Df^{nr}(z) / lambda^n.
  Complex derivative(const Complex& z) const;
  double derivative(double x) const;

  double p() const { return p_; }
  int r() const { return r_; }
  double lambda() const { return lambda_; }
  double kappa() const { return sign_ / norm_u_; }
  double rho() const { return params_.rho; }
  int n_max() const { return params_.n_max; }

private:
  struct Products {
    Complex value{0.0, 0.0};
    Complex deriv{1.0, 0.0};
  };
  /// Both limits in one pass over the telescoped factor products.
  Products limits(const Complex& z) const;

  const IntervalMap* f_;
  double p_;
  int r_;
  double lambda_;
  double norm_u_ = 1.0;
  double sign_ = 1.0;
  KoenigsParams params_;
  std::vector<double> coeffs_;  // expanded map coefficients for stable differences
  std::vector<double> cycle_;   // polished cycle, phase order from p
  std::vector<double> res_;     // per-step closing residuals of the polished cycle
};

/// Chart for the classified attractor `attractor_index` (an index into
/// cls.attractors is not used; pass the orbit-list index), normalized at the
/// preferred critical point's entry point f^{n_c}(c).
KoenigsChart make_koenigs_chart(const IntervalMap& f,
                                const std::vector<PeriodicOrbitRecord>& orbits,
                                const CriticalClassification& cls, int orbit_index,
                                const KoenigsParams& params = {});

}  // namespace pj
