#pragma once

#include <functional>
#include <vector>

#include "pj/polynomial.hpp"

namespace pj {

/// All complex roots with multiplicity (Durand-Kerner with Newton polish).
std::vector<Complex> complex_roots(const Polynomial& p, int max_iter = 500);

/// Real roots of p inside [lo, hi], ascending, deduplicated; even-order
/// roots included (found through the recursively computed extrema of p).
std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi);

/// Real solutions of g(x) = 0 for a callable with derivative, located by a
/// sign sweep over `cells` subintervals plus bisection/Newton, augmented
/// with tangential roots at the extrema of g (sign sweep of dg).
/// residual_tol accepts a tangential root when |g| stays below it.
std::vector<double> sweep_roots(const std::function<double(double)>& g,
                                const std::function<double(double)>& dg,
                                double lo, double hi, int cells,
                                double residual_tol);

}  // namespace pj
