#include "pj/roots.hpp"

#include <algorithm>
#include <cmath>

namespace pj {

namespace {

// Bisection refined by safeguarded Newton on a bracketing interval.
double polish_bracket(const std::function<double(double)>& g,
                      const std::function<double(double)>& dg, double a, double b) {
  double fa = g(a);
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    double fx = g(x);
    if (fx == 0.0) return x;
    if ((fa < 0.0) == (fx < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    double xn = x - fx / dg(x);
    if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
    if (std::abs(xn - x) < 1e-16 * (1.0 + std::abs(x))) return xn;
    x = xn;
  }
  return x;
}

void dedupe_sorted(std::vector<double>& xs, double tol) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || std::abs(x - out.back()) > tol)
      out.push_back(x);
  }
  xs = std::move(out);
}

}  // namespace

std::vector<Complex> complex_roots(const Polynomial& p, int max_iter) {
  const int n = p.degree();
  std::vector<Complex> roots;
  if (n <= 0) return roots;
  const double lead = p.coeff(n);
  std::vector<Complex> a(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) a[static_cast<std::size_t>(k)] = p.coeff(k) / lead;

  auto eval_monic = [&](Complex z) {
    Complex y = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) y = y * z + a[i];
    return y;
  };

  roots.resize(static_cast<std::size_t>(n));
  const Complex seed(0.4, 0.9);
  Complex w = 1.0;
  for (auto& r : roots) {
    w *= seed;
    r = w;
  }
  for (int it = 0; it < max_iter; ++it) {
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
      if (den == Complex(0.0)) den = 1e-30;
      const Complex step = eval_monic(roots[static_cast<std::size_t>(i)]) / den;
      roots[static_cast<std::size_t>(i)] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-14) break;
  }
  // Newton polish; collapses cleanly onto simple roots, harmless on multiple ones.
  const Polynomial dp = p.derivative();
  for (auto& r : roots) {
    for (int it = 0; it < 8; ++it) {
      const Complex y = p(r);
      const Complex d = dp(r);
      if (std::abs(d) < 1e-300) break;
      const Complex step = y / d;
      r -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(r))) break;
    }
    if (std::abs(r.imag()) < 1e-12 * (1.0 + std::abs(r.real()))) r = Complex(r.real(), 0.0);
  }
  return roots;
}

std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi) {
  std::vector<double> out;
  const int n = p.degree();
  if (n <= 0) return out;
  if (n == 1) {
    const double x = -p.coeff(0) / p.coeff(1);
    if (x >= lo && x <= hi) out.push_back(x);
    return out;
  }
  const Polynomial dp = p.derivative();
  std::vector<double> cuts = real_roots_in(dp, lo, hi);
  const double scale = std::max(1.0, p.coeff_norm());

  auto g = [&p](double x) { return p(x); };
  auto dg = [&dp](double x) { return dp(x); };

  std::vector<double> grid;
  grid.push_back(lo);
  for (double c : cuts)
    if (c > lo && c < hi) grid.push_back(c);
  grid.push_back(hi);

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    const double fa = p(a), fb = p(b);
    if (fa == 0.0) out.push_back(a);
    if ((fa < 0.0) != (fb < 0.0) && fa != 0.0 && fb != 0.0)
      out.push_back(polish_bracket(g, dg, a, b));
  }
  if (p(hi) == 0.0) out.push_back(hi);
  // Even-order roots sit at extrema with zero value.
  for (double c : cuts)
    if (std::abs(p(c)) <= 1e-12 * scale) out.push_back(c);

  dedupe_sorted(out, 1e-11);
  return out;
}

std::vector<double> sweep_roots(const std::function<double(double)>& g,
                                const std::function<double(double)>& dg,
                                double lo, double hi, int cells,
                                double residual_tol) {
  std::vector<double> out;
  if (cells < 1) cells = 1;
  const double h = (hi - lo) / cells;
  double x0 = lo, g0 = g(x0), d0 = dg(x0);
  if (g0 == 0.0) out.push_back(x0);
  for (int i = 1; i <= cells; ++i) {
    const double x1 = (i == cells) ? hi : lo + h * i;
    const double g1 = g(x1), d1 = dg(x1);
    if (g1 == 0.0) out.push_back(x1);
    if ((g0 < 0.0) != (g1 < 0.0) && g0 != 0.0 && g1 != 0.0) {
      out.push_back(polish_bracket(g, dg, x0, x1));
    } else if ((d0 < 0.0) != (d1 < 0.0)) {
      // Extremum inside the cell: a tangential root shows up as a small value.
      double ex = polish_bracket(dg, [&](double x) {
        const double e = 1e-6 * (1.0 + std::abs(x));
        return (dg(x + e) - dg(x - e)) / (2.0 * e);
      }, x0, x1);
      if (std::abs(g(ex)) <= residual_tol) {
        out.push_back(ex);
      }
    }
    x0 = x1;
    g0 = g1;
    d0 = d1;
  }
  dedupe_sorted(out, 1e-10);
  return out;
}

}  // namespace pj
