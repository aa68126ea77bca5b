#include "pj/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pj {

namespace {

constexpr double kPersistTol = 1e-6;  // one-step confirmation of an orbit merge

std::string crit_tag(int i) { return "c" + std::to_string(i); }

double cycle_distance(double x, const std::vector<double>& cycle) {
  double d = std::numeric_limits<double>::infinity();
  for (double p : cycle) d = std::min(d, std::abs(x - p));
  return d;
}

// Genuine merge of two critical orbits: they meet away from the cycle
// (convergence alone brings any two basin orbits together near it) and the
// match persists one step. On-cycle walks are compared without the floor.
bool walks_merge(const IntervalMap::RealOrbit& a, const IntervalMap::RealOrbit& b,
                 double tol, const std::vector<double>& cycle, double floor_dist) {
  for (std::size_t m = 1; m < a.points.size(); ++m) {
    if (cycle_distance(a.points[m], cycle) < floor_dist) continue;
    for (std::size_t n = 1; n < b.points.size(); ++n)
      if (std::abs(a.points[m] - b.points[n]) <= tol) {
        if (m + 1 < a.points.size() && n + 1 < b.points.size() &&
            std::abs(a.points[m + 1] - b.points[n + 1]) > kPersistTol)
          continue;
        return true;
      }
  }
  return false;
}

// Earliest meet times (l_other first, then l_starred) of two merging orbits.
std::pair<int, int> meet_times(const IntervalMap::RealOrbit& starred,
                               const IntervalMap::RealOrbit& other, double tol,
                               const std::vector<double>& cycle, double floor_dist,
                               bool both_on_cycle) {
  for (std::size_t n = 0; n < other.points.size(); ++n) {
    if (!both_on_cycle && cycle_distance(other.points[n], cycle) < floor_dist) continue;
    for (std::size_t m = 0; m < starred.points.size(); ++m) {
      if (std::abs(starred.points[m] - other.points[n]) > tol) continue;
      if (m + 1 < starred.points.size() && n + 1 < other.points.size() &&
          std::abs(starred.points[m + 1] - other.points[n + 1]) > kPersistTol)
        continue;
      return {static_cast<int>(m), static_cast<int>(n)};
    }
  }
  return {-1, -1};
}

struct Newton1D {
  double x = 0.0;
  bool ok = false;
};

template <typename F>
Newton1D newton_continue(F&& value_slope, double x0, const ContinuationParams& params) {
  double x = x0;
  for (int it = 0; it < params.newton_max; ++it) {
    const auto [fx, dfx] = value_slope(x);
    if (std::abs(dfx) < 1e-300) return {x, false};
    const double step = fx / dfx;
    x -= step;
    if (std::abs(x - x0) > params.guard) return {x, false};
    if (std::abs(step) <= params.tol * std::max(1.0, std::abs(x))) return {x, true};
  }
  return {x, false};
}

bool landed_attracting(const FrozenReference& ref, const CriticalOrbitRecord& rec) {
  return rec.landed_orbit >= 0 &&
         ref.orbits[static_cast<std::size_t>(rec.landed_orbit)].attracting_like();
}

// Continued critical points of g, one per reference critical point.
std::vector<double> continue_criticals(const IntervalMap& g, const FrozenReference& ref,
                                       const ContinuationParams& params) {
  const auto& crit = ref.f.critical_points();
  std::vector<double> cg(crit.size());
  for (std::size_t i = 0; i < crit.size(); ++i)
    cg[i] = continue_critical_point(g, crit[i].c, crit[i].ell, params);
  return cg;
}

// Critical-relation components shared by psi_H and psi_T: exact hits of
// another critical point and exact landings on repelling cycles.
void emit_relation_blocks(const IntervalMap& g, const FrozenReference& ref,
                          const std::vector<double>& cg, PsiValue& out) {
  for (const auto& rec : ref.cls.records) {
    const std::size_t i = static_cast<std::size_t>(rec.index);
    if (rec.fate == CriticalFate::EventuallyCritical) {
      const double value = g.iterate(cg[i], rec.q) - cg[static_cast<std::size_t>(rec.target)];
      out.components.push_back({"ec[" + crit_tag(rec.index) + "]", value});
    } else if (rec.fate == CriticalFate::EventuallyPeriodic && !landed_attracting(ref, rec)) {
      const double value = g.iterate(cg[i], rec.q) - g.iterate(cg[i], rec.l);
      out.components.push_back({"ep[" + crit_tag(rec.index) + "]", value});
    }
  }
}

}  // namespace

std::vector<std::string> PsiValue::labels() const {
  std::vector<std::string> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.label);
  return out;
}

std::vector<double> PsiValue::values() const {
  std::vector<double> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.value);
  return out;
}

double continue_critical_point(const IntervalMap& g, double c0, int ell,
                               const ContinuationParams& params) {
  const Polynomial target = g.poly().derivative(ell - 1);
  const auto res =
      newton_continue([&](double x) { return target.eval_d(x); }, c0, params);
  if (!res.ok) {
    std::ostringstream os;
    os << "critical point near " << c0 << " did not continue";
    fail("CombinatoricsBroken", os.str());
  }
  if (std::abs(res.x) >= 1.0)
    fail("CombinatoricsBroken", "continued critical point left the interval");
  for (int j = 1; j < ell; ++j) {
    const Polynomial dj = g.poly().derivative(j);
    if (std::abs(dj(res.x)) > 1e-6 * std::max(1.0, dj.coeff_norm())) {
      std::ostringstream os;
      os << "critical point near " << c0 << " lost its order-" << ell << " structure";
      fail("CombinatoricsBroken", os.str());
    }
  }
  return res.x;
}

PeriodicOrbitRecord continue_periodic_orbit(const IntervalMap& g,
                                            const PeriodicOrbitRecord& ref,
                                            const ContinuationParams& params) {
  const int r = ref.period;
  const auto res = newton_continue(
      [&](double x) {
        const auto orb = g.orbit(x, r);
        return std::pair<double, double>(orb.points[static_cast<std::size_t>(r)] - x,
                                         orb.derivs[static_cast<std::size_t>(r)] - 1.0);
      },
      ref.points.front(), params);
  if (!res.ok)
    fail("CombinatoricsBroken", "periodic orbit continuation failed");

  // Keep the reference phase: points are not re-rotated to the minimum.
  PeriodicOrbitRecord out;
  out.period = r;
  out.points.resize(static_cast<std::size_t>(r));
  double y = res.x;
  double mult = 1.0;
  for (int j = 0; j < r; ++j) {
    out.points[static_cast<std::size_t>(j)] = y;
    mult *= g.deriv(y);
    y = g(y);
  }
  if (std::abs(y - res.x) > 1e-8)
    fail("CombinatoricsBroken", "continued orbit does not close up");
  out.multiplier = mult;
  if (std::abs(mult) <= 1e-12)
    out.stability = Stability::SuperAttracting;
  else if (std::abs(std::abs(mult) - 1.0) <= 1e-8)
    out.stability = Stability::Parabolic;
  else
    out.stability = std::abs(mult) < 1.0 ? Stability::Attracting : Stability::Repelling;
  return out;
}

FrozenReference freeze_reference(const IntervalMap& f, const OrbitSearchParams& orbit_params,
                                 const ClassifyParams& classify_params) {
  FrozenReference ref{f, find_periodic_orbits(f, orbit_params), {}, {}, {}, {}};
  ref.cls = classify_critical_orbits(f, ref.orbits, classify_params);
  const auto& crit = f.critical_points();

  for (const auto& rec : ref.cls.records)
    if (rec.fate == CriticalFate::EventuallyPeriodic && rec.landed_orbit < 0 &&
        std::abs(rec.relation_multiplier) < 1.0)
      fail("CombinatoricsBroken", "attracting landing outside the recorded orbit list");

  std::vector<IntervalMap::RealOrbit> walks;
  walks.reserve(crit.size());
  for (const auto& c : crit) walks.push_back(f.orbit(c.c, classify_params.horizon));

  auto on_orbit = [&](const PeriodicOrbitRecord& orb, double x) {
    for (double p : orb.points)
      if (std::abs(p - x) <= classify_params.hit_tol) return true;
    return false;
  };

  for (int oi : ref.cls.attractors) {
    const auto& orb = ref.orbits[static_cast<std::size_t>(oi)];
    const int r = orb.period;
    AttractorBlock blk;
    blk.orbit = oi;

    std::vector<BasinMember> members;
    std::vector<std::size_t> group;  // critical indices entering the zeta count
    std::vector<bool> on_cycle;
    for (const auto& rec : ref.cls.records) {
      const std::size_t i = static_cast<std::size_t>(rec.index);
      if (rec.fate == CriticalFate::InAttractingBasin && rec.attractor == oi) {
        members.push_back({rec.index, rec.entry, false});
        group.push_back(i);
        on_cycle.push_back(false);
      } else if (rec.fate == CriticalFate::EventuallyPeriodic && rec.landed_orbit == oi) {
        const double landing = f.iterate(crit[i].c, rec.l);
        int phase = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (int j = 0; j < r; ++j) {
          const double d = std::abs(landing - orb.points[static_cast<std::size_t>(j)]);
          if (d < bestd) {
            bestd = d;
            phase = j;
          }
        }
        members.push_back({rec.index, rec.l + ((r - phase) % r), true});
        group.push_back(i);
        on_cycle.push_back(true);
      } else if (rec.fate == CriticalFate::PeriodicCritical && on_orbit(orb, crit[i].c)) {
        group.push_back(i);
        on_cycle.push_back(true);
      }
    }

    for (const auto& m : members) {
      const auto& rec = ref.cls.records[static_cast<std::size_t>(m.crit)];
      if (rec.fate == CriticalFate::InAttractingBasin && rec.preferred) {
        blk.preferred = m.crit;
        blk.preferred_n = m.n;
      }
    }
    for (const auto& m : members)
      if (m.crit != blk.preferred) blk.others.push_back(m);
    ref.blocks.push_back(blk);

    // Starred subset: the largest pairwise-disjoint family, lowest indices
    // preferred; every excluded member records its merge with a starred one.
    const std::size_t n = group.size();
    if (n == 0) continue;
    if (n > 20) fail("CombinatoricsBroken", "basin member count exceeds the subset search");
    std::vector<std::vector<bool>> collide(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        collide[a][b] = collide[b][a] =
            (on_cycle[a] && on_cycle[b]) ||
            walks_merge(walks[group[a]], walks[group[b]], classify_params.hit_tol,
                        orb.points, classify_params.basin_tol);
    int best_count = 0;
    std::size_t best_mask = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      bool ok = true;
      int count = 0;
      for (std::size_t a = 0; a < n && ok; ++a) {
        if (!(mask & (std::size_t{1} << a))) continue;
        ++count;
        for (std::size_t b = a + 1; b < n && ok; ++b)
          if ((mask & (std::size_t{1} << b)) && collide[a][b]) ok = false;
      }
      if (ok && count > best_count) {
        best_count = count;
        best_mask = mask;
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (best_mask & (std::size_t{1} << a)) {
        ref.starred.push_back(static_cast<int>(group[a]));
        continue;
      }
      int partner = -1;
      for (std::size_t b = 0; b < n; ++b)
        if ((best_mask & (std::size_t{1} << b)) && collide[a][b]) {
          partner = static_cast<int>(b);
          break;
        }
      if (partner < 0)
        fail("CombinatoricsBroken", "non-starred critical orbit has no starred partner");
      const auto [ls, lo] =
          meet_times(walks[group[static_cast<std::size_t>(partner)]], walks[group[a]],
                     classify_params.hit_tol, orb.points, classify_params.basin_tol,
                     on_cycle[a] && on_cycle[static_cast<std::size_t>(partner)]);
      if (lo < 0) fail("CombinatoricsBroken", "merge point of colliding orbits not found");
      CollisionPair pair;
      pair.starred = static_cast<int>(group[static_cast<std::size_t>(partner)]);
      pair.other = static_cast<int>(group[a]);
      pair.l_starred = ls;
      pair.l_other = lo;
      ref.collisions.push_back(pair);
    }
  }
  std::sort(ref.starred.begin(), ref.starred.end());
  std::sort(ref.collisions.begin(), ref.collisions.end(),
            [](const CollisionPair& a, const CollisionPair& b) { return a.other < b.other; });
  return ref;
}

PsiValue psi_H(const IntervalMap& g, const FrozenReference& ref,
               const KoenigsParams& chart_params, const ContinuationParams& cont_params) {
  const std::vector<double> cg = continue_criticals(g, ref, cont_params);
  PsiValue out;
  emit_relation_blocks(g, ref, cg, out);

  for (std::size_t ai = 0; ai < ref.blocks.size(); ++ai) {
    const auto& blk = ref.blocks[ai];
    const auto cont =
        continue_periodic_orbit(g, ref.orbits[static_cast<std::size_t>(blk.orbit)],
                                cont_params);
    if (!cont.attracting_like())
      fail("CombinatoricsBroken", "continued attractor is no longer attracting");
    const std::string at = "at[" + std::to_string(ai) + "]";
    out.components.push_back({at + ".mult", cont.multiplier});

    if (blk.preferred >= 0 && !blk.others.empty()) {
      try {
        const double anchor =
            g.iterate(cg[static_cast<std::size_t>(blk.preferred)], blk.preferred_n);
        const KoenigsChart chart(g, cont, anchor, chart_params);
        for (const auto& m : blk.others) {
          const double pos =
              chart(g.iterate(cg[static_cast<std::size_t>(m.crit)], m.n));
          out.components.push_back({at + ".phi[" + crit_tag(m.crit) + "]", pos});
        }
      } catch (const Error& e) {
        if (e.code() == "NotInBasin")
          fail("CombinatoricsBroken", "chart positions lost: " + std::string(e.what()));
        throw;
      }
    }
  }
  out.dimension = static_cast<int>(out.components.size());
  return out;
}

PsiValue psi_T(const IntervalMap& g, const FrozenReference& ref,
               const ContinuationParams& cont_params) {
  const std::vector<double> cg = continue_criticals(g, ref, cont_params);
  PsiValue out;
  emit_relation_blocks(g, ref, cg, out);
  for (const auto& pair : ref.collisions) {
    const double value =
        g.iterate(cg[static_cast<std::size_t>(pair.starred)], pair.l_starred) -
        g.iterate(cg[static_cast<std::size_t>(pair.other)], pair.l_other);
    out.components.push_back(
        {"t[" + crit_tag(pair.starred) + "~" + crit_tag(pair.other) + "]", value});
  }
  out.dimension = static_cast<int>(out.components.size());
  return out;
}

namespace {

// t-derivative of the normalized chart at a fixed point z of the basin:
// d/dt phi_t(z) = sum_j Dphi(g^{j+1} z) v_r(g^j z) / lambda^{j+1} for
// g = f^r. Requires v to vanish on the cycle to first order, which makes
// the terms decay like lambda^j; summation stops when the terms bottom out
// against the floating-point floor and start growing again.
double chart_drift(const IntervalMap& f, const PolyVectorField& v,
                   const KoenigsChart& chart, const PeriodicOrbitRecord& orb, double z) {
  const int r = orb.period;
  const double lambda = orb.multiplier;
  double sum = 0.0;
  double pow_lambda = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 300; ++j) {
    const double vr = orbit_derivative(f, v, z, r);
    const double zn = f.iterate(z, r);
    pow_lambda *= lambda;
    const double term = chart.derivative(zn) * vr / pow_lambda;
    const double mag = std::abs(term);
    if (j >= 5 && mag > prev) break;
    sum += term;
    if (mag <= 1e-15 * std::max(1.0, std::abs(sum))) break;
    prev = mag;
    z = zn;
  }
  return sum;
}

}  // namespace

double orbit_derivative(const IntervalMap& f, const PolyVectorField& v, double x, int n) {
  double F = x;
  double vk = 0.0;
  for (int k = 0; k < n; ++k) {
    vk = v(F) + f.deriv(F) * vk;
    F = f(F);
  }
  return vk;
}

OrbitDerivativeJet orbit_derivative_jet(const IntervalMap& f, const PolyVectorField& v,
                                        double x, int n) {
  double F = x;
  double dF = 1.0;
  OrbitDerivativeJet j;
  for (int k = 0; k < n; ++k) {
    const double df = f.deriv(F);
    const double nv = v(F) + df * j.v_n;
    const double ndv = v.deriv(F) * dF + f.deriv2(F) * dF * j.v_n + df * j.dv_n;
    j.v_n = nv;
    j.dv_n = ndv;
    dF *= df;
    F = f(F);
  }
  return j;
}

PsiValue dpsi_H_analytic(const IntervalMap& f, const PolyVectorField& v,
                         const FrozenReference& ref, const KoenigsParams& chart_params) {
  if (!freezes_critical_points(f, v))
    fail("AssumptionViolated",
         "field must vanish to the critical order at every critical point");
  const auto& crit = f.critical_points();
  const double atol = 1e-8 * std::max(1.0, v.poly().coeff_norm());

  PsiValue out;
  for (const auto& rec : ref.cls.records) {
    const double c = crit[static_cast<std::size_t>(rec.index)].c;
    if (rec.fate == CriticalFate::EventuallyCritical) {
      out.components.push_back(
          {"ec[" + crit_tag(rec.index) + "]", orbit_derivative(f, v, c, rec.q)});
    } else if (rec.fate == CriticalFate::EventuallyPeriodic && !landed_attracting(ref, rec)) {
      const double value =
          orbit_derivative(f, v, c, rec.q) - orbit_derivative(f, v, c, rec.l);
      out.components.push_back({"ep[" + crit_tag(rec.index) + "]", value});
    }
  }

  for (std::size_t ai = 0; ai < ref.blocks.size(); ++ai) {
    const auto& blk = ref.blocks[ai];
    const auto& orb = ref.orbits[static_cast<std::size_t>(blk.orbit)];
    const std::string at = "at[" + std::to_string(ai) + "]";

    for (double p : orb.points)
      if (std::abs(v(p)) > atol)
        fail("AssumptionViolated", "field must vanish along the attracting orbit");

    double sum = 0.0;
    for (double p : orb.points) {
      const double df = f.deriv(p);
      if (std::abs(df) < 1e-12)
        fail("AssumptionViolated", "multiplier derivative undefined on a critical orbit");
      sum += v.deriv(p) / df;
    }
    out.components.push_back({at + ".mult", orb.multiplier * sum});

    if (blk.preferred >= 0 && !blk.others.empty()) {
      for (double p : orb.points)
        if (std::abs(v.deriv(p)) > atol)
          fail("AssumptionViolated",
               "chart components need the cycle frozen to first order");
      const double cpref = crit[static_cast<std::size_t>(blk.preferred)].c;
      const double anchor = f.iterate(cpref, blk.preferred_n);
      const KoenigsChart chart(f, orb, anchor, chart_params);
      const double phi_a = chart(anchor);
      const double va = orbit_derivative(f, v, cpref, blk.preferred_n);
      // Anchor motion plus the chart's own t-drift; the normalization
      // divides by raw(anchor), so both enter through phi(a) = +-1.
      const double anchor_rate =
          chart.derivative(anchor) * va + chart_drift(f, v, chart, orb, anchor);
      for (const auto& m : blk.others) {
        const double cm = crit[static_cast<std::size_t>(m.crit)].c;
        const double xm = f.iterate(cm, m.n);
        const double vm = orbit_derivative(f, v, cm, m.n);
        const double value = chart.derivative(xm) * vm +
                             chart_drift(f, v, chart, orb, xm) -
                             chart(xm) * phi_a * anchor_rate;
        out.components.push_back({at + ".phi[" + crit_tag(m.crit) + "]", value});
      }
    }
  }
  out.dimension = static_cast<int>(out.components.size());
  return out;
}

PsiValue dpsi_finite_difference(const IntervalMap& f, const PolyVectorField& v,
                                const FrozenReference& ref, double step,
                                const KoenigsParams& chart_params,
                                const ContinuationParams& cont_params) {
  if (!(step >= 1e-8 && step <= 1e-3))
    fail("InvalidStep", "finite-difference step must lie in [1e-8, 1e-3]");
  const PsiValue plus = psi_H(f.perturbed(v, step), ref, chart_params, cont_params);
  const PsiValue minus = psi_H(f.perturbed(v, -step), ref, chart_params, cont_params);
  if (plus.components.size() != minus.components.size())
    fail("CombinatoricsBroken", "component layout changed across the difference stencil");
  PsiValue out;
  out.components.reserve(plus.components.size());
  for (std::size_t i = 0; i < plus.components.size(); ++i)
    out.components.push_back({plus.components[i].label,
                              (plus.components[i].value - minus.components[i].value) /
                                  (2.0 * step)});
  out.dimension = static_cast<int>(out.components.size());
  return out;
}

double equivariance_residual(const IntervalMap& F, const Polynomial& alpha,
                             const Polynomial& v, const std::vector<Complex>& sample) {
  double worst = 0.0;
  for (const Complex& z : sample) {
    const Complex r = v(z) - alpha(F(z)) + F.deriv(z) * alpha(z);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

TelescopingReport vertical_telescoping_check(const IntervalMap& F, const Polynomial& alpha,
                                             int N, const std::vector<Complex>& sample) {
  const Polynomial v = alpha.composed_with(F.poly()) - F.dpoly().times(alpha);
  TelescopingReport rep;
  rep.lambda = std::numeric_limits<double>::infinity();
  double alpha_norm = 0.0;
  double v_norm = 0.0;
  for (const Complex& z : sample) {
    const auto orb = F.orbit(z, N);
    for (int k = 1; k <= N; ++k)
      if (std::abs(orb.derivs[static_cast<std::size_t>(k)]) < 1e-250)
        fail("DerivativeVanishes", "orbit derivative vanishes on the sample");
    Complex rhs = alpha(orb.points[static_cast<std::size_t>(N)]) /
                  orb.derivs[static_cast<std::size_t>(N)];
    double a_sum = 0.0;
    for (int k = 0; k <= N; ++k)
      v_norm = std::max(v_norm, std::abs(v(orb.points[static_cast<std::size_t>(k)])));
    for (int k = 0; k < N; ++k) {
      rhs -= v(orb.points[static_cast<std::size_t>(k)]) /
             orb.derivs[static_cast<std::size_t>(k + 1)];
      a_sum += 1.0 / std::abs(orb.derivs[static_cast<std::size_t>(k + 1)]);
    }
    rep.max_residual = std::max(rep.max_residual, std::abs(alpha(z) - rhs));
    rep.lambda = std::min(rep.lambda, std::abs(orb.derivs[static_cast<std::size_t>(N)]));
    rep.a_const = std::max(rep.a_const, a_sum);
    alpha_norm = std::max(alpha_norm, std::abs(alpha(z)));
  }
  rep.empirical_ratio = v_norm > 0.0 ? alpha_norm / v_norm
                                     : std::numeric_limits<double>::infinity();
  rep.bound = rep.lambda > 1.0 ? rep.lambda * rep.a_const / (rep.lambda - 1.0)
                               : std::numeric_limits<double>::infinity();
  return rep;
}

namespace {

// Jets of t -> (G + t field)^n(x) at t = 0: the orbit derivative and its
// first two x-derivatives, advanced alongside the jets of G^k.
struct FieldJets {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
};

FieldJets field_orbit_jets(const Polynomial& G, const Polynomial& field, double x, int n) {
  const Polynomial dG = G.derivative();
  const Polynomial d2G = dG.derivative();
  const Polynomial d3G = d2G.derivative();
  const Polynomial df = field.derivative();
  const Polynomial d2f = df.derivative();
  double F = x, dF = 1.0, d2F = 0.0;
  FieldJets j;
  for (int k = 0; k < n; ++k) {
    const double g1 = dG(F), g2 = d2G(F), g3 = d3G(F);
    const double f0 = field(F), f1 = df(F), f2 = d2f(F);
    const double nv = f0 + g1 * j.v;
    const double ndv = f1 * dF + g2 * dF * j.v + g1 * j.dv;
    const double nd2v = f2 * dF * dF + f1 * d2F + g3 * dF * dF * j.v + g2 * d2F * j.v +
                        2.0 * g2 * dF * j.dv + g1 * j.d2v;
    j = {nv, ndv, nd2v};
    const double nF = G(F);
    const double ndF = g1 * dF;
    const double nd2F = g2 * dF * dF + g1 * d2F;
    F = nF;
    dF = ndF;
    d2F = nd2F;
  }
  return j;
}

std::vector<double> defining_components(const Polynomial& G, int n, double x, bool third) {
  const Jet3 jet = iterate_jet3(G, x, n);
  std::vector<double> psi{jet.y - x, jet.d1 - 1.0};
  if (third) psi.push_back(jet.d2);
  return psi;
}

void check_diagonal(const std::vector<std::vector<double>>& jac) {
  for (std::size_t i = 0; i < jac.size(); ++i)
    if (std::abs(jac[i][i]) < 1e-10)
      fail("DegenerateJacobian", "defining-map Jacobian diagonal entry vanishes");
}

}  // namespace

ParabolicMapReport parabolic_defining_map(const Polynomial& g, const Polynomial& v, int n,
                                          double t, double x) {
  const Polynomial G = g + v * t;
  const Jet3 jet = iterate_jet3(G, x, n);
  const FieldJets fj = field_orbit_jets(G, v, x, n);

  ParabolicMapReport rep;
  rep.psi = {jet.y - x, jet.d1 - 1.0};
  rep.jacobian = {{fj.v, jet.d1 - 1.0}, {fj.dv, jet.d2}};
  check_diagonal(rep.jacobian);

  const double h = 1e-6;
  auto eval = [&](double tt, double xx) {
    return defining_components(g + v * tt, n, xx, false);
  };
  const auto tp = eval(t + h, x), tm = eval(t - h, x);
  const auto xp = eval(t, x + h), xm = eval(t, x - h);
  rep.jacobian_fd.resize(2);
  for (std::size_t i = 0; i < 2; ++i)
    rep.jacobian_fd[i] = {(tp[i] - tm[i]) / (2.0 * h), (xp[i] - xm[i]) / (2.0 * h)};
  return rep;
}

ParabolicMapReport parabolic_defining_map(const Polynomial& g, const Polynomial& v,
                                          const Polynomial& w, int n, double t, double s,
                                          double x) {
  const Polynomial G = g + v * t + w * s;
  const Jet3 jet = iterate_jet3(G, x, n);
  const FieldJets fv = field_orbit_jets(G, v, x, n);
  const FieldJets fw = field_orbit_jets(G, w, x, n);

  ParabolicMapReport rep;
  rep.psi = {jet.y - x, jet.d1 - 1.0, jet.d2};
  rep.jacobian = {{fv.v, fw.v, jet.d1 - 1.0},
                  {fv.dv, fw.dv, jet.d2},
                  {fv.d2v, fw.d2v, jet.d3}};
  check_diagonal(rep.jacobian);

  const double h = 1e-6;
  auto eval = [&](double tt, double ss, double xx) {
    return defining_components(g + v * tt + w * ss, n, xx, true);
  };
  const auto tp = eval(t + h, s, x), tm = eval(t - h, s, x);
  const auto sp = eval(t, s + h, x), sm = eval(t, s - h, x);
  const auto xp = eval(t, s, x + h), xm = eval(t, s, x - h);
  rep.jacobian_fd.resize(3);
  for (std::size_t i = 0; i < 3; ++i)
    rep.jacobian_fd[i] = {(tp[i] - tm[i]) / (2.0 * h), (sp[i] - sm[i]) / (2.0 * h),
                          (xp[i] - xm[i]) / (2.0 * h)};
  return rep;
}

}  // namespace pj
