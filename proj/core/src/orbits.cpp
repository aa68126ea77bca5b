#include "pj/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pj/roots.hpp"

namespace pj {

namespace {

constexpr double kDegreeGuard = 1e6;

double orbit_min_rotation(std::vector<double>& pts) {
  const auto it = std::min_element(pts.begin(), pts.end());
  std::rotate(pts.begin(), it, pts.end());
  return pts.front();
}

}  // namespace

ParabolicInfo classify_parabolic(double lambda, double a, double b) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-8)
    fail("NotParabolic", "multiplier is not on the unit circle within 1e-8");
  ParabolicInfo info;
  if (std::abs(lambda - 1.0) <= 1e-8) {
    if (std::abs(a) > 1e-10) {
      info.kind = ParabolicKind::SaddleNode;
      info.tau = a;
    } else if (b < -1e-10) {
      info.kind = ParabolicKind::Pitchfork;
      info.tau = b;
    } else {
      info.kind = ParabolicKind::NotSimple;
      info.tau = b;
    }
    return info;
  }
  // lambda = -1: the doubled return map is x - 2(b + a^2) x^3 + O(x^4).
  info.kind = ParabolicKind::PeriodDoubling;
  info.composed_cubic = -2.0 * (b + a * a);
  info.tau = info.composed_cubic;
  info.degenerate = std::abs(b + a * a) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  return info;
}

std::vector<PeriodicOrbitRecord> find_periodic_orbits(const IntervalMap& f,
                                                      const OrbitSearchParams& params) {
  const int d = std::max(1, f.poly().degree());
  double composed_degree = 1.0;
  for (int r = 0; r < params.max_period; ++r) {
    composed_degree *= d;
    if (composed_degree > kDegreeGuard)
      fail("DegreeGuard", "composed polynomial degree exceeds 1e6");
  }

  std::vector<PeriodicOrbitRecord> orbits;
  const Polynomial fp = f.poly();

  auto have_point = [&](double x, int period) {
    for (const auto& o : orbits) {
      if (o.period != period) continue;
      for (double p : o.points)
        if (std::abs(p - x) <= 50.0 * params.point_tol) return true;
    }
    return false;
  };

  for (int r = 1; r <= params.max_period; ++r) {
    auto g = [&](double x) { return f.iterate(x, r) - x; };
    auto dg = [&](double x) {
      double dd = 1.0;
      for (int k = 0; k < r; ++k) {
        dd *= f.deriv(x);
        x = f(x);
      }
      return dd - 1.0;
    };
    const std::vector<double> roots =
        sweep_roots(g, dg, -1.0, 1.0, params.cells, 100.0 * params.point_tol);

    for (double x : roots) {
      if (std::abs(g(x)) > params.point_tol) continue;
      // Minimal period: smallest divisor of r that already closes the orbit.
      int rmin = r;
      for (int s = 1; s < r; ++s)
        if (r % s == 0 && std::abs(f.iterate(x, s) - x) <= params.point_tol) {
          rmin = s;
          break;
        }
      if (rmin != r) continue;  // recorded at its own period
      std::vector<double> pts(static_cast<std::size_t>(r));
      double z = x;
      for (int k = 0; k < r; ++k) {
        pts[static_cast<std::size_t>(k)] = z;
        z = f(z);
      }
      orbit_min_rotation(pts);
      if (have_point(pts.front(), r)) continue;

      PeriodicOrbitRecord rec;
      rec.points = pts;
      rec.period = r;
      double mult = 1.0;
      for (double p : pts) mult *= f.deriv(p);
      rec.multiplier = mult;
      if (std::abs(mult) <= params.super_tol) {
        rec.stability = Stability::SuperAttracting;
      } else if (std::abs(std::abs(mult) - 1.0) <= params.parabolic_tol) {
        rec.stability = Stability::Parabolic;
        const Jet3 j = iterate_jet3(fp, pts.front(), r);
        rec.parabolic = classify_parabolic(mult, 0.5 * j.d2, j.d3 / 6.0);
      } else if (std::abs(mult) < 1.0) {
        rec.stability = Stability::Attracting;
      } else {
        rec.stability = Stability::Repelling;
      }
      orbits.push_back(std::move(rec));
    }
  }
  std::sort(orbits.begin(), orbits.end(), [](const auto& a, const auto& b) {
    if (a.period != b.period) return a.period < b.period;
    return a.points.front() < b.points.front();
  });
  return orbits;
}

namespace {

struct Walk {
  std::vector<double> pts;    // f^k(c), k = 0..len
  std::vector<double> dfs;    // Df at each point
};

Walk walk_orbit(const IntervalMap& f, double c, int horizon) {
  Walk w;
  w.pts.reserve(static_cast<std::size_t>(horizon) + 1);
  w.dfs.reserve(static_cast<std::size_t>(horizon) + 1);
  double x = c;
  for (int k = 0; k <= horizon; ++k) {
    w.pts.push_back(x);
    w.dfs.push_back(f.deriv(x));
    x = f(x);
  }
  return w;
}

// True when the two forward orbits genuinely merge: they meet at a point
// still macroscopically away from the attracting cycle (mere convergence
// brings any two basin orbits within tolerance near the cycle) and the
// match persists one step.
bool orbits_collide(const Walk& a, const Walk& b, double tol,
                    const std::vector<double>& cycle, double floor_dist) {
  auto cycle_dist = [&](double x) {
    double d = std::numeric_limits<double>::infinity();
    for (double p : cycle) d = std::min(d, std::abs(x - p));
    return d;
  };
  for (std::size_t m = 1; m < a.pts.size(); ++m) {
    if (cycle_dist(a.pts[m]) < floor_dist) continue;
    for (std::size_t n = 1; n < b.pts.size(); ++n)
      if (std::abs(a.pts[m] - b.pts[n]) <= tol) {
        if (m + 1 < a.pts.size() && n + 1 < b.pts.size() &&
            std::abs(a.pts[m + 1] - b.pts[n + 1]) > 1e-6)
          continue;
        return true;
      }
  }
  return false;
}

// Least walk index with the given phase mod r whose f^r-subsequence closes
// in on p0 monotonically from the start; the chart-entry time n_c.
int monotone_entry(const Walk& w, int phase, int r, double p0) {
  const int len = static_cast<int>(w.pts.size());
  for (int n = phase; n < len; n += r) {
    bool monotone = true;
    double d = std::abs(w.pts[static_cast<std::size_t>(n)] - p0);
    for (int m = n + r; m < len; m += r) {
      if (d <= 1e-13) break;
      const double nd = std::abs(w.pts[static_cast<std::size_t>(m)] - p0);
      if (nd >= d) {
        monotone = false;
        break;
      }
      d = nd;
    }
    if (monotone) return n;
  }
  return phase;
}

}  // namespace

CriticalClassification classify_critical_orbits(const IntervalMap& f,
                                                const std::vector<PeriodicOrbitRecord>& orbits,
                                                const ClassifyParams& params) {
  CriticalClassification cls;
  const auto& crit = f.critical_points();
  cls.nu = static_cast<int>(crit.size());
  for (std::size_t j = 0; j < orbits.size(); ++j)
    if (orbits[j].attracting_like()) cls.attractors.push_back(static_cast<int>(j));

  std::vector<Walk> walks;
  walks.reserve(crit.size());

  for (std::size_t i = 0; i < crit.size(); ++i) {
    const double c = crit[i].c;
    CriticalOrbitRecord rec;
    rec.index = static_cast<int>(i);
    bool resolved = false;

    Walk w = walk_orbit(f, c, params.horizon);

    for (int k = 1; k <= params.horizon && !resolved; ++k) {
      const double x = w.pts[static_cast<std::size_t>(k)];

      // (1) Hits a critical point: periodic critical or eventually critical.
      for (std::size_t j = 0; j < crit.size() && !resolved; ++j) {
        if (std::abs(x - crit[j].c) <= params.hit_tol) {
          if (j == i) {
            rec.fate = CriticalFate::PeriodicCritical;
            rec.period = k;
          } else {
            rec.fate = CriticalFate::EventuallyCritical;
            rec.q = k;
            rec.target = static_cast<int>(j);
          }
          resolved = true;
        }
      }
      if (resolved) break;

      // (2) Lands exactly on a recorded periodic orbit: the relation
      // f^{k+m}(c) = f^k(c) holds with m the orbit period.
      for (std::size_t oi = 0; oi < orbits.size() && !resolved; ++oi) {
        for (double p : orbits[oi].points) {
          if (std::abs(x - p) <= params.hit_tol) {
            rec.fate = CriticalFate::EventuallyPeriodic;
            rec.l = k;
            rec.q = k + orbits[oi].period;
            rec.relation_multiplier = orbits[oi].multiplier;
            rec.landed_orbit = static_cast<int>(oi);
            if (std::abs(rec.relation_multiplier - 1.0) <= 1e-8)
              fail("Unresolved", "critical orbit lands on a multiplier-one cycle");
            resolved = true;
            break;
          }
        }
      }
      if (resolved) break;

      // (3) Basin entry: close to an attracting orbit and contracting toward it.
      for (int oi : cls.attractors) {
        const auto& orb = orbits[static_cast<std::size_t>(oi)];
        for (std::size_t j = 0; j < orb.points.size(); ++j) {
          const double p = orb.points[j];
          if (std::abs(x - p) > params.basin_tol) continue;
          const int r = orb.period;
          double y = x;
          double dist = std::abs(y - p);
          bool converges = true;
          for (int m = 0; m < 3; ++m) {
            y = f.iterate(y, r);
            const double nd = std::abs(y - p);
            if (!(nd < dist || nd <= 1e-12)) {
              converges = false;
              break;
            }
            dist = nd;
          }
          if (!converges) continue;
          rec.fate = CriticalFate::InAttractingBasin;
          rec.attractor = oi;
          const int shift = (r - static_cast<int>(j)) % r;
          rec.entry = monotone_entry(w, (k + shift) % r, r, orb.points[0]);
          resolved = true;
          break;
        }
        if (resolved) break;
      }
      if (resolved) break;

      // (4) Exact self-relation away from the recorded orbits.
      for (int l = 1; l < k && !resolved; ++l) {
        if (std::abs(x - w.pts[static_cast<std::size_t>(l)]) > params.hit_tol) continue;
        // Guard against coincidental proximity: the relation must persist.
        bool persists = true;
        for (int m = 1; m <= 3 && k + m <= params.horizon; ++m) {
          if (std::abs(w.pts[static_cast<std::size_t>(k + m)] -
                       w.pts[static_cast<std::size_t>(l + m)]) > 1e-6) {
            persists = false;
            break;
          }
        }
        if (!persists) continue;
        double mult = 1.0;
        for (int m = l; m < k; ++m) mult *= w.dfs[static_cast<std::size_t>(m)];
        if (std::abs(mult - 1.0) <= 1e-8)
          fail("Unresolved", "critical orbit relation has multiplier one");
        rec.fate = CriticalFate::EventuallyPeriodic;
        rec.l = l;
        rec.q = k;
        rec.relation_multiplier = mult;
        resolved = true;
      }
    }

    if (!resolved) {
      std::ostringstream os;
      os << "critical point " << i << " unclassified within horizon " << params.horizon;
      fail("Unresolved", os.str());
    }
    cls.records.push_back(rec);
    walks.push_back(std::move(w));
  }

  // Preferred critical point per attractor: smallest index in its basin.
  for (int oi : cls.attractors) {
    for (auto& rec : cls.records) {
      if (rec.fate == CriticalFate::InAttractingBasin && rec.attractor == oi) {
        rec.preferred = true;
        break;
      }
    }
  }

  // Essential attractors have a critical point in the basin (including
  // critical points sitting on, or landing exactly on, the cycle).
  auto orbit_contains = [&](const PeriodicOrbitRecord& o, double x) {
    for (double p : o.points)
      if (std::abs(p - x) <= params.hit_tol) return true;
    return false;
  };
  int essential = 0;
  for (int oi : cls.attractors) {
    const auto& orb = orbits[static_cast<std::size_t>(oi)];
    bool ess = false;
    for (const auto& rec : cls.records) {
      if (rec.fate == CriticalFate::InAttractingBasin && rec.attractor == oi) ess = true;
      if (rec.fate == CriticalFate::EventuallyPeriodic && rec.landed_orbit == oi) ess = true;
      if (rec.fate == CriticalFate::PeriodicCritical &&
          orbit_contains(orb, crit[static_cast<std::size_t>(rec.index)].c))
        ess = true;
    }
    if (ess) ++essential;
  }
  cls.xi_nonessential = static_cast<int>(cls.attractors.size()) - essential;

  // zeta: per attractor, the largest set of basin critical points whose
  // forward orbits stay pairwise disjoint.
  cls.zeta = 0;
  for (int oi : cls.attractors) {
    const auto& orb = orbits[static_cast<std::size_t>(oi)];
    std::vector<std::size_t> members;
    std::vector<bool> on_cycle;  // the orbit eventually lies on the cycle itself
    for (std::size_t i = 0; i < cls.records.size(); ++i) {
      const auto& rec = cls.records[i];
      const bool at = rec.fate == CriticalFate::InAttractingBasin && rec.attractor == oi;
      const bool landed =
          rec.fate == CriticalFate::EventuallyPeriodic && rec.landed_orbit == oi;
      const bool riding =
          rec.fate == CriticalFate::PeriodicCritical && orbit_contains(orb, crit[i].c);
      if (at || landed || riding) {
        members.push_back(i);
        on_cycle.push_back(landed || riding);
      }
    }
    const std::size_t n = members.size();
    if (n == 0) continue;
    std::vector<std::vector<bool>> collide(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        collide[a][b] = collide[b][a] =
            (on_cycle[a] && on_cycle[b]) ||
            orbits_collide(walks[members[a]], walks[members[b]], params.hit_tol,
                           orb.points, params.basin_tol);
    int best = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      bool ok = true;
      int count = 0;
      for (std::size_t a = 0; a < n && ok; ++a) {
        if (!(mask & (std::size_t{1} << a))) continue;
        ++count;
        for (std::size_t b = a + 1; b < n && ok; ++b)
          if ((mask & (std::size_t{1} << b)) && collide[a][b]) ok = false;
      }
      if (ok) best = std::max(best, count);
    }
    cls.zeta += best;
  }

  cls.nu_H = cls.nu + cls.xi_nonessential;
  cls.nu_T = cls.nu - cls.zeta;

  // Global flags. A critical chain resolves by following eventually-critical
  // links to a terminal record.
  bool any_parabolic = false, any_super = false;
  for (const auto& o : orbits) {
    if (o.stability == Stability::Parabolic) any_parabolic = true;
    if (o.stability == Stability::SuperAttracting) any_super = true;
  }
  bool all_basin = true, any_periodic_critical = false;
  for (const auto& rec0 : cls.records) {
    const CriticalOrbitRecord* rec = &rec0;
    std::vector<bool> seen(cls.records.size(), false);
    while (rec->fate == CriticalFate::EventuallyCritical &&
           !seen[static_cast<std::size_t>(rec->index)]) {
      seen[static_cast<std::size_t>(rec->index)] = true;
      rec = &cls.records[static_cast<std::size_t>(rec->target)];
    }
    switch (rec->fate) {
      case CriticalFate::InAttractingBasin:
        break;
      case CriticalFate::EventuallyPeriodic:
        if (std::abs(rec->relation_multiplier) > 1.0) all_basin = false;
        break;
      case CriticalFate::PeriodicCritical:
        any_periodic_critical = true;
        break;
      case CriticalFate::EventuallyCritical:
        // A closed chain of critical points hitting one another is a
        // periodic critical cycle.
        any_periodic_critical = true;
        break;
    }
  }
  cls.semi_hyperbolic = !any_parabolic;
  cls.semi_hyperbolic_strict = !any_parabolic && !any_super && !any_periodic_critical;
  cls.hyperbolic = !any_parabolic && all_basin;
  return cls;
}

Codimensions count_codimensions(const CriticalClassification& cls) {
  return {cls.nu_H, cls.nu_T};
}

}  // namespace pj
