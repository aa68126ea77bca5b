#pragma once

#include <optional>
#include <vector>

#include "pj/interval_map.hpp"

namespace pj {

enum class ParabolicKind { SaddleNode, PeriodDoubling, Pitchfork, NotSimple };

/// Classification of a neutral fixed point of the return map from the
/// centered Taylor data f^r(p + u) = p + lambda u + a u^2 + b u^3 + ...
struct ParabolicInfo {
  ParabolicKind kind = ParabolicKind::NotSimple;
  double tau = 0.0;             // leading normal-form coefficient
  double composed_cubic = 0.0;  // PeriodDoubling: cubic coefficient of the doubled return map
  bool degenerate = false;      // PeriodDoubling with b + a^2 = 0
};

ParabolicInfo classify_parabolic(double lambda, double a, double b);

enum class Stability { Repelling, Attracting, SuperAttracting, Parabolic };

struct PeriodicOrbitRecord {
  std::vector<double> points;  // one period in dynamical order, starting at the orbit minimum
  int period = 1;              // minimal
  double multiplier = 1.0;     // Df^period along the orbit
  Stability stability = Stability::Repelling;
  std::optional<ParabolicInfo> parabolic;

  bool attracting_like() const {
    return stability == Stability::Attracting || stability == Stability::SuperAttracting;
  }
};

struct OrbitSearchParams {
  int max_period = 6;
  int cells = 100000;          // sweep resolution per period
  double point_tol = 1e-10;    // |f^r(p) - p| bound and minimality test
  double parabolic_tol = 1e-8; // ||lambda| - 1| bound
  double super_tol = 1e-12;    // |lambda| bound for SuperAttracting
};

/// All periodic orbits of minimal period <= max_period inside [-1, 1].
/// Throws DegreeGuard when deg(f)^max_period exceeds 1e6.
std::vector<PeriodicOrbitRecord> find_periodic_orbits(const IntervalMap& f,
                                                      const OrbitSearchParams& params = {});

enum class CriticalFate {
  EventuallyCritical,   // lands on another critical point
  EventuallyPeriodic,   // orbit becomes exactly periodic away from Cr(f)
  InAttractingBasin,    // infinite orbit converging to an attracting orbit
  PeriodicCritical      // the critical point itself is periodic
};

struct CriticalOrbitRecord {
  int index = 0;  // which critical point of f
  CriticalFate fate = CriticalFate::InAttractingBasin;
  // EventuallyCritical: f^q(c) = critical point `target`, first hit at q.
  int q = 0;
  int target = -1;
  // EventuallyPeriodic: f^q(c) = f^l(c) with 1 <= l < q, first relation.
  int l = 0;
  double relation_multiplier = 0.0;  // Df^{q-l}(f^l(c))
  int landed_orbit = -1;             // orbit index when the landing cycle is recorded
  // InAttractingBasin:
  int attractor = -1;   // index into the orbit list
  int entry = 0;        // n_c: least n >= 0 with f^{n+kr}(c) -> representative point
  bool preferred = false;
  // PeriodicCritical:
  int period = 0;
};

struct CriticalClassification {
  std::vector<CriticalOrbitRecord> records;  // one per critical point, in order
  std::vector<int> attractors;               // orbit indices with |multiplier| < 1
  int nu = 0;
  int xi_nonessential = 0;  // attractors with no critical point in their basin
  int zeta = 0;             // max basin critical points with pairwise disjoint orbits
  int nu_H = 0;             // nu + xi_nonessential
  int nu_T = 0;             // nu - zeta
  bool semi_hyperbolic = false;         // multiplier 0 treated as attracting
  bool semi_hyperbolic_strict = false;  // and no superattracting orbit involved
  bool hyperbolic = false;              // every critical orbit ends in an attracting basin
};

struct ClassifyParams {
  int horizon = 2000;
  double hit_tol = 1e-9;   // exact-relation tolerance (EC / EP / periodic)
  double basin_tol = 1e-6; // convergence radius for basin entry
};

/// Classifies every critical orbit against the supplied periodic orbits.
/// Throws Unresolved when an orbit fits no case within the horizon.
CriticalClassification classify_critical_orbits(const IntervalMap& f,
                                                const std::vector<PeriodicOrbitRecord>& orbits,
                                                const ClassifyParams& params = {});

struct Codimensions {
  int nu_H = 0;
  int nu_T = 0;
};
Codimensions count_codimensions(const CriticalClassification& cls);

}  // namespace pj
