#pragma once

#include <string>
#include <vector>

#include "pj/interval_map.hpp"
#include "pj/koenigs.hpp"
#include "pj/orbits.hpp"

namespace pj {

/// One component of a conjugacy invariant, tagged with the relation that
/// produced it: "ec[ci]", "ep[ci]", "at[k].mult", "at[k].phi[ci]", "t[ci~cj]".
struct PsiComponent {
  std::string label;
  double value = 0.0;
};

struct PsiValue {
  std::vector<PsiComponent> components;
  int dimension = 0;  // components.size()

  std::vector<std::string> labels() const;
  std::vector<double> values() const;
};

struct ContinuationParams {
  int newton_max = 60;
  double tol = 1e-12;  // relative Newton step exit
  double guard = 0.2;  // max drift before the frozen combinatorics count as lost
};

/// Critical point of g near the reference point c0 of order ell, by Newton
/// on g^(ell-1). Throws CombinatoricsBroken when the iteration fails, the
/// point drifts past the guard, or the order-ell structure is lost.
double continue_critical_point(const IntervalMap& g, double c0, int ell,
                               const ContinuationParams& params = {});

/// Periodic orbit of g continuing ref: Newton on g^r(x) - x from points[0],
/// the remaining points pushed forward. Throws CombinatoricsBroken.
PeriodicOrbitRecord continue_periodic_orbit(const IntervalMap& g,
                                            const PeriodicOrbitRecord& ref,
                                            const ContinuationParams& params = {});

/// Basin member of an attractor block: critical point `crit` whose orbit at
/// time n is phase-aligned with the orbit representative. `exact` marks a
/// critical orbit landing on the cycle itself (chart position 0).
struct BasinMember {
  int crit = -1;
  int n = 0;
  bool exact = false;
};

/// Per-attractor component block: the multiplier plus, when a normalizing
/// critical point exists and the basin holds more than one, the chart
/// positions of the remaining members.
struct AttractorBlock {
  int orbit = -1;      // index into the frozen orbit list
  int preferred = -1;  // normalizing critical-point index, -1 when absent
  int preferred_n = 0;
  std::vector<BasinMember> others;
};

/// A genuine merge between two critical orbits attached to one attractor:
/// f^{l_starred}(c_starred) = f^{l_other}(c_other).
struct CollisionPair {
  int starred = -1;
  int other = -1;
  int l_starred = 0;
  int l_other = 0;
};

/// Everything a Psi evaluation is frozen against: the reference map, its
/// periodic orbits and critical classification, and the derived block
/// layout. Built once; nearby maps are evaluated by Newton continuation.
struct FrozenReference {
  IntervalMap f;
  std::vector<PeriodicOrbitRecord> orbits;
  CriticalClassification cls;
  std::vector<AttractorBlock> blocks;    // by attractor order
  std::vector<int> starred;              // critical indices with disjoint orbits
  std::vector<CollisionPair> collisions; // one per non-starred basin critical
};

FrozenReference freeze_reference(const IntervalMap& f,
                                 const OrbitSearchParams& orbit_params = {},
                                 const ClassifyParams& classify_params = {});

/// Hybrid-conjugacy invariant of g against the frozen reference: critical
/// relation defects, landing defects on repelling cycles, then per-attractor
/// multipliers and normalized chart positions. Throws CombinatoricsBroken
/// when any continuation fails.
PsiValue psi_H(const IntervalMap& g, const FrozenReference& ref,
               const KoenigsParams& chart_params = {},
               const ContinuationParams& cont_params = {});

/// Topological-conjugacy invariant: the same relation blocks with the
/// attractor block replaced by orbit-collision defects.
PsiValue psi_T(const IntervalMap& g, const FrozenReference& ref,
               const ContinuationParams& cont_params = {});

/// v^n(x) = d/dt (f + t v)^n(x) at t = 0, by the recursion
/// v^{k+1}(x) = v(f^k x) + Df(f^k x) v^k(x).
double orbit_derivative(const IntervalMap& f, const PolyVectorField& v, double x, int n);

/// v^n(x) together with its x-derivative D v^n(x).
struct OrbitDerivativeJet {
  double v_n = 0.0;
  double dv_n = 0.0;
};
OrbitDerivativeJet orbit_derivative_jet(const IntervalMap& f, const PolyVectorField& v,
                                        double x, int n);

/// Directional derivative of psi_H at the reference map along v, by the
/// per-block closed forms. Requires v to freeze the critical points and to
/// vanish along the orbit segments each block's formula assumes; throws
/// AssumptionViolated otherwise.
PsiValue dpsi_H_analytic(const IntervalMap& f, const PolyVectorField& v,
                         const FrozenReference& ref,
                         const KoenigsParams& chart_params = {});

/// Central difference (psi_H(f + h v) - psi_H(f - h v)) / 2h componentwise.
/// step must lie in [1e-8, 1e-3].
PsiValue dpsi_finite_difference(const IntervalMap& f, const PolyVectorField& v,
                                const FrozenReference& ref, double step,
                                const KoenigsParams& chart_params = {},
                                const ContinuationParams& cont_params = {});

/// max over the sample of |v(z) - alpha(F(z)) + DF(z) alpha(z)|, the defect
/// of v being induced by the candidate conjugating field alpha.
double equivariance_residual(const IntervalMap& F, const Polynomial& alpha,
                             const Polynomial& v, const std::vector<Complex>& sample);

struct TelescopingReport {
  double max_residual = 0.0;   // of alpha(z) = alpha(F^N z)/DF^N(z) - sum_k v(F^k z)/DF^{k+1}(z)
  double empirical_ratio = 0.0;  // max |alpha| / max |v| over the sampled orbit points
  double lambda = 0.0;           // min |DF^N| over the sample
  double a_const = 0.0;          // max over the sample of sum_k 1/|DF^{k+1}|
  double bound = 0.0;            // lambda a_const / (lambda - 1); inf when lambda <= 1
};

/// Residual of the N-step telescoped form of the defining relation
/// v = alpha o F - DF alpha, plus the measured expansion constants.
/// Throws DerivativeVanishes when some DF^{k+1} vanishes on the sample.
TelescopingReport vertical_telescoping_check(const IntervalMap& F, const Polynomial& alpha,
                                             int N, const std::vector<Complex>& sample);

struct ParabolicMapReport {
  std::vector<double> psi;                       // defining-map components
  std::vector<std::vector<double>> jacobian;     // closed-form block
  std::vector<std::vector<double>> jacobian_fd;  // central-difference cross-check
};

/// Two-component defining map for a saddle-node or period-doubling local
/// model: Psi(t, x) = ((g + t v)^n(x) - x, D(g + t v)^n(x) - 1), with the
/// Jacobian in the unknowns (t, x). Throws DegenerateJacobian when a
/// diagonal entry falls below 1e-10.
ParabolicMapReport parabolic_defining_map(const Polynomial& g, const Polynomial& v, int n,
                                          double t, double x);

/// Three-component pitchfork form with unfolding fields v (value) and w
/// (slope): Psi(t, s, x) = (G^n(x) - x, DG^n(x) - 1, D^2 G^n(x)) for
/// G = g + t v + s w; Jacobian in (t, s, x).
ParabolicMapReport parabolic_defining_map(const Polynomial& g, const Polynomial& v,
                                          const Polynomial& w, int n, double t, double s,
                                          double x);

}  // namespace pj
