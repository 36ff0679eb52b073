#pragma once

#include "ballrecon/cover.hpp"

#include <functional>
#include <optional>

namespace ballrecon {

struct PackStrategy {
  bool support_centers = true;  // atoms and chain arc samples
  bool lattice = false;
  bool jiggle = false;  // coordinate-search refinement of centers, 20 steps
  int radius_levels = 3;  // delta, delta/2, delta/4
  double chain_pitch_factor = 0.1;    // arc pitch = delta * factor
  double lattice_pitch_factor = 0.5;  // pitch = delta * factor
  std::size_t max_candidates = 20000;
  // Sweeps pin these so candidate families are nested across the schedule:
  // the radius ladder halves from ladder_top down to radius_floor and each
  // instance keeps the rungs <= its delta.
  double ladder_top = -1.0;    // <= 0: ladder starts at delta
  double radius_floor = -1.0;  // <= 0: exactly radius_levels rungs
};

// Containment margin tau: packings must sit strictly inside the open set.
inline double default_containment_margin(double radius) { return radius / 100.0; }

struct PackingInstance {
  OpenSet open_set;
  double delta = 0.0;  // max ball radius
  std::vector<Ball> candidates;
  PremeasureModel premeasure;
  // tau >= 0; negative means the per-ball default radius/100.
  double containment_margin = -1.0;
};

struct PackingResult {
  std::vector<Ball> chosen;
  double value = 0.0;
  SolverStatus solver_status = SolverStatus::Exact;
  int conflict_count_checked = 0;  // chosen pairs re-verified disjoint
};

struct PackSolverParams {
  int exact_threshold = 40;  // exact max-weight independent set below this
  int swap_passes = 3;
};

// Closed balls overlap unless their center distance strictly exceeds the sum
// of radii; tangency counts as overlap.
bool balls_conflict(const MetricSpace& space, const Ball& a, const Ball& b);

std::vector<Ball> generate_packing_candidates(const MetricSpace& space, const OpenSet& open_set,
                                              double delta, const SignedMeasure& mu,
                                              const PackStrategy& strategy,
                                              const PremeasureModel* value_hint = nullptr);

// Maximum premeasure sum over pairwise disjoint candidate subsets: exact
// branch-and-bound MWIS on the conflict graph below the threshold, greedy by
// descending value plus swap local search beyond. The value lower-bounds the
// finite-candidate optimum unless the status is Exact.
PackingResult max_packing_value(const PackingInstance& instance,
                                const PackSolverParams& params = {});

struct PackSweepStep {
  double delta = 0.0;
  PackingResult result;
  std::size_t n_candidates = 0;
};

struct PackSweepResult {
  std::vector<PackSweepStep> steps;
  double limit = 0.0;  // min over per-delta values, matching inf_delta
  bool monotone_ok = true;
  bool all_exact = true;
};

PackSweepResult packing_sweep(const MetricSpace& space, const OpenSet& open_set,
                              const PremeasureModel& premeasure,
                              const std::vector<double>& delta_schedule,
                              const PackStrategy& strategy, const PackSolverParams& params = {},
                              int threads = 1);

// Compact set to be outer-regularized: finite points plus optional curves.
struct CompactTarget {
  std::vector<Point> points;
  std::vector<PolylineChain> chains;
};

OpenSet eps_neighborhood(const CompactTarget& target, double eps);

struct RegularizeStep {
  double eps = 0.0;
  PackSweepResult sweep;
};

struct RegularizeResult {
  std::vector<RegularizeStep> steps;
  double estimate = 0.0;  // min over eps, approximating inf over open supersets
  double smallest_eps = 0.0;
};

RegularizeResult outer_regularize(const MetricSpace& space, const CompactTarget& target,
                                  const PremeasureModel& premeasure,
                                  const std::vector<double>& eps_schedule,
                                  const std::vector<double>& delta_schedule,
                                  const PackStrategy& strategy,
                                  const PackSolverParams& params = {}, int threads = 1);

struct MethodIResult {
  double estimate = 0.0;
  int best_cover_index = -1;
  std::vector<double> cover_values;
  bool feasible = false;
  double single_set_estimate = 0.0;
  bool matches_single_set = false;
};

// Munroe Method I over a finite list of candidate open covers, with the
// packing value of each open set supplied by the oracle.
MethodIResult method_I_wrap(const MetricSpace& space, const CompactTarget& target,
                            const std::function<double(const OpenSet&)>& open_value_oracle,
                            const std::vector<std::vector<OpenSet>>& candidate_open_covers,
                            double single_set_estimate);

// Taylor-Tricot packing value: disjoint balls centered at points of E with
// radius <= delta (every such ball meets the closure of E).
PackingResult t_packing_value(const MetricSpace& space, const std::vector<Point>& E,
                              const PremeasureModel& premeasure, double delta,
                              int radius_levels = 3, const PackSolverParams& params = {});

struct ComparisonReport {
  double hat_estimate = 0.0;     // packing-construction value of E
  double tricot_estimate = 0.0;  // (q-P)(E) limsup over the schedule
  double gap = 0.0;
  std::vector<PackSweepStep> tricot_steps;
  RegularizeResult hat_result;
};

ComparisonReport compare_constructions(const MetricSpace& space, const std::vector<Point>& E,
                                       const PremeasureModel& premeasure,
                                       const std::vector<double>& delta_schedule,
                                       const std::vector<double>& eps_schedule,
                                       const PackStrategy& strategy,
                                       const PackSolverParams& params = {}, int threads = 1);

struct SandwichReport {
  double mu_A = 0.0;
  double mu_U = 0.0;  // smallest open superset used
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double estimate = 0.0;
  double tolerance = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
  bool pass = false;
};

// Checks (1/(gamma C)) mu(A) <= estimate <= C mu(U) with
// tol = 1e-9 + 1e-6 mu(U); requires a passed premeasure certificate.
SandwichReport sandwich_check(const CompactTarget& A, const SignedMeasure& mu,
                              const BoundCertificate& premeasure_cert,
                              const ReferenceMeasure& reference, double estimate,
                              const OpenSet& smallest_open_superset);

// mu restricted to the compact target: atoms sitting at its points plus the
// full mass of its chain entries.
double mass_on_target(const SignedMeasure& mu, const CompactTarget& A);

struct SignedPackingReport {
  double plus_estimate = 0.0;
  double minus_estimate = 0.0;
  RegularizeResult plus_result;
  RegularizeResult minus_result;
  double tv_mass = 0.0;  // |mu|(A)
  double tv_lower = 0.0;
  double tv_upper = 0.0;
  bool tv_ok = false;
};

SignedPackingReport signed_packing_reconstruct(const SignedMeasure& mu,
                                               const PremeasureModel& q_plus,
                                               const PremeasureModel& q_minus,
                                               const CompactTarget& A, double gamma, double C,
                                               const std::vector<double>& eps_schedule,
                                               const std::vector<double>& delta_schedule,
                                               const PackStrategy& strategy,
                                               const PackSolverParams& params = {},
                                               int threads = 1);

}  // namespace ballrecon
