#pragma once

#include "ballrecon/premeasure.hpp"

#include <vector>

namespace ballrecon {

enum class SolverStatus { Exact, Greedy, Improved, Infeasible };

const char* to_string(SolverStatus s);

struct CoverStrategy {
  bool target_centers = true;
  bool lattice = true;
  // Off-support centers at distances r - r^2 and r - r^3 from each target
  // point, the near-boundary covers of the mass-loss examples.
  bool perturbed = true;
  int radius_levels = 3;  // delta/2, delta/4, delta/8
  double lattice_pitch_factor = 0.25;
  std::size_t max_candidates = 60000;
};

// Finite Caratheodory Method II instance: balls of diameter <= delta that
// must cover the finite target.
struct CoverInstance {
  std::vector<Point> target;
  double delta = 0.0;
  std::vector<Ball> candidates;
  PremeasureModel premeasure;
};

struct CoverResult {
  std::vector<Ball> chosen;
  double value = 0.0;
  bool covers_target = false;
  SolverStatus solver_status = SolverStatus::Exact;
  bool feasible = true;
};

struct CoverSolverParams {
  int exact_candidate_threshold = 20;
  int exact_target_threshold = 12;
};

std::vector<Ball> generate_cover_candidates(const MetricSpace& space,
                                            const std::vector<Point>& target, double delta,
                                            const CoverStrategy& strategy);

// Minimum premeasure sum over candidate subsets covering the target. Exact
// branch and bound below the thresholds, otherwise greedy (lowest value per
// newly covered point) with a redundancy-removal pass. The returned value
// upper-bounds the finite-candidate optimum unless the status is Exact.
CoverResult min_cover_value(const CoverInstance& instance, const CoverSolverParams& params = {});

struct CoverSweepStep {
  double delta = 0.0;
  CoverResult result;
  std::size_t n_candidates = 0;
};

struct CoverSweepResult {
  std::vector<CoverSweepStep> steps;
  double limit = 0.0;  // value at the smallest delta
  // nu_delta is nondecreasing as delta decreases; heuristic solves can break
  // that, which is flagged here.
  bool monotone_ok = true;
  bool all_feasible = true;
};

CoverSweepResult caratheodory_sweep(const MetricSpace& space, const std::vector<Point>& target,
                                    const PremeasureModel& premeasure,
                                    const std::vector<double>& delta_schedule,
                                    const CoverStrategy& strategy,
                                    const CoverSolverParams& params = {}, int threads = 1);

struct SignedCoverEstimate {
  double plus_estimate = 0.0;
  double minus_estimate = 0.0;
  CoverSweepResult plus_sweep;
  CoverSweepResult minus_sweep;
};

// Caratheodory reconstruction of a signed measure with the clamped exact
// premeasures p+(B) = (mu(B))_+ and p-(B) = (mu(B))_-.
SignedCoverEstimate signed_cover_reconstruct(const SignedMeasure& mu,
                                             const std::vector<Point>& target,
                                             const std::vector<double>& delta_schedule,
                                             const CoverStrategy& strategy,
                                             const CoverSolverParams& params = {}, int threads = 1);

struct ConstructedCurveCover {
  std::vector<Ball> balls;
  double value = 0.0;          // sum of premeasure over the family
  double paper_bound = 0.0;    // 2 L (delta - eta) / delta with eta = delta - delta^2
  bool covers_curve = false;   // verified on a fine sample of the curve
  double max_cover_multiplicity_mass = 0.0;  // sum of chord masses, <= 2 L
};

// The near-boundary curve cover: balls of radius delta centered at
// perpendicular offset eta = delta - delta^2, spaced so no portion of the
// curve is covered more than twice.
ConstructedCurveCover near_boundary_curve_cover(const MetricSpace& space,
                                                const PolylineChain& chain,
                                                const PremeasureModel& premeasure, double delta);

}  // namespace ballrecon
