#include "ballrecon/cover.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <stdexcept>

namespace ballrecon {

namespace {

constexpr double kCoverSlack = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool ball_covers(const MetricSpace& space, const Ball& b, const Point& p) {
  return distance(space, b.center, p) <= b.radius + kCoverSlack;
}

void dedupe_balls(std::vector<Ball>& balls) {
  std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) {
    if (a.radius != b.radius) return a.radius < b.radius;
    return point_less(a.center, b.center);
  });
  balls.erase(std::unique(balls.begin(), balls.end(),
                          [](const Ball& a, const Ball& b) {
                            return a.radius == b.radius && same_point(a.center, b.center);
                          }),
              balls.end());
}

// Unit vector orthogonal to u: used to offset curve-cover centers.
Eigen::VectorXd any_normal(const Eigen::VectorXd& u) {
  const Eigen::Index n = u.size();
  if (n == 1) throw std::invalid_argument("near_boundary_curve_cover: needs dimension >= 2");
  Eigen::Index least = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (std::abs(u[i]) < std::abs(u[least])) least = i;
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[least] = 1.0;
  Eigen::VectorXd v = e - e.dot(u) / u.squaredNorm() * u;
  return v / v.norm();
}

// Deterministic greedy order per the tie-breaking rule: lowest value per newly
// covered point, then smaller radius, then lexicographic center.
struct GreedyPick {
  double ratio;
  double radius;
  int index;
};

CoverResult greedy_cover(const CoverInstance& inst, const std::vector<std::vector<std::uint32_t>>& covers,
                         const std::vector<double>& values) {
  const std::size_t n_target = inst.target.size();
  const std::size_t n_cand = inst.candidates.size();
  std::vector<char> covered(n_target, 0);
  std::size_t n_covered = 0;
  std::vector<char> used(n_cand, 0);
  CoverResult res;
  while (n_covered < n_target) {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_cand; ++i) {
      if (used[i]) continue;
      std::size_t fresh = 0;
      for (std::uint32_t t : covers[i]) fresh += covered[t] ? 0u : 1u;
      if (fresh == 0) continue;
      const double ratio = values[i] / static_cast<double>(fresh);
      bool better = ratio < best_ratio - kCoverSlack;
      if (!better && std::abs(ratio - best_ratio) <= kCoverSlack && best >= 0) {
        const Ball& a = inst.candidates[i];
        const Ball& b = inst.candidates[static_cast<std::size_t>(best)];
        better = a.radius < b.radius ||
                 (a.radius == b.radius && point_less(a.center, b.center));
      }
      if (better) {
        best = static_cast<int>(i);
        best_ratio = ratio;
      }
    }
    if (best < 0) {
      res.feasible = false;
      res.solver_status = SolverStatus::Infeasible;
      res.value = std::numeric_limits<double>::quiet_NaN();
      return res;
    }
    used[static_cast<std::size_t>(best)] = 1;
    res.chosen.push_back(inst.candidates[static_cast<std::size_t>(best)]);
    res.value += values[static_cast<std::size_t>(best)];
    for (std::uint32_t t : covers[static_cast<std::size_t>(best)]) {
      if (!covered[t]) {
        covered[t] = 1;
        ++n_covered;
      }
    }
  }
  res.covers_target = true;
  res.solver_status = SolverStatus::Greedy;

  // Redundancy removal: drop the most expensive balls whose coverage is
  // already provided by the rest.
  bool improved = false;
  std::vector<std::size_t> order(res.chosen.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto chosen_value = [&](const Ball& b) {
    for (std::size_t i = 0; i < n_cand; ++i) {
      if (inst.candidates[i].radius == b.radius && same_point(inst.candidates[i].center, b.center)) {
        return values[i];
      }
    }
    return 0.0;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return chosen_value(res.chosen[a]) > chosen_value(res.chosen[b]);
  });
  std::vector<char> keep(res.chosen.size(), 1);
  for (std::size_t oi : order) {
    keep[oi] = 0;
    bool still_covers = true;
    for (const Point& t : inst.target) {
      bool hit = false;
      for (std::size_t j = 0; j < res.chosen.size(); ++j) {
        if (keep[j] && ball_covers(inst.premeasure.base.space, res.chosen[j], t)) {
          hit = true;
          break;
        }
      }
      if (!hit) {
        still_covers = false;
        break;
      }
    }
    if (still_covers) {
      improved = true;
    } else {
      keep[oi] = 1;
    }
  }
  if (improved) {
    std::vector<Ball> pruned;
    double value = 0.0;
    for (std::size_t j = 0; j < res.chosen.size(); ++j) {
      if (keep[j]) {
        pruned.push_back(res.chosen[j]);
        value += chosen_value(res.chosen[j]);
      }
    }
    res.chosen = std::move(pruned);
    res.value = value;
    res.solver_status = SolverStatus::Improved;
  }
  return res;
}

// Exact weighted set cover by dynamic programming over target subsets
// (targets <= 20). Dominated candidates are merged to the cheapest per mask.
struct ExactCoverDp {
  double value = std::numeric_limits<double>::infinity();
  std::vector<int> chosen;
};

ExactCoverDp exact_cover_dp(const std::vector<std::uint64_t>& masks,
                            const std::vector<double>& values, std::uint32_t n_target) {
  const std::uint32_t full = (1u << n_target) - 1u;
  std::vector<double> best(full + 1u, std::numeric_limits<double>::infinity());
  std::vector<int> from_mask(full + 1u, -1);
  std::vector<int> from_cand(full + 1u, -1);

  // Cheapest candidate per distinct coverage mask.
  std::vector<int> cheapest;
  {
    std::vector<std::uint64_t> seen_masks;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      bool merged = false;
      for (std::size_t k = 0; k < seen_masks.size(); ++k) {
        if (seen_masks[k] == masks[i]) {
          if (values[i] < values[static_cast<std::size_t>(cheapest[k])]) {
            cheapest[k] = static_cast<int>(i);
          }
          merged = true;
          break;
        }
      }
      if (!merged) {
        seen_masks.push_back(masks[i]);
        cheapest.push_back(static_cast<int>(i));
      }
    }
  }

  best[0] = 0.0;
  for (std::uint32_t covered = 0; covered <= full; ++covered) {
    if (!std::isfinite(best[covered])) continue;
    if (covered == full) break;
    // Extend over the lowest uncovered point only; any cover contains a
    // candidate covering it.
    std::uint32_t lowest = 0;
    while (covered & (1u << lowest)) ++lowest;
    for (int i : cheapest) {
      const std::uint64_t m = masks[static_cast<std::size_t>(i)];
      if (!(m & (1ull << lowest))) continue;
      const std::uint32_t next = covered | static_cast<std::uint32_t>(m);
      const double v = best[covered] + values[static_cast<std::size_t>(i)];
      if (v < best[next]) {
        best[next] = v;
        from_mask[next] = static_cast<int>(covered);
        from_cand[next] = i;
      }
    }
  }

  ExactCoverDp out;
  out.value = best[full];
  std::uint32_t cur = full;
  while (cur != 0 && from_cand[cur] >= 0) {
    out.chosen.push_back(from_cand[cur]);
    cur = static_cast<std::uint32_t>(from_mask[cur]);
  }
  return out;
}

// Exact cover by candidate-subset search with value pruning (candidates <= 20,
// targets possibly above the DP range).
void exact_cover_search(const std::vector<std::uint64_t>& masks, const std::vector<double>& values,
                        std::uint64_t full, std::size_t idx, std::uint64_t covered, double value,
                        std::vector<int>& current, double& best_value, std::vector<int>& best_set) {
  if (value >= best_value) return;
  if (covered == full) {
    best_value = value;
    best_set = current;
    return;
  }
  if (idx >= masks.size()) return;
  // Feasibility: remaining candidates must be able to finish the cover.
  std::uint64_t reachable = covered;
  for (std::size_t i = idx; i < masks.size(); ++i) reachable |= masks[i];
  if (reachable != full) return;
  current.push_back(static_cast<int>(idx));
  exact_cover_search(masks, values, full, idx + 1, covered | masks[idx], value + values[idx],
                     current, best_value, best_set);
  current.pop_back();
  exact_cover_search(masks, values, full, idx + 1, covered, value, current, best_value, best_set);
}

}  // namespace

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Exact: return "exact";
    case SolverStatus::Greedy: return "greedy";
    case SolverStatus::Improved: return "improved";
    case SolverStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::vector<Ball> generate_cover_candidates(const MetricSpace& space,
                                            const std::vector<Point>& target, double delta,
                                            const CoverStrategy& strategy) {
  require(delta > 0.0, "generate_cover_candidates: delta must be > 0");
  if (target.empty()) return {};
  for (const Point& p : target) space.validate_point(p);

  std::vector<double> radii;
  for (int k = 0; k < strategy.radius_levels; ++k) {
    radii.push_back(delta / std::pow(2.0, k + 1));
  }

  std::vector<Point> centers;
  if (strategy.target_centers) centers = target;

  if (strategy.lattice && space.kind() == SpaceKind::Euclidean) {
    Eigen::VectorXd lo = target.front().coords;
    Eigen::VectorXd hi = target.front().coords;
    for (const Point& p : target) {
      lo = lo.cwiseMin(p.coords);
      hi = hi.cwiseMax(p.coords);
    }
    lo.array() -= delta / 2.0;
    hi.array() += delta / 2.0;
    const double pitch = delta * strategy.lattice_pitch_factor;
    std::vector<Eigen::Index> steps(static_cast<std::size_t>(space.dim()));
    std::size_t total = 1;
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      steps[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(std::floor((hi[i] - lo[i]) / pitch)) + 1;
      total *= static_cast<std::size_t>(steps[static_cast<std::size_t>(i)]);
      if (total > strategy.max_candidates) break;
    }
    if (total <= strategy.max_candidates) {
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(space.dim()), 0);
      while (true) {
        Eigen::VectorXd x(space.dim());
        for (Eigen::Index i = 0; i < space.dim(); ++i) {
          x[i] = lo[i] + pitch * static_cast<double>(idx[static_cast<std::size_t>(i)]);
        }
        centers.push_back(Point::euclidean(space.id(), x));
        Eigen::Index i = 0;
        while (i < space.dim()) {
          if (++idx[static_cast<std::size_t>(i)] < steps[static_cast<std::size_t>(i)]) break;
          idx[static_cast<std::size_t>(i)] = 0;
          ++i;
        }
        if (i == space.dim()) break;
      }
    }
  }
  if (strategy.lattice && space.kind() == SpaceKind::FiniteMetric) {
    for (int node = 0; node < space.distance_matrix().rows(); ++node) {
      centers.push_back(Point::at_node(space.id(), node));
    }
  }

  std::vector<Ball> balls;
  for (double r : radii) {
    for (const Point& c : centers) balls.push_back({c, r});
    if (strategy.perturbed && space.kind() == SpaceKind::Euclidean) {
      for (const Point& t : target) {
        for (double eta : {r - r * r, r - r * r * r}) {
          if (eta <= 0.0) continue;
          for (Eigen::Index i = 0; i < space.dim(); ++i) {
            for (double s : {-1.0, 1.0}) {
              Eigen::VectorXd x = t.coords;
              x[i] += s * eta;
              balls.push_back({Point::euclidean(space.id(), x), r});
            }
          }
        }
      }
    }
  }
  dedupe_balls(balls);
  if (balls.size() > strategy.max_candidates) balls.resize(strategy.max_candidates);
  return balls;
}

CoverResult min_cover_value(const CoverInstance& inst, const CoverSolverParams& params) {
  require(inst.delta > 0.0, "min_cover_value: delta must be > 0");
  for (const Ball& b : inst.candidates) {
    require(2.0 * b.radius <= inst.delta * (1.0 + 1e-12),
            "min_cover_value: candidate diameter exceeds delta");
  }
  CoverResult res;
  if (inst.target.empty()) {
    res.covers_target = true;
    res.solver_status = SolverStatus::Exact;
    return res;
  }
  require(!inst.candidates.empty(), "min_cover_value: nonempty target needs candidates");

  const MetricSpace& space = inst.premeasure.base.space;
  const std::size_t n_cand = inst.candidates.size();
  const std::size_t n_target = inst.target.size();

  std::vector<double> values(n_cand);
  std::vector<std::vector<std::uint32_t>> covers(n_cand);
  for (std::size_t i = 0; i < n_cand; ++i) {
    values[i] = evaluate(inst.premeasure, inst.candidates[i]);
    for (std::size_t t = 0; t < n_target; ++t) {
      if (ball_covers(space, inst.candidates[i], inst.target[t])) {
        covers[i].push_back(static_cast<std::uint32_t>(t));
      }
    }
  }

  // Feasibility: every target point must be coverable.
  for (std::size_t t = 0; t < n_target; ++t) {
    bool hit = false;
    for (std::size_t i = 0; i < n_cand && !hit; ++i) {
      hit = std::find(covers[i].begin(), covers[i].end(), static_cast<std::uint32_t>(t)) != covers[i].end();
    }
    if (!hit) {
      res.feasible = false;
      res.solver_status = SolverStatus::Infeasible;
      res.value = std::numeric_limits<double>::quiet_NaN();
      return res;
    }
  }

  CoverResult greedy = greedy_cover(inst, covers, values);

  const bool dp_ok = n_target <= 20;
  const bool search_ok = n_cand <= static_cast<std::size_t>(params.exact_candidate_threshold);
  const bool exact_wanted =
      n_cand <= static_cast<std::size_t>(params.exact_candidate_threshold) ||
      n_target <= static_cast<std::size_t>(params.exact_target_threshold);
  if (!exact_wanted || (!dp_ok && !search_ok) || n_target > 64) return greedy;

  std::vector<std::uint64_t> masks(n_cand, 0);
  for (std::size_t i = 0; i < n_cand; ++i) {
    for (std::uint32_t t : covers[i]) masks[i] |= 1ull << t;
  }

  CoverResult exact;
  exact.solver_status = SolverStatus::Exact;
  if (dp_ok) {
    const ExactCoverDp dp = exact_cover_dp(masks, values, static_cast<std::uint32_t>(n_target));
    for (int i : dp.chosen) {
      exact.chosen.push_back(inst.candidates[static_cast<std::size_t>(i)]);
      exact.value += values[static_cast<std::size_t>(i)];
    }
  } else {
    const std::uint64_t full = (n_target == 64) ? ~0ull : ((1ull << n_target) - 1);
    double best_value = greedy.value + 1e-12;
    std::vector<int> best_set;
    std::vector<int> current;
    exact_cover_search(masks, values, full, 0, 0ull, 0.0, current, best_value, best_set);
    if (best_set.empty()) {
      exact.chosen = greedy.chosen;  // greedy already optimal within tolerance
      exact.value = greedy.value;
    } else {
      for (int i : best_set) {
        exact.chosen.push_back(inst.candidates[static_cast<std::size_t>(i)]);
        exact.value += values[static_cast<std::size_t>(i)];
      }
    }
  }
  exact.covers_target = true;
  return exact;
}

CoverSweepResult caratheodory_sweep(const MetricSpace& space, const std::vector<Point>& target,
                                    const PremeasureModel& premeasure,
                                    const std::vector<double>& delta_schedule,
                                    const CoverStrategy& strategy, const CoverSolverParams& params,
                                    int threads) {
  require(!delta_schedule.empty(), "caratheodory_sweep: empty delta schedule");
  for (std::size_t i = 0; i + 1 < delta_schedule.size(); ++i) {
    require(delta_schedule[i + 1] < delta_schedule[i],
            "caratheodory_sweep: delta schedule must be strictly decreasing");
  }

  auto solve_one = [&](double delta) {
    CoverSweepStep step;
    step.delta = delta;
    CoverInstance inst;
    inst.target = target;
    inst.delta = delta;
    inst.candidates = generate_cover_candidates(space, target, delta, strategy);
    inst.premeasure = premeasure;
    step.n_candidates = inst.candidates.size();
    step.result = min_cover_value(inst, params);
    return step;
  };

  CoverSweepResult sweep;
  if (threads > 1) {
    std::vector<std::future<CoverSweepStep>> futures;
    for (double delta : delta_schedule) {
      futures.push_back(std::async(std::launch::async, solve_one, delta));
    }
    for (auto& f : futures) sweep.steps.push_back(f.get());
  } else {
    for (double delta : delta_schedule) sweep.steps.push_back(solve_one(delta));
  }

  for (const CoverSweepStep& s : sweep.steps) sweep.all_feasible &= s.result.feasible;
  for (std::size_t i = 0; i + 1 < sweep.steps.size(); ++i) {
    if (sweep.steps[i].result.feasible && sweep.steps[i + 1].result.feasible &&
        sweep.steps[i + 1].result.value < sweep.steps[i].result.value - 1e-9) {
      sweep.monotone_ok = false;  // nu_delta should not decrease as delta shrinks
    }
  }
  sweep.limit = sweep.steps.back().result.value;
  return sweep;
}

SignedCoverEstimate signed_cover_reconstruct(const SignedMeasure& mu,
                                             const std::vector<Point>& target,
                                             const std::vector<double>& delta_schedule,
                                             const CoverStrategy& strategy,
                                             const CoverSolverParams& params, int threads) {
  SignedCoverEstimate est;
  const PremeasureModel p_plus = PremeasureModel::signed_part(mu, +1, PremeasureKind::Exact);
  const PremeasureModel p_minus = PremeasureModel::signed_part(mu, -1, PremeasureKind::Exact);
  est.plus_sweep = caratheodory_sweep(mu.space, target, p_plus, delta_schedule, strategy, params, threads);
  est.minus_sweep = caratheodory_sweep(mu.space, target, p_minus, delta_schedule, strategy, params, threads);
  est.plus_estimate = est.plus_sweep.limit;
  est.minus_estimate = est.minus_sweep.limit;
  return est;
}

ConstructedCurveCover near_boundary_curve_cover(const MetricSpace& space,
                                                const PolylineChain& chain,
                                                const PremeasureModel& premeasure, double delta) {
  require(space.kind() == SpaceKind::Euclidean, "near_boundary_curve_cover: Euclidean only");
  require(delta > 0.0 && delta < 1.0, "near_boundary_curve_cover: needs 0 < delta < 1");
  ConstructedCurveCover out;
  const double eta = delta - delta * delta;
  const double w = std::sqrt(delta * delta - eta * eta);  // covered half-width per ball

  for (std::size_t i = 0; i + 1 < chain.vertices.size(); ++i) {
    const Eigen::VectorXd& p0 = chain.vertices[i].coords;
    const Eigen::VectorXd& p1 = chain.vertices[i + 1].coords;
    const double len = (p1 - p0).norm();
    const Eigen::VectorXd u = (p1 - p0) / len;
    const Eigen::VectorXd n = any_normal(u);
    // Spacing in [w, 1.5 w]: every point covered at least once, at most twice.
    const int n_steps = std::max(1, static_cast<int>(std::ceil(len / (1.5 * w))));
    const double step = len / n_steps;
    for (int k = 0; k <= n_steps; ++k) {
      const Eigen::VectorXd c = p0 + (step * k) * u + eta * n;
      out.balls.push_back({Point::euclidean(space.id(), c), delta});
    }
  }

  for (const Ball& b : out.balls) out.value += evaluate(premeasure, b);
  const double total_len = chain.length();
  out.paper_bound = 2.0 * total_len * std::abs(chain.density) * (delta - eta) / delta;

  // Coverage check on a fine sample of the curve.
  out.covers_curve = true;
  SignedMeasure probe;
  probe.space = space;
  probe.chains = {chain};
  for (const Point& s : chain_sample_points(probe, w / 8.0)) {
    bool hit = false;
    for (const Ball& b : out.balls) {
      if (ball_covers(space, b, s)) {
        hit = true;
        break;
      }
    }
    if (!hit) {
      out.covers_curve = false;
      break;
    }
  }
  for (const Ball& b : out.balls) {
    out.max_cover_multiplicity_mass += std::abs(ball_mass(probe, b));
  }
  return out;
}

}  // namespace ballrecon
