#include "ballrecon/packing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <stdexcept>

namespace ballrecon {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double margin_for(const PackingInstance& inst, double radius) {
  return inst.containment_margin >= 0.0 ? inst.containment_margin
                                        : default_containment_margin(radius);
}

std::vector<double> radius_ladder(double delta, const PackStrategy& strategy) {
  const double top = strategy.ladder_top > 0.0 ? strategy.ladder_top : delta;
  double floor_r = strategy.radius_floor;
  if (floor_r <= 0.0) floor_r = top / std::pow(2.0, strategy.radius_levels - 1);
  std::vector<double> radii;
  for (double r = top; r >= floor_r * (1.0 - 1e-12); r /= 2.0) {
    if (r <= delta * (1.0 + 1e-12)) radii.push_back(r);
  }
  return radii;
}

struct Mwis {
  std::vector<Ball> chosen;
  double value = 0.0;
  SolverStatus status = SolverStatus::Exact;
};

// Exact maximum-weight independent set on <= 64 vertices: branch and bound
// with a greedy clique-cover upper bound.
class MwisSolver {
 public:
  MwisSolver(const std::vector<std::uint64_t>& adj, const std::vector<double>& values)
      : adj_(adj), values_(values), n_(static_cast<int>(values.size())) {}

  void solve(double incumbent_value, std::uint64_t incumbent_set) {
    best_value_ = incumbent_value;
    best_set_ = incumbent_set;
    const std::uint64_t all = (n_ == 64) ? ~0ull : ((1ull << n_) - 1);
    search(all, 0.0, 0ull);
  }

  double best_value() const { return best_value_; }
  std::uint64_t best_set() const { return best_set_; }

 private:
  double clique_cover_bound(std::uint64_t remaining) const {
    double bound = 0.0;
    std::uint64_t left = remaining;
    while (left) {
      const int v = std::countr_zero(left);
      // Each clique contributes at most its maximum weight.
      std::uint64_t common = adj_[static_cast<std::size_t>(v)] & left;
      std::uint64_t clique = 1ull << v;
      double max_w = values_[static_cast<std::size_t>(v)];
      while (common) {
        const int u = std::countr_zero(common);
        clique |= 1ull << u;
        max_w = std::max(max_w, values_[static_cast<std::size_t>(u)]);
        common &= adj_[static_cast<std::size_t>(u)];
      }
      bound += max_w;
      left &= ~clique;
    }
    return bound;
  }

  void search(std::uint64_t remaining, double value, std::uint64_t picked) {
    if (remaining == 0) {
      if (value > best_value_) {
        best_value_ = value;
        best_set_ = picked;
      }
      return;
    }
    if (value + clique_cover_bound(remaining) <= best_value_ + 1e-15) return;
    int v = -1;
    double vw = -1.0;
    std::uint64_t scan = remaining;
    while (scan) {
      const int u = std::countr_zero(scan);
      scan &= scan - 1;
      if (values_[static_cast<std::size_t>(u)] > vw) {
        vw = values_[static_cast<std::size_t>(u)];
        v = u;
      }
    }
    const std::uint64_t vbit = 1ull << v;
    search(remaining & ~(adj_[static_cast<std::size_t>(v)] | vbit), value + vw, picked | vbit);
    search(remaining & ~vbit, value, picked);
  }

  const std::vector<std::uint64_t>& adj_;
  const std::vector<double>& values_;
  int n_;
  double best_value_ = 0.0;
  std::uint64_t best_set_ = 0;
};

std::vector<std::size_t> value_order(const std::vector<Ball>& balls,
                                     const std::vector<double>& values) {
  std::vector<std::size_t> order(balls.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    if (balls[a].radius != balls[b].radius) return balls[a].radius < balls[b].radius;
    return point_less(balls[a].center, balls[b].center);
  });
  return order;
}

Mwis solve_mwis(const MetricSpace& space, const std::vector<Ball>& candidates,
                const std::vector<double>& values, const PackSolverParams& params) {
  Mwis out;
  const std::size_t n = candidates.size();
  if (n == 0) {
    out.status = SolverStatus::Exact;
    return out;
  }

  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (balls_conflict(space, candidates[i], candidates[j])) {
        adj[i].push_back(static_cast<std::uint32_t>(j));
        adj[j].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  // Greedy by descending value with deterministic tie-breaking.
  const std::vector<std::size_t> order = value_order(candidates, values);
  std::vector<char> in_set(n, 0);
  std::vector<std::uint32_t> chosen_deg(n, 0);  // chosen neighbors per vertex
  double greedy_value = 0.0;
  auto add = [&](std::size_t i) {
    in_set[i] = 1;
    greedy_value += values[i];
    for (std::uint32_t nb : adj[i]) ++chosen_deg[nb];
  };
  auto remove = [&](std::size_t i) {
    in_set[i] = 0;
    greedy_value -= values[i];
    for (std::uint32_t nb : adj[i]) --chosen_deg[nb];
  };
  for (std::size_t i : order) {
    if (chosen_deg[i] == 0) add(i);
  }

  if (n <= static_cast<std::size_t>(params.exact_threshold) && n <= 64) {
    std::vector<std::uint64_t> masks(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t j : adj[i]) masks[i] |= 1ull << j;
    }
    std::uint64_t greedy_mask = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_set[i]) greedy_mask |= 1ull << i;
    }
    MwisSolver solver(masks, values);
    solver.solve(greedy_value, greedy_mask);
    out.status = SolverStatus::Exact;
    out.value = solver.best_value();
    for (std::size_t i = 0; i < n; ++i) {
      if (solver.best_set() & (1ull << i)) out.chosen.push_back(candidates[i]);
    }
    return out;
  }

  // Swap local search: replace one chosen ball by up to two candidates whose
  // only chosen conflict is that ball.
  bool improved = false;
  for (int pass = 0; pass < params.swap_passes; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_set[i]) continue;
      std::vector<std::size_t> frees;
      for (std::uint32_t c : adj[i]) {
        if (!in_set[c] && chosen_deg[c] == 1) frees.push_back(c);
        if (frees.size() >= 64) break;
      }
      if (frees.empty()) continue;
      std::sort(frees.begin(), frees.end(),
                [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
      double best_gain = 1e-12;
      int add1 = -1;
      int add2 = -1;
      for (std::size_t a = 0; a < frees.size(); ++a) {
        const double single = values[frees[a]] - values[i];
        if (single > best_gain) {
          best_gain = single;
          add1 = static_cast<int>(frees[a]);
          add2 = -1;
        }
        for (std::size_t b = a + 1; b < frees.size(); ++b) {
          if (balls_conflict(space, candidates[frees[a]], candidates[frees[b]])) continue;
          const double pair = values[frees[a]] + values[frees[b]] - values[i];
          if (pair > best_gain) {
            best_gain = pair;
            add1 = static_cast<int>(frees[a]);
            add2 = static_cast<int>(frees[b]);
          }
        }
      }
      if (add1 >= 0) {
        remove(i);
        add(static_cast<std::size_t>(add1));
        if (add2 >= 0) add(static_cast<std::size_t>(add2));
        changed = true;
        improved = true;
      }
    }
    for (std::size_t c : order) {
      if (!in_set[c] && chosen_deg[c] == 0) {
        add(c);
        changed = true;
        improved = true;
      }
    }
    if (!changed) break;
  }

  out.status = improved ? SolverStatus::Improved : SolverStatus::Greedy;
  out.value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_set[i]) {
      out.chosen.push_back(candidates[i]);
      out.value += values[i];
    }
  }
  return out;
}

void jiggle_center(const MetricSpace& space, const OpenSet& open_set, Ball& ball,
                   const PremeasureModel& value_hint, double tau) {
  if (space.kind() != SpaceKind::Euclidean) return;
  double best = evaluate(value_hint, ball);
  double step = ball.radius / 2.0;
  for (int it = 0; it < 20; ++it) {
    bool moved = false;
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      for (double s : {-1.0, 1.0}) {
        Eigen::VectorXd x = ball.center.coords;
        x[i] += s * step;
        Ball trial{Point::euclidean(space.id(), x), ball.radius};
        if (!open_set.contains_ball(space, trial, tau)) continue;
        const double v = evaluate(value_hint, trial);
        if (v > best + 1e-15) {
          best = v;
          ball = trial;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.7;
  }
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

}  // namespace

bool balls_conflict(const MetricSpace& space, const Ball& a, const Ball& b) {
  return distance(space, a.center, b.center) <= a.radius + b.radius;
}

std::vector<Ball> generate_packing_candidates(const MetricSpace& space, const OpenSet& open_set,
                                              double delta, const SignedMeasure& mu,
                                              const PackStrategy& strategy,
                                              const PremeasureModel* value_hint) {
  require(delta > 0.0, "generate_packing_candidates: delta must be > 0");
  const std::vector<double> radii = radius_ladder(delta, strategy);
  if (radii.empty()) return {};

  std::vector<Point> centers;
  if (strategy.support_centers) {
    for (const Atom& a : mu.atoms) {
      if (open_set.contains(space, a.position)) centers.push_back(a.position);
    }
    if (!mu.chains.empty()) {
      for (Point& p : chain_sample_points(mu, delta * strategy.chain_pitch_factor)) {
        if (open_set.contains(space, p)) centers.push_back(std::move(p));
      }
    }
  }
  if (strategy.lattice && space.kind() == SpaceKind::Euclidean) {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    open_set.bounding_box(lo, hi);
    const double pitch = delta * strategy.lattice_pitch_factor;
    std::size_t total = 1;
    std::vector<Eigen::Index> steps(static_cast<std::size_t>(space.dim()));
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      steps[static_cast<std::size_t>(i)] =
          static_cast<Eigen::Index>(std::floor((hi[i] - lo[i]) / pitch)) + 1;
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
        Point p = Point::euclidean(space.id(), x);
        if (open_set.contains(space, p)) centers.push_back(std::move(p));
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

  std::vector<Ball> balls;
  for (double r : radii) {
    const double tau = default_containment_margin(r);
    for (const Point& c : centers) {
      Ball b{c, r};
      if (open_set.contains_ball(space, b, tau)) balls.push_back(b);
    }
  }
  dedupe_balls(balls);
  if (strategy.jiggle && value_hint != nullptr) {
    for (Ball& b : balls) {
      jiggle_center(space, open_set, b, *value_hint, default_containment_margin(b.radius));
    }
    dedupe_balls(balls);
  }
  if (balls.size() > strategy.max_candidates) balls.resize(strategy.max_candidates);
  return balls;
}

PackingResult max_packing_value(const PackingInstance& inst, const PackSolverParams& params) {
  const MetricSpace& space = inst.premeasure.base.space;
  require(inst.delta > 0.0, "max_packing_value: delta must be > 0");
  for (const Ball& b : inst.candidates) {
    require(b.radius <= inst.delta * (1.0 + 1e-12),
            "max_packing_value: candidate radius exceeds delta");
    require(inst.open_set.contains_ball(space, b, margin_for(inst, b.radius)),
            "max_packing_value: candidate ball not inside the open set");
  }
  std::vector<double> values(inst.candidates.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = evaluate(inst.premeasure, inst.candidates[i]);
  }
  Mwis mwis = solve_mwis(space, inst.candidates, values, params);

  PackingResult res;
  res.chosen = std::move(mwis.chosen);
  res.value = mwis.value;
  res.solver_status = mwis.status;
  for (std::size_t i = 0; i < res.chosen.size(); ++i) {
    for (std::size_t j = i + 1; j < res.chosen.size(); ++j) {
      ++res.conflict_count_checked;
      const double d = distance(space, res.chosen[i].center, res.chosen[j].center);
      if (!(d > res.chosen[i].radius + res.chosen[j].radius - 1e-12)) {
        throw std::logic_error("max_packing_value: chosen balls overlap");
      }
    }
  }
  return res;
}

PackSweepResult packing_sweep(const MetricSpace& space, const OpenSet& open_set,
                              const PremeasureModel& premeasure,
                              const std::vector<double>& delta_schedule,
                              const PackStrategy& strategy, const PackSolverParams& params,
                              int threads) {
  require(!delta_schedule.empty(), "packing_sweep: empty delta schedule");
  for (std::size_t i = 0; i + 1 < delta_schedule.size(); ++i) {
    require(delta_schedule[i + 1] < delta_schedule[i],
            "packing_sweep: delta schedule must be strictly decreasing");
  }
  const double max_delta = delta_schedule.front();
  const double min_delta = delta_schedule.back();

  // Nested candidate families across the schedule: shared radius ladder and a
  // delta-independent center pitch, so per-delta values are comparable and
  // the min matches inf_delta.
  auto strategy_for = [&](double delta) {
    PackStrategy s = strategy;
    if (s.ladder_top <= 0.0) s.ladder_top = max_delta;
    if (s.radius_floor <= 0.0) {
      s.radius_floor = min_delta / std::pow(2.0, strategy.radius_levels - 1);
    }
    s.chain_pitch_factor = strategy.chain_pitch_factor * min_delta / delta;
    s.lattice_pitch_factor = strategy.lattice_pitch_factor * min_delta / delta;
    return s;
  };

  auto solve_one = [&](double delta) {
    PackSweepStep step;
    step.delta = delta;
    PackingInstance inst;
    inst.open_set = open_set;
    inst.delta = delta;
    inst.candidates = generate_packing_candidates(space, open_set, delta, premeasure.base,
                                                  strategy_for(delta), &premeasure);
    inst.premeasure = premeasure;
    step.n_candidates = inst.candidates.size();
    step.result = max_packing_value(inst, params);
    return step;
  };

  PackSweepResult sweep;
  if (threads > 1) {
    std::vector<std::future<PackSweepStep>> futures;
    for (double delta : delta_schedule) {
      futures.push_back(std::async(std::launch::async, solve_one, delta));
    }
    for (auto& f : futures) sweep.steps.push_back(f.get());
  } else {
    for (double delta : delta_schedule) sweep.steps.push_back(solve_one(delta));
  }

  sweep.limit = std::numeric_limits<double>::infinity();
  for (const PackSweepStep& s : sweep.steps) {
    sweep.limit = std::min(sweep.limit, s.result.value);
    sweep.all_exact &= s.result.solver_status == SolverStatus::Exact;
  }
  for (std::size_t i = 0; i + 1 < sweep.steps.size(); ++i) {
    // hat-mu_delta is nonincreasing as delta decreases; heuristics may break it.
    if (sweep.steps[i + 1].result.value > sweep.steps[i].result.value + 1e-9) {
      sweep.monotone_ok = false;
    }
  }
  return sweep;
}

OpenSet eps_neighborhood(const CompactTarget& target, double eps) {
  require(!target.points.empty() || !target.chains.empty(), "eps_neighborhood: empty target");
  OpenSet out;
  bool have = false;
  if (!target.points.empty()) {
    out = OpenSet::point_neighborhood(target.points, eps);
    have = true;
  }
  for (const PolylineChain& c : target.chains) {
    OpenSet cap = OpenSet::polyline_neighborhood(c.vertices, eps);
    out = have ? OpenSet::merged(out, cap) : cap;
    have = true;
  }
  return out;
}

RegularizeResult outer_regularize(const MetricSpace& space, const CompactTarget& target,
                                  const PremeasureModel& premeasure,
                                  const std::vector<double>& eps_schedule,
                                  const std::vector<double>& delta_schedule,
                                  const PackStrategy& strategy, const PackSolverParams& params,
                                  int threads) {
  require(!eps_schedule.empty(), "outer_regularize: empty eps schedule");
  for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i) {
    require(eps_schedule[i + 1] < eps_schedule[i],
            "outer_regularize: eps schedule must be strictly decreasing");
  }
  RegularizeResult out;
  out.estimate = std::numeric_limits<double>::infinity();
  for (double eps : eps_schedule) {
    RegularizeStep step;
    step.eps = eps;
    const OpenSet u = eps_neighborhood(target, eps);
    step.sweep = packing_sweep(space, u, premeasure, delta_schedule, strategy, params, threads);
    out.estimate = std::min(out.estimate, step.sweep.limit);
    out.steps.push_back(std::move(step));
  }
  out.smallest_eps = eps_schedule.back();
  return out;
}

MethodIResult method_I_wrap(const MetricSpace& space, const CompactTarget& target,
                            const std::function<double(const OpenSet&)>& open_value_oracle,
                            const std::vector<std::vector<OpenSet>>& candidate_open_covers,
                            double single_set_estimate) {
  MethodIResult out;
  out.single_set_estimate = single_set_estimate;
  out.estimate = std::numeric_limits<double>::infinity();

  std::vector<Point> probes = target.points;
  for (const PolylineChain& c : target.chains) {
    SignedMeasure tmp;
    tmp.space = space;
    tmp.chains = {c};
    for (Point& p : chain_sample_points(tmp, c.length() / 64.0)) probes.push_back(std::move(p));
  }

  for (std::size_t k = 0; k < candidate_open_covers.size(); ++k) {
    const auto& cover = candidate_open_covers[k];
    bool covers = true;
    for (const Point& p : probes) {
      bool hit = false;
      for (const OpenSet& u : cover) {
        if (u.contains(space, p)) {
          hit = true;
          break;
        }
      }
      if (!hit) {
        covers = false;
        break;
      }
    }
    if (!covers) {
      out.cover_values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double value = 0.0;
    for (const OpenSet& u : cover) value += open_value_oracle(u);
    out.cover_values.push_back(value);
    out.feasible = true;
    if (value < out.estimate) {
      out.estimate = value;
      out.best_cover_index = static_cast<int>(k);
    }
  }
  if (out.feasible) {
    out.matches_single_set = std::abs(out.estimate - single_set_estimate) <= 1e-9;
  }
  return out;
}

PackingResult t_packing_value(const MetricSpace& space, const std::vector<Point>& E,
                              const PremeasureModel& premeasure, double delta, int radius_levels,
                              const PackSolverParams& params) {
  require(!E.empty(), "t_packing_value: E must be nonempty");
  require(delta > 0.0, "t_packing_value: delta must be > 0");
  std::vector<Ball> candidates;
  for (int k = 0; k < radius_levels; ++k) {
    const double r = delta / std::pow(2.0, k);
    for (const Point& x : E) candidates.push_back({x, r});
  }
  dedupe_balls(candidates);
  std::vector<double> values(candidates.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = evaluate(premeasure, candidates[i]);
  Mwis mwis = solve_mwis(space, candidates, values, params);
  PackingResult res;
  res.chosen = std::move(mwis.chosen);
  res.value = mwis.value;
  res.solver_status = mwis.status;
  for (std::size_t i = 0; i < res.chosen.size(); ++i) {
    for (std::size_t j = i + 1; j < res.chosen.size(); ++j) ++res.conflict_count_checked;
  }
  return res;
}

ComparisonReport compare_constructions(const MetricSpace& space, const std::vector<Point>& E,
                                       const PremeasureModel& premeasure,
                                       const std::vector<double>& delta_schedule,
                                       const std::vector<double>& eps_schedule,
                                       const PackStrategy& strategy,
                                       const PackSolverParams& params, int threads) {
  ComparisonReport rep;
  CompactTarget target;
  target.points = E;
  rep.hat_result = outer_regularize(space, target, premeasure, eps_schedule, delta_schedule,
                                    strategy, params, threads);
  rep.hat_estimate = rep.hat_result.estimate;

  for (double delta : delta_schedule) {
    PackSweepStep step;
    step.delta = delta;
    step.result = t_packing_value(space, E, premeasure, delta, strategy.radius_levels, params);
    rep.tricot_steps.push_back(std::move(step));
  }
  // limsup as delta -> 0: the largest value over the schedule tail.
  const std::size_t n = rep.tricot_steps.size();
  const std::size_t tail = std::min<std::size_t>(3, n);
  rep.tricot_estimate = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) {
    rep.tricot_estimate = std::max(rep.tricot_estimate, rep.tricot_steps[i].result.value);
  }
  rep.gap = std::abs(rep.hat_estimate - rep.tricot_estimate);
  return rep;
}

double mass_on_target(const SignedMeasure& mu, const CompactTarget& A) {
  double mass = 0.0;
  for (const Atom& a : mu.atoms) {
    for (const Point& p : A.points) {
      if (same_point(a.position, p, 1e-12)) {
        mass += a.weight;
        break;
      }
    }
  }
  for (const PolylineChain& c : A.chains) mass += c.length() * c.density;
  return mass;
}

SandwichReport sandwich_check(const CompactTarget& A, const SignedMeasure& mu,
                              const BoundCertificate& premeasure_cert,
                              const ReferenceMeasure& reference, double estimate,
                              const OpenSet& smallest_open_superset) {
  require(premeasure_cert.passed, "sandwich_check: premeasure certificate must have passed");
  SandwichReport rep;
  rep.mu_A = mass_on_target(mu, A);
  rep.mu_U = total_mass(mu, smallest_open_superset);
  rep.estimate = estimate;
  rep.lower_bound = rep.mu_A / (reference.gamma * premeasure_cert.C);
  rep.upper_bound = premeasure_cert.C * rep.mu_U;
  rep.tolerance = 1e-9 + 1e-6 * rep.mu_U;
  rep.lower_ok = rep.lower_bound - rep.tolerance <= estimate;
  rep.upper_ok = estimate <= rep.upper_bound + rep.tolerance;
  rep.pass = rep.lower_ok && rep.upper_ok;
  return rep;
}

SignedPackingReport signed_packing_reconstruct(const SignedMeasure& mu,
                                               const PremeasureModel& q_plus,
                                               const PremeasureModel& q_minus,
                                               const CompactTarget& A, double gamma, double C,
                                               const std::vector<double>& eps_schedule,
                                               const std::vector<double>& delta_schedule,
                                               const PackStrategy& strategy,
                                               const PackSolverParams& params, int threads) {
  SignedPackingReport rep;
  rep.plus_result = outer_regularize(mu.space, A, q_plus, eps_schedule, delta_schedule, strategy,
                                     params, threads);
  rep.minus_result = outer_regularize(mu.space, A, q_minus, eps_schedule, delta_schedule, strategy,
                                      params, threads);
  rep.plus_estimate = rep.plus_result.estimate;
  rep.minus_estimate = rep.minus_result.estimate;

  const auto [mu_plus, mu_minus] = hahn_split(mu);
  rep.tv_mass = mass_on_target(mu_plus, A) + mass_on_target(mu_minus, A);
  rep.tv_lower = rep.tv_mass / (gamma * C);
  rep.tv_upper = C * rep.tv_mass;
  const double tol = 1e-9 + 1e-6 * rep.tv_mass;
  const double tv_est = rep.plus_estimate + rep.minus_estimate;
  rep.tv_ok = rep.tv_lower - tol <= tv_est && tv_est <= rep.tv_upper + tol;
  return rep;
}

}  // namespace ballrecon
