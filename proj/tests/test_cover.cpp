#include <doctest.h>

#include "ballrecon/cover.hpp"

#include <cmath>
#include <random>

using namespace ballrecon;

namespace {

const MetricSpace kPlane = MetricSpace::euclidean(2);

Point p2(double x, double y) { return Point::euclidean(0, Eigen::Vector2d(x, y)); }

bool has_ball_near(const std::vector<Ball>& balls, const Point& center, double radius,
                   double tol = 1e-9) {
  for (const Ball& b : balls) {
    if (std::abs(b.radius - radius) <= tol && distance(kPlane, b.center, center) <= tol) {
      return true;
    }
  }
  return false;
}

// Exhaustive weighted set-cover oracle over candidate subsets.
double exhaustive_cover_value(const MetricSpace& space, const std::vector<Point>& target,
                              const std::vector<Ball>& candidates,
                              const std::vector<double>& values) {
  const int n = static_cast<int>(candidates.size());
  REQUIRE(n <= 20);
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    bool covers = true;
    for (const Point& t : target) {
      bool hit = false;
      for (int i = 0; i < n && !hit; ++i) {
        if ((mask & (1u << i)) &&
            distance(space, candidates[static_cast<size_t>(i)].center, t) <=
                candidates[static_cast<size_t>(i)].radius + 1e-12) {
          hit = true;
        }
      }
      if (!hit) {
        covers = false;
        break;
      }
    }
    if (!covers) continue;
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) value += values[static_cast<size_t>(i)];
    }
    best = std::min(best, value);
  }
  return best;
}

SignedMeasure random_separated_atoms(std::mt19937_64& rng, int n, double min_sep) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::vector<Atom> atoms;
  while (static_cast<int>(atoms.size()) < n) {
    Point p = p2(unif(rng), unif(rng));
    bool ok = true;
    for (const Atom& a : atoms) {
      if (distance(kPlane, a.position, p) < min_sep) ok = false;
    }
    if (ok) atoms.push_back({std::move(p), w(rng)});
  }
  return make_signed_measure(kPlane, std::move(atoms));
}

}  // namespace

TEST_CASE("generate_cover_candidates: centered, perturbed, lattice") {
  const Point x = p2(0, 0);
  CoverStrategy strategy;
  const auto balls = generate_cover_candidates(kPlane, {x}, 0.2, strategy);
  CHECK(has_ball_near(balls, x, 0.1));
  // Near-boundary center at distance r - r^3 = 0.099 for r = 0.1.
  CHECK(has_ball_near(balls, p2(0.099, 0), 0.1));
  CHECK(has_ball_near(balls, p2(0, -0.099), 0.1));
  for (const Ball& b : balls) CHECK(2.0 * b.radius <= 0.2 + 1e-12);

  // Segment sample target: the lattice must cover every sample point.
  std::vector<Point> samples;
  for (int i = 0; i <= 20; ++i) samples.push_back(p2(i / 20.0, 0.0));
  const auto seg_balls = generate_cover_candidates(kPlane, samples, 0.1, strategy);
  for (const Point& s : samples) {
    bool covered = false;
    for (const Ball& b : seg_balls) {
      if (distance(kPlane, b.center, s) <= b.radius + 1e-12) {
        covered = true;
        break;
      }
    }
    CHECK(covered);
  }

  CHECK(generate_cover_candidates(kPlane, {}, 0.2, strategy).empty());
  CHECK_THROWS_AS(generate_cover_candidates(kPlane, {x}, 0.0, strategy), std::invalid_argument);
}

TEST_CASE("min_cover_value: the near-boundary ball makes a Dirac arbitrarily cheap") {
  const SignedMeasure dirac = make_signed_measure(kPlane, {{p2(0, 0), 1.0}});
  CoverInstance inst;
  inst.target = {p2(0, 0)};
  inst.delta = 0.2;
  inst.candidates = {{p2(0, 0), 0.1}, {p2(0.099, 0), 0.1}};
  inst.premeasure = PremeasureModel::averaged(dirac);
  const CoverResult res = min_cover_value(inst);
  CHECK(res.solver_status == SolverStatus::Exact);
  CHECK(res.covers_target);
  CHECK(res.value <= 0.01 + 1e-12);
  CHECK(res.value > 0.0);
}

TEST_CASE("min_cover_value: empty target and infeasible instances") {
  const SignedMeasure dirac = make_signed_measure(kPlane, {{p2(0, 0), 1.0}});
  CoverInstance inst;
  inst.delta = 0.2;
  inst.premeasure = PremeasureModel::averaged(dirac);
  const CoverResult empty = min_cover_value(inst);
  CHECK(empty.value == 0.0);
  CHECK(empty.covers_target);

  inst.target = {p2(5, 5)};
  inst.candidates = {{p2(0, 0), 0.1}};
  const CoverResult infeasible = min_cover_value(inst);
  CHECK(!infeasible.feasible);
  CHECK(infeasible.solver_status == SolverStatus::Infeasible);
  CHECK(std::isnan(infeasible.value));
}

TEST_CASE("exact cover equals the exhaustive oracle and dominates the target mass") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const SignedMeasure mu = random_separated_atoms(rng, 4 + static_cast<int>(rng() % 3), 0.2);
    std::vector<Point> target;
    for (const Atom& a : mu.atoms) target.push_back(a.position);

    // Small hand-rolled candidate set: centered balls plus a few joint balls.
    std::vector<Ball> candidates;
    for (const Atom& a : mu.atoms) candidates.push_back({a.position, 0.15});
    for (size_t i = 0; i + 1 < mu.atoms.size() && candidates.size() < 16; ++i) {
      Eigen::VectorXd mid =
          0.5 * (mu.atoms[i].position.coords + mu.atoms[i + 1].position.coords);
      candidates.push_back({Point::euclidean(0, std::move(mid)), 0.45});
    }
    CoverInstance inst;
    inst.target = target;
    inst.delta = 0.9;
    inst.candidates = candidates;
    inst.premeasure = PremeasureModel::exact(mu);
    const CoverResult res = min_cover_value(inst);
    REQUIRE(res.feasible);
    CHECK(res.solver_status == SolverStatus::Exact);

    std::vector<double> values;
    for (const Ball& b : candidates) values.push_back(evaluate(inst.premeasure, b));
    const double oracle = exhaustive_cover_value(kPlane, target, candidates, values);
    CHECK(res.value == doctest::Approx(oracle).epsilon(1e-12));

    // Finite form of the lemma: optimal cover value dominates the target mass.
    CHECK(res.value >= total_mass(mu) - 1e-12);

    double recomputed = 0.0;
    for (const Ball& b : res.chosen) recomputed += evaluate(inst.premeasure, b);
    CHECK(res.value == doctest::Approx(recomputed).epsilon(1e-12));
  }
}

TEST_CASE("cover value is monotone nonincreasing under candidate enlargement") {
  std::mt19937_64 rng(3);
  const SignedMeasure mu = random_separated_atoms(rng, 4, 0.25);
  std::vector<Point> target;
  for (const Atom& a : mu.atoms) target.push_back(a.position);
  std::vector<Ball> base;
  for (const Atom& a : mu.atoms) base.push_back({a.position, 0.1});
  CoverInstance inst;
  inst.target = target;
  inst.delta = 0.5;
  inst.candidates = base;
  inst.premeasure = PremeasureModel::averaged(mu);
  const double v1 = min_cover_value(inst).value;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    inst.candidates.push_back({p2(unif(rng), unif(rng)), 0.05 + 0.2 * unif(rng)});
  }
  const double v2 = min_cover_value(inst).value;
  CHECK(v2 <= v1 + 1e-12);
}

TEST_CASE("caratheodory_sweep: averaged premeasure loses the Dirac, exact recovers it") {
  const SignedMeasure dirac = make_signed_measure(kPlane, {{p2(0, 0), 1.0}});
  const std::vector<double> schedule{0.2, 0.1, 0.05, 0.02};
  CoverStrategy strategy;

  const CoverSweepResult averaged = caratheodory_sweep(
      kPlane, {p2(0, 0)}, PremeasureModel::averaged(dirac), schedule, strategy);
  CHECK(averaged.all_feasible);
  CHECK(averaged.limit <= 0.01);

  // With the exact premeasure every feasible cover of {x} pays the full mass.
  const CoverSweepResult exact = caratheodory_sweep(
      kPlane, {p2(0, 0)}, PremeasureModel::exact(dirac), schedule, strategy);
  CHECK(exact.limit == doctest::Approx(1.0).epsilon(1e-12));
  for (const CoverSweepStep& s : exact.steps) {
    CHECK(s.result.value >= 1.0 - 1e-12);
  }

  CHECK_THROWS_AS(caratheodory_sweep(kPlane, {p2(0, 0)}, PremeasureModel::exact(dirac),
                                     {0.1, 0.1}, strategy),
                  std::invalid_argument);
}

TEST_CASE("near-boundary curve cover stays below the paper bound") {
  PolylineChain chain;
  chain.vertices = {p2(0, 0), p2(1, 0)};
  chain.density = 1.0;
  const SignedMeasure mu = make_signed_measure(kPlane, {}, {chain});
  const PremeasureModel q = PremeasureModel::averaged(mu);
  for (double delta : {0.2, 0.1, 0.05, 0.02, 0.01}) {
    const ConstructedCurveCover cover = near_boundary_curve_cover(kPlane, chain, q, delta);
    CHECK(cover.covers_curve);
    CHECK(cover.value <= cover.paper_bound + 1e-9);
    CHECK(cover.paper_bound == doctest::Approx(2.0 * delta).epsilon(1e-12));
    CHECK(cover.max_cover_multiplicity_mass <= 2.0 + 1e-9);
  }
}

TEST_CASE("signed_cover_reconstruct splits a two-atom signed measure") {
  const SignedMeasure mu =
      make_signed_measure(kPlane, {{p2(0, 0), 2.0}, {p2(1, 0), -1.0}});
  CoverStrategy strategy;
  strategy.lattice = false;
  const SignedCoverEstimate est = signed_cover_reconstruct(
      mu, {p2(0, 0), p2(1, 0)}, {0.2, 0.1, 0.05}, strategy);
  CHECK(est.plus_estimate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(est.minus_estimate == doctest::Approx(1.0).epsilon(1e-12));

  const SignedMeasure pos = make_signed_measure(kPlane, {{p2(0, 0), 1.5}});
  const SignedCoverEstimate pos_est =
      signed_cover_reconstruct(pos, {p2(0, 0)}, {0.2, 0.1}, strategy);
  CHECK(pos_est.minus_estimate == 0.0);
  CHECK(pos_est.plus_estimate == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("signed cover premeasure p+ never exceeds the positive-part mass") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> w(0.2, 2.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < 5; ++i) {
    atoms.push_back({p2(unif(rng), unif(rng)), (i % 2 ? -1.0 : 1.0) * w(rng)});
  }
  const SignedMeasure mu = make_signed_measure(kPlane, std::move(atoms));
  const auto [mu_plus, mu_minus] = hahn_split(mu);
  const PremeasureModel p_plus = PremeasureModel::signed_part(mu, +1, PremeasureKind::Exact);
  for (int i = 0; i < 200; ++i) {
    const Ball b{p2(unif(rng), unif(rng)), 0.05 + std::abs(unif(rng))};
    CHECK(evaluate(p_plus, b) <= ball_mass(mu_plus, b) + 1e-12);
  }
}
