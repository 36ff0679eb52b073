#include "ballrecon/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ballrecon {

namespace {

using Clock = std::chrono::steady_clock;

struct Context {
  const Scene& scene;
  const ScenarioOptions& opts;
  std::uint64_t seed() const { return opts.seed.value_or(scene.seed); }
  int threads() const { return std::max(1, opts.threads); }
  CoverSolverParams cover_params() const {
    CoverSolverParams p;
    p.exact_candidate_threshold = scene.solver.cover_exact_candidates;
    p.exact_target_threshold = scene.solver.cover_exact_targets;
    if (opts.exact_threshold) p.exact_candidate_threshold = *opts.exact_threshold;
    return p;
  }
  PackSolverParams pack_params() const {
    PackSolverParams p;
    p.exact_threshold = scene.solver.pack_exact_threshold;
    if (opts.exact_threshold) p.exact_threshold = *opts.exact_threshold;
    return p;
  }
};

Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  double n = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    n = v.norm();
  } while (n == 0.0);
  return v / n;
}

SignedMeasure random_atomic_measure(std::mt19937_64& rng, const MetricSpace& space, int n_atoms,
                                    double min_sep, double w_lo, double w_hi) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> weight(w_lo, w_hi);
  std::vector<Atom> atoms;
  int guard = 0;
  while (static_cast<int>(atoms.size()) < n_atoms) {
    if (++guard > 100000) throw std::runtime_error("random_atomic_measure: separation unreachable");
    Eigen::VectorXd x(space.dim());
    for (int i = 0; i < space.dim(); ++i) x[i] = unif(rng);
    Point p = Point::euclidean(space.id(), std::move(x));
    bool ok = true;
    for (const Atom& a : atoms) {
      if (distance(space, a.position, p) < min_sep) {
        ok = false;
        break;
      }
    }
    if (ok) atoms.push_back({std::move(p), weight(rng)});
  }
  return make_signed_measure(space, std::move(atoms));
}

OpenSet unit_box_set(const MetricSpace& space, double pad) {
  OpenSet::Box box;
  box.lo = Eigen::VectorXd::Constant(space.dim(), -pad);
  box.hi = Eigen::VectorXd::Constant(space.dim(), 1.0 + pad);
  return OpenSet::box_union({box}, space.id());
}

void add_pack_sweep_rows(CsvTable& t, const std::string& tag, const PackSweepResult& sweep) {
  for (const PackSweepStep& s : sweep.steps) {
    t.rows.push_back({tag, format_double(s.delta), format_double(s.result.value),
                      to_string(s.result.solver_status), std::to_string(s.result.chosen.size()),
                      std::to_string(s.n_candidates)});
  }
}

void add_cover_sweep_rows(CsvTable& t, const std::string& tag, const CoverSweepResult& sweep) {
  for (const CoverSweepStep& s : sweep.steps) {
    t.rows.push_back({tag, format_double(s.delta), format_double(s.result.value),
                      to_string(s.result.solver_status), std::to_string(s.result.chosen.size()),
                      std::to_string(s.n_candidates)});
  }
}

CsvTable sweep_table() {
  CsvTable t;
  t.name = "sweep";
  t.columns = {"construction", "delta", "value", "status", "n_balls", "n_candidates"};
  return t;
}

CsvTable certificate_table() {
  CsvTable t;
  t.name = "certificates";
  t.columns = {"certificate", "alpha", "C", "r0", "lower_margin", "upper_margin", "n_centers",
               "passed"};
  return t;
}

void add_certificate_row(CsvTable& t, const std::string& tag, const BoundCertificate& cert) {
  t.rows.push_back({tag, format_double(cert.alpha), format_double(cert.C), format_double(cert.r0),
                    format_double(cert.worst_lower_margin), format_double(cert.worst_upper_margin),
                    std::to_string(cert.n_centers), cert.passed ? "1" : "0"});
}

// --- scenarios ------------------------------------------------------------

RunReport scenario_dirac_loss(const Context& ctx) {
  RunReport rep;
  rep.scenario = "dirac-loss";
  const Scene& scene = ctx.scene;
  if (scene.measure.atoms.size() != 1 || !scene.measure.chains.empty()) {
    throw SceneError("dirac-loss: scene measure must be a single atom");
  }
  const Point& x = scene.measure.atoms.front().position;
  const PremeasureModel q = PremeasureModel::averaged(scene.measure);

  // q(B_r(y)) = (r - eta)/r for a unit Dirac at distance eta < r.
  std::mt19937_64 rng(ctx.seed());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = 0.2 + 0.8 * unif(rng);
    const double eta = (0.01 + 0.98 * unif(rng)) * r;
    const Point y =
        Point::euclidean(scene.space.id(), x.coords + eta * random_unit(rng, scene.space.dim()));
    const double got = evaluate(q, {y, r});
    worst = std::max(worst, std::abs(got - (r - eta) / r));
  }
  rep.verdicts.push_back(make_verdict("averaged_closed_form_max_error", worst, "<=", 0.0, 1e-12));

  CoverStrategy cover_strategy;  // target + lattice + near-boundary perturbations
  const CoverSweepResult cover =
      caratheodory_sweep(scene.space, {x}, q, scene.delta_schedule, cover_strategy,
                         ctx.cover_params(), ctx.threads());
  double value_at_002 = cover.steps.back().result.value;
  for (const CoverSweepStep& s : cover.steps) {
    if (std::abs(s.delta - 0.02) < 1e-15) value_at_002 = s.result.value;
  }
  rep.verdicts.push_back(make_verdict("cover_value_at_delta_0.02", value_at_002, "<=", 0.01));

  PackStrategy pack_strategy;
  pack_strategy.support_centers = true;
  const OpenSet u = scene.open_set ? *scene.open_set : OpenSet::point_neighborhood({x}, 0.5);
  const PackSweepResult pack = packing_sweep(scene.space, u, q, scene.delta_schedule,
                                             pack_strategy, ctx.pack_params(), ctx.threads());
  rep.verdicts.push_back(make_verdict("packing_limit_equals_mass", pack.limit, "==", 1.0, 1e-9));
  rep.verdicts.push_back(
      make_verdict("packing_all_exact", pack.all_exact ? 1.0 : 0.0, "==", 1.0, 0.0));

  CsvTable t = sweep_table();
  add_cover_sweep_rows(t, "cover", cover);
  add_pack_sweep_rows(t, "pack", pack);
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport scenario_curve_loss(const Context& ctx) {
  RunReport rep;
  rep.scenario = "curve-loss";
  const Scene& scene = ctx.scene;
  if (scene.measure.chains.size() != 1 || !scene.measure.atoms.empty()) {
    throw SceneError("curve-loss: scene measure must be a single chain");
  }
  const PolylineChain& chain = scene.measure.chains.front();
  const PremeasureModel q = PremeasureModel::averaged(scene.measure);
  const double L = chain.length() * std::abs(chain.density);

  CsvTable t;
  t.name = "cover";
  t.columns = {"delta", "eta", "n_balls", "value", "paper_bound", "covers"};
  double worst_margin = std::numeric_limits<double>::infinity();
  bool all_cover = true;
  double worst_mult = 0.0;
  for (double delta : scene.delta_schedule) {
    const ConstructedCurveCover cover = near_boundary_curve_cover(scene.space, chain, q, delta);
    worst_margin = std::min(worst_margin, cover.paper_bound - cover.value);
    all_cover &= cover.covers_curve;
    worst_mult = std::max(worst_mult, cover.max_cover_multiplicity_mass);
    t.rows.push_back({format_double(delta), format_double(delta - delta * delta),
                      std::to_string(cover.balls.size()), format_double(cover.value),
                      format_double(cover.paper_bound), cover.covers_curve ? "1" : "0"});
  }
  rep.verdicts.push_back(
      make_verdict("constructed_value_below_paper_bound", worst_margin, ">=", 0.0, 1e-9));
  rep.verdicts.push_back(make_verdict("family_covers_curve", all_cover ? 1.0 : 0.0, "==", 1.0));
  rep.verdicts.push_back(
      make_verdict("mass_counted_at_most_twice", worst_mult, "<=", 2.0 * L, 1e-9));
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport scenario_line_plus_dirac(const Context& ctx) {
  RunReport rep;
  rep.scenario = "line-plus-dirac";
  const Scene& scene = ctx.scene;
  if (scene.measure.atoms.size() != 1 || scene.measure.chains.size() != 1) {
    throw SceneError("line-plus-dirac: scene measure must be one chain plus one atom");
  }
  const Point& x = scene.measure.atoms.front().position;
  const PremeasureModel q = PremeasureModel::averaged(scene.measure);

  // Covering with centers restricted to the support of mu: the on-line
  // near-boundary centers lose the Dirac.
  CsvTable t = sweep_table();
  double cover_limit = std::numeric_limits<double>::infinity();
  for (double delta : scene.delta_schedule) {
    const double r = delta / 2.0;
    std::vector<Ball> candidates;
    candidates.push_back({x, r});
    const Eigen::VectorXd dir = (scene.measure.chains.front().vertices.back().coords -
                                 scene.measure.chains.front().vertices.front().coords)
                                    .normalized();
    for (double eta : {r - r * r, r - r * r * r}) {
      if (eta <= 0.0) continue;
      for (double s : {-1.0, 1.0}) {
        candidates.push_back({Point::euclidean(scene.space.id(), x.coords + s * eta * dir), r});
      }
    }
    CoverInstance inst;
    inst.target = {x};
    inst.delta = delta;
    inst.candidates = std::move(candidates);
    inst.premeasure = q;
    const CoverResult res = min_cover_value(inst, ctx.cover_params());
    cover_limit = res.value;
    t.rows.push_back({"cover", format_double(delta), format_double(res.value),
                      to_string(res.solver_status), std::to_string(res.chosen.size()),
                      std::to_string(inst.candidates.size())});
  }
  const double delta_min = scene.delta_schedule.back();
  rep.verdicts.push_back(
      make_verdict("cover_loses_dirac", cover_limit, "<=", 3.0 * delta_min, 1e-12));

  CompactTarget A;
  A.points = {x};
  PackStrategy strategy;
  const RegularizeResult reg =
      outer_regularize(scene.space, A, q, scene.eps_schedule, scene.delta_schedule, strategy,
                       ctx.pack_params(), ctx.threads());
  const double eps_min = scene.eps_schedule.back();
  rep.verdicts.push_back(
      make_verdict("packing_recovers_dirac_lower", reg.estimate, ">=", 1.0, 1e-9));
  rep.verdicts.push_back(make_verdict("packing_recovers_dirac_upper", reg.estimate, "<=",
                                      1.0 + 2.0 * eps_min *
                                                std::abs(scene.measure.chains.front().density),
                                      1e-9));
  for (const RegularizeStep& s : reg.steps) {
    add_pack_sweep_rows(t, "pack_eps=" + format_double(s.eps), s.sweep);
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport scenario_atomic_recovery(const Context& ctx) {
  RunReport rep;
  rep.scenario = "atomic-recovery";
  const Scene& scene = ctx.scene;
  const int n_instances = static_cast<int>(scene.extra("n_instances", 10));
  const int n_atoms = static_cast<int>(scene.extra("n_atoms", 10));

  std::mt19937_64 rng(ctx.seed());
  CsvTable t;
  t.name = "instances";
  t.columns = {"instance", "mass", "estimate", "abs_error", "all_exact"};
  double worst = 0.0;
  bool all_exact = true;
  for (int k = 0; k < n_instances; ++k) {
    const SignedMeasure mu = random_atomic_measure(rng, scene.space, n_atoms, 0.25, 0.5, 2.0);
    const PremeasureModel q = PremeasureModel::averaged(mu);
    const OpenSet u = unit_box_set(scene.space, 0.2);
    PackStrategy strategy;
    strategy.radius_levels = 2;  // keeps candidates within the exact-solver range
    const PackSweepResult sweep = packing_sweep(scene.space, u, q, scene.delta_schedule, strategy,
                                                ctx.pack_params(), ctx.threads());
    const double mass = total_mass(mu, u);
    const double err = std::abs(sweep.limit - mass);
    worst = std::max(worst, err);
    all_exact &= sweep.all_exact;
    t.rows.push_back({std::to_string(k), format_double(mass), format_double(sweep.limit),
                      format_double(err), sweep.all_exact ? "1" : "0"});
  }
  rep.verdicts.push_back(make_verdict("max_abs_error_vs_mu_U", worst, "<=", 0.0, 1e-9));
  rep.verdicts.push_back(make_verdict("all_solves_exact", all_exact ? 1.0 : 0.0, "==", 1.0));
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport scenario_sandwich(const Context& ctx) {
  RunReport rep;
  rep.scenario = "sandwich";
  const Scene& scene = ctx.scene;
  if (scene.measure.chains.size() != 1 || !scene.measure.atoms.empty()) {
    throw SceneError("sandwich: scene measure must be a single chain");
  }
  const PremeasureModel q = PremeasureModel::averaged(scene.measure);
  const double alpha = scene.premeasure_alpha;
  const double C = scene.premeasure_C;

  const SampleSpec spec = default_sample_spec(scene.measure, 0.25, ctx.seed());
  const BoundCertificate cert = certify_bounds(q, scene.measure, alpha, C, 0.25, spec);
  rep.verdicts.push_back(make_verdict(
      "premeasure_certificate_margins",
      std::min(cert.worst_lower_margin, cert.worst_upper_margin), ">=", 0.0, 1e-12));

  const ReferenceMeasure self_ref = make_self_reference(scene.measure, alpha);
  rep.verdicts.push_back(make_verdict("gamma_self_measure", self_ref.gamma, "==", 2.0, 1e-9));
  const ReferenceMeasure leb_ref = make_lebesgue_reference(scene.space.dim(), alpha);

  CompactTarget A;
  A.chains = scene.measure.chains;
  PackStrategy strategy;
  const RegularizeResult reg =
      outer_regularize(scene.space, A, q, scene.eps_schedule, scene.delta_schedule, strategy,
                       ctx.pack_params(), ctx.threads());

  const OpenSet u_min = eps_neighborhood(A, scene.eps_schedule.back());
  const SandwichReport self_rep = sandwich_check(A, scene.measure, cert, self_ref, reg.estimate, u_min);
  const SandwichReport leb_rep = sandwich_check(A, scene.measure, cert, leb_ref, reg.estimate, u_min);
  rep.verdicts.push_back(make_verdict("sandwich_self_lower", self_rep.estimate, ">=",
                                      self_rep.lower_bound, self_rep.tolerance));
  rep.verdicts.push_back(make_verdict("sandwich_self_upper", self_rep.estimate, "<=",
                                      self_rep.upper_bound, self_rep.tolerance));
  rep.verdicts.push_back(make_verdict("sandwich_lebesgue_lower", leb_rep.estimate, ">=",
                                      leb_rep.lower_bound, leb_rep.tolerance));
  rep.verdicts.push_back(make_verdict("sandwich_lebesgue_upper", leb_rep.estimate, "<=",
                                      leb_rep.upper_bound, leb_rep.tolerance));
  rep.verdicts.push_back(
      make_verdict("estimate_near_half_length", reg.estimate, "==", 0.5, 0.05));

  CsvTable t;
  t.name = "sandwich";
  t.columns = {"set", "mu", "lower_bound", "estimate", "upper_bound", "verdict"};
  auto row = [&](const char* tag, const SandwichReport& r) {
    t.rows.push_back({tag, format_double(r.mu_A), format_double(r.lower_bound),
                      format_double(r.estimate), format_double(r.upper_bound),
                      r.pass ? "pass" : "fail"});
  };
  row("unit_segment_self", self_rep);
  row("unit_segment_lebesgue", leb_rep);
  rep.tables.push_back(std::move(t));

  CsvTable sweeps = sweep_table();
  for (const RegularizeStep& s : reg.steps) {
    add_pack_sweep_rows(sweeps, "pack_eps=" + format_double(s.eps), s.sweep);
  }
  rep.tables.push_back(std::move(sweeps));

  CsvTable certs = certificate_table();
  add_certificate_row(certs, "averaged_vs_mu", cert);
  rep.tables.push_back(std::move(certs));
  return rep;
}

RunReport scenario_signed(const Context& ctx) {
  RunReport rep;
  rep.scenario = "signed";
  const Scene& scene = ctx.scene;
  const auto [mu_plus, mu_minus] = hahn_split(scene.measure);
  const double plus_mass = total_mass(mu_plus);
  const double minus_mass = total_mass(mu_minus);

  std::vector<Point> target;
  for (const Atom& a : scene.measure.atoms) target.push_back(a.position);

  CoverStrategy cover_strategy;
  cover_strategy.lattice = false;
  const SignedCoverEstimate cover = signed_cover_reconstruct(
      scene.measure, target, scene.delta_schedule, cover_strategy, ctx.cover_params(), ctx.threads());
  rep.verdicts.push_back(
      make_verdict("cover_plus_estimate", cover.plus_estimate, "==", plus_mass, 1e-9));
  rep.verdicts.push_back(
      make_verdict("cover_minus_estimate", cover.minus_estimate, "==", minus_mass, 1e-9));

  const double alpha = scene.premeasure_alpha;
  const double C = scene.premeasure_C;
  const PremeasureModel q_plus = PremeasureModel::signed_part(scene.measure, +1);
  const PremeasureModel q_minus = PremeasureModel::signed_part(scene.measure, -1);
  const SampleSpec spec = default_sample_spec(scene.measure, 0.25, ctx.seed());
  const auto [cert_plus, cert_minus] =
      certify_signed_bounds(q_plus, q_minus, scene.measure, alpha, C, spec);
  rep.verdicts.push_back(make_verdict(
      "signed_certificates_margins",
      std::min({cert_plus.worst_lower_margin, cert_plus.worst_upper_margin,
                cert_minus.worst_lower_margin, cert_minus.worst_upper_margin}),
      ">=", 0.0, 1e-12));

  CompactTarget A;
  A.points = target;
  PackStrategy strategy;
  const SignedPackingReport pack = signed_packing_reconstruct(
      scene.measure, q_plus, q_minus, A, scene.reference.gamma, C, scene.eps_schedule,
      scene.delta_schedule, strategy, ctx.pack_params(), ctx.threads());
  rep.verdicts.push_back(
      make_verdict("pack_plus_estimate", pack.plus_estimate, "==", plus_mass, 1e-9));
  rep.verdicts.push_back(
      make_verdict("pack_minus_estimate", pack.minus_estimate, "==", minus_mass, 1e-9));
  rep.verdicts.push_back(make_verdict("tv_sandwich_lower",
                                      pack.plus_estimate + pack.minus_estimate, ">=",
                                      pack.tv_lower, 1e-9));
  rep.verdicts.push_back(make_verdict("tv_sandwich_upper",
                                      pack.plus_estimate + pack.minus_estimate, "<=",
                                      pack.tv_upper, 1e-9 + 1e-6 * pack.tv_mass));

  CsvTable t = sweep_table();
  add_cover_sweep_rows(t, "cover_plus", cover.plus_sweep);
  add_cover_sweep_rows(t, "cover_minus", cover.minus_sweep);
  for (const RegularizeStep& s : pack.plus_result.steps) {
    add_pack_sweep_rows(t, "pack_plus_eps=" + format_double(s.eps), s.sweep);
  }
  for (const RegularizeStep& s : pack.minus_result.steps) {
    add_pack_sweep_rows(t, "pack_minus_eps=" + format_double(s.eps), s.sweep);
  }
  rep.tables.push_back(std::move(t));

  CsvTable certs = certificate_table();
  add_certificate_row(certs, "q_plus_vs_mu_plus", cert_plus);
  add_certificate_row(certs, "q_minus_vs_mu_minus", cert_minus);
  rep.tables.push_back(std::move(certs));
  return rep;
}

RunReport scenario_tricot_compare(const Context& ctx) {
  RunReport rep;
  rep.scenario = "tricot-compare";
  const Scene& scene = ctx.scene;
  const int n_sets = static_cast<int>(scene.extra("n_sets", 5));
  const int n_atoms = static_cast<int>(scene.extra("n_atoms", 5));

  std::mt19937_64 rng(ctx.seed());
  CsvTable t;
  t.name = "compare";
  t.columns = {"set", "hat_estimate", "tricot_estimate", "gap"};
  double worst_gap = 0.0;
  for (int k = 0; k < n_sets; ++k) {
    const SignedMeasure mu = random_atomic_measure(rng, scene.space, n_atoms, 0.25, 0.5, 2.0);
    const PremeasureModel q = PremeasureModel::averaged(mu);
    std::vector<Point> E;
    for (const Atom& a : mu.atoms) E.push_back(a.position);
    PackStrategy strategy;
    const ComparisonReport cmp =
        compare_constructions(scene.space, E, q, scene.delta_schedule, scene.eps_schedule,
                              strategy, ctx.pack_params(), ctx.threads());
    worst_gap = std::max(worst_gap, cmp.gap);
    t.rows.push_back({std::to_string(k), format_double(cmp.hat_estimate),
                      format_double(cmp.tricot_estimate), format_double(cmp.gap)});
  }
  rep.verdicts.push_back(make_verdict("max_gap", worst_gap, "<=", 1e-6));
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport scenario_stability(const Context& ctx) {
  RunReport rep;
  rep.scenario = "stability";
  const Scene& scene = ctx.scene;
  const int n_instances = static_cast<int>(scene.extra("n_instances", 10));
  const int n_atoms = static_cast<int>(scene.extra("n_atoms", 6));

  std::mt19937_64 rng(ctx.seed());
  CsvTable t;
  t.name = "instances";
  t.columns = {"instance", "mass", "estimate", "abs_error"};
  double worst = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_instances; ++k) {
    const SignedMeasure mu = random_atomic_measure(rng, scene.space, n_atoms, 0.25, 0.5, 2.0);
    const PremeasureModel q = PremeasureModel::exact(mu);
    const SampleSpec spec = default_sample_spec(mu, 0.1, ctx.seed() + static_cast<std::uint64_t>(k));
    const BoundCertificate cert = certify_bounds(q, mu, 1.0, 1.0, 0.1, spec);
    worst_margin = std::min({worst_margin, cert.worst_lower_margin, cert.worst_upper_margin});
    CompactTarget A;
    for (const Atom& a : mu.atoms) A.points.push_back(a.position);
    PackStrategy strategy;
    strategy.radius_levels = 2;
    const RegularizeResult reg =
        outer_regularize(scene.space, A, q, scene.eps_schedule, scene.delta_schedule, strategy,
                         ctx.pack_params(), ctx.threads());
    const double mass = total_mass(mu);
    const double err = std::abs(reg.estimate - mass);
    worst = std::max(worst, err);
    t.rows.push_back({std::to_string(k), format_double(mass), format_double(reg.estimate),
                      format_double(err)});
  }
  rep.verdicts.push_back(make_verdict("exact_premeasure_zero_margins", worst_margin, ">=", 0.0));
  rep.verdicts.push_back(make_verdict("max_abs_error_vs_mu", worst, "<=", 0.0, 1e-9));
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport scenario_besicovitch_demo(const Context& ctx) {
  RunReport rep;
  rep.scenario = "besicovitch-demo";
  const Scene& scene = ctx.scene;
  const int n_balls = static_cast<int>(scene.extra("n_balls", 200));
  const int zeta_bound = static_cast<int>(scene.extra("zeta_bound", 19));

  std::mt19937_64 rng(ctx.seed());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> rad(0.02, 0.25);
  BallFamily family;
  for (int i = 0; i < n_balls; ++i) {
    Eigen::VectorXd x(scene.space.dim());
    for (int d = 0; d < scene.space.dim(); ++d) x[d] = unif(rng);
    Point p = Point::euclidean(scene.space.id(), std::move(x));
    family.centers_of.push_back(p);
    family.balls.push_back({std::move(p), rad(rng)});
  }

  const SubfamilyDecomposition dec = greedy_subfamilies(scene.space, family, zeta_bound);
  int disjoint_violations = 0;
  for (const auto& sub : dec.subfamilies) {
    for (std::size_t i = 0; i < sub.size(); ++i) {
      for (std::size_t j = i + 1; j < sub.size(); ++j) {
        const Ball& a = family.balls[static_cast<std::size_t>(sub[i])];
        const Ball& b = family.balls[static_cast<std::size_t>(sub[j])];
        if (distance(scene.space, a.center, b.center) <= a.radius + b.radius) {
          ++disjoint_violations;
        }
      }
    }
  }
  int uncovered = 0;
  for (const Point& p : family.centers_of) {
    bool hit = false;
    for (const auto& sub : dec.subfamilies) {
      for (int i : sub) {
        const Ball& b = family.balls[static_cast<std::size_t>(i)];
        if (distance(scene.space, b.center, p) <= b.radius + 1e-12) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (!hit) ++uncovered;
  }
  rep.verdicts.push_back(make_verdict("subfamily_count", dec.subfamily_count, "<=", zeta_bound));
  rep.verdicts.push_back(make_verdict("pairwise_disjoint_violations", disjoint_violations, "==", 0.0));
  rep.verdicts.push_back(make_verdict("uncovered_centers", uncovered, "==", 0.0));

  CsvTable t;
  t.name = "subfamilies";
  t.columns = {"ball", "center", "radius", "subfamily"};
  for (std::size_t s = 0; s < dec.subfamilies.size(); ++s) {
    for (int i : dec.subfamilies[s]) {
      const Ball& b = family.balls[static_cast<std::size_t>(i)];
      std::string center = "(";
      for (Eigen::Index d = 0; d < b.center.coords.size(); ++d) {
        if (d) center += " ";
        center += format_double(b.center.coords[d]);
      }
      center += ")";
      t.rows.push_back({std::to_string(i), center, format_double(b.radius), std::to_string(s)});
    }
  }
  rep.tables.push_back(std::move(t));

  // Doubling-ball extraction on a mixed measure.
  const SignedMeasure mu = scene.measure;
  if (!mu.atoms.empty() || !mu.chains.empty()) {
    DoublingParams params;
    params.alpha = scene.reference.alpha;
    params.gamma = scene.reference.gamma;
    params.eps0 = 0.1;
    params.r_grid = default_radius_grid(0.1);
    std::vector<Point> A = support_points(mu, 0.05);
    const OpenSet u = unit_box_set(scene.space, 0.5);
    const DoublingCover cover =
        besicovitch_with_doubling(scene.space, A, u, mu, scene.reference, params, 0.1);
    double worst_doubling_margin = std::numeric_limits<double>::infinity();
    for (const Ball& b : cover.chosen) {
      const double lhs = ball_mass(mu, b);
      const double rhs =
          (params.gamma + params.eps0) * ball_mass(mu, {b.center, params.alpha * b.radius});
      worst_doubling_margin = std::min(worst_doubling_margin, rhs - lhs);
    }
    rep.verdicts.push_back(
        make_verdict("doubling_uncovered_points", static_cast<double>(cover.uncovered.size()),
                     "==", 0.0));
    rep.verdicts.push_back(
        make_verdict("doubling_inequality_margin", worst_doubling_margin, ">=", 0.0));
  }
  return rep;
}

RunReport scenario_directional_probe(const Context& ctx) {
  RunReport rep;
  rep.scenario = "directional-probe";
  const Scene& scene = ctx.scene;
  const int n_circle = static_cast<int>(scene.extra("circle_points", 720));
  const int star_rays = static_cast<int>(scene.extra("star_rays", 25));

  CsvTable t;
  t.name = "probe";
  t.columns = {"space", "n_candidates", "eta", "max_card", "upper_bound", "exact"};

  {
    const MetricSpace plane = MetricSpace::euclidean(2);
    DirectionalProbeParams params;
    params.xi = 2.0;
    params.eta = 1.0 / 3.0;
    params.base_point = Point::euclidean(0, Eigen::Vector2d::Zero());
    params.exact_threshold = scene.solver.probe_exact_threshold;
    for (int k = 0; k < n_circle; ++k) {
      const double theta = 2.0 * M_PI * k / n_circle;
      params.candidates.push_back(
          Point::euclidean(0, Eigen::Vector2d(std::cos(theta), std::sin(theta))));
    }
    const DirectionalProbeResult res = directional_limited_probe(plane, params);
    rep.verdicts.push_back(make_verdict("euclidean_circle_max_card", res.max_card, "==", 18.0));
    t.rows.push_back({"euclidean_2", std::to_string(n_circle), format_double(params.eta),
                      std::to_string(res.max_card), std::to_string(res.upper_bound),
                      res.exact ? "1" : "0"});
  }

  for (int k : {5, 10, star_rays}) {
    const MetricSpace star = MetricSpace::star_graph(k, 10.0);
    DirectionalProbeParams params;
    params.xi = 2.0;
    params.eta = 1.0 / 3.0;
    params.base_point = Point::on_ray(0, 0, 0.0);
    params.exact_threshold = scene.solver.probe_exact_threshold;
    for (int r = 0; r < k; ++r) params.candidates.push_back(Point::on_ray(0, r, 1.0));
    const DirectionalProbeResult res = directional_limited_probe(star, params);
    rep.verdicts.push_back(make_verdict("star_graph_" + std::to_string(k) + "_max_card",
                                        res.max_card, "==", static_cast<double>(k)));
    t.rows.push_back({"star_graph_" + std::to_string(k), std::to_string(k),
                      format_double(params.eta), std::to_string(res.max_card),
                      std::to_string(res.upper_bound), res.exact ? "1" : "0"});
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport scenario_cover_exact(const Context& ctx) {
  RunReport rep;
  rep.scenario = "cover-exact";
  const Scene& scene = ctx.scene;
  const int n_instances = static_cast<int>(scene.extra("n_instances", 10));
  const int n_atoms = static_cast<int>(scene.extra("n_atoms", 8));

  std::mt19937_64 rng(ctx.seed());
  CsvTable t;
  t.name = "instances";
  t.columns = {"instance", "target_mass", "cover_value", "margin", "status"};
  double worst_margin = std::numeric_limits<double>::infinity();
  bool all_exact = true;
  for (int k = 0; k < n_instances; ++k) {
    const SignedMeasure mu = random_atomic_measure(rng, scene.space, n_atoms, 0.25, 0.5, 2.0);
    const PremeasureModel q = PremeasureModel::exact(mu);
    std::vector<Point> target;
    for (const Atom& a : mu.atoms) target.push_back(a.position);
    const double delta = scene.delta_schedule.front();
    CoverInstance inst;
    inst.target = target;
    inst.delta = delta;
    CoverStrategy strategy;
    inst.candidates = generate_cover_candidates(scene.space, target, delta, strategy);
    inst.premeasure = q;
    const CoverResult res = min_cover_value(inst, ctx.cover_params());
    const double mass = total_mass(mu);
    const double margin = res.value - mass;
    worst_margin = std::min(worst_margin, margin);
    all_exact &= res.solver_status == SolverStatus::Exact;
    t.rows.push_back({std::to_string(k), format_double(mass), format_double(res.value),
                      format_double(margin), to_string(res.solver_status)});
  }
  rep.verdicts.push_back(
      make_verdict("min_cover_value_at_least_mass", worst_margin, ">=", 0.0, 1e-12));
  rep.verdicts.push_back(make_verdict("all_solves_exact", all_exact ? 1.0 : 0.0, "==", 1.0));
  rep.tables.push_back(std::move(t));
  return rep;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "dirac-loss",    "curve-loss",       "line-plus-dirac", "atomic-recovery",
      "sandwich",      "signed",           "tricot-compare",  "stability",
      "besicovitch-demo", "directional-probe", "cover-exact"};
  return names;
}

bool is_scenario(const std::string& name) {
  const auto& names = scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

RunReport run_scenario(const std::string& name, const Scene& scene, const ScenarioOptions& opts) {
  const Context ctx{scene, opts};
  const auto start = Clock::now();
  RunReport rep;
  if (name == "dirac-loss") rep = scenario_dirac_loss(ctx);
  else if (name == "curve-loss") rep = scenario_curve_loss(ctx);
  else if (name == "line-plus-dirac") rep = scenario_line_plus_dirac(ctx);
  else if (name == "atomic-recovery") rep = scenario_atomic_recovery(ctx);
  else if (name == "sandwich") rep = scenario_sandwich(ctx);
  else if (name == "signed") rep = scenario_signed(ctx);
  else if (name == "tricot-compare") rep = scenario_tricot_compare(ctx);
  else if (name == "stability") rep = scenario_stability(ctx);
  else if (name == "besicovitch-demo") rep = scenario_besicovitch_demo(ctx);
  else if (name == "directional-probe") rep = scenario_directional_probe(ctx);
  else if (name == "cover-exact") rep = scenario_cover_exact(ctx);
  else throw SceneError("unknown scenario '" + name + "'");
  rep.runtime_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return rep;
}

}  // namespace ballrecon
