#include "ballrecon/scene.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ballrecon {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SceneError("scene: " + where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where));
  return out;
}

Point parse_point(const json& j, const MetricSpace& space, const std::string& where) {
  switch (space.kind()) {
    case SpaceKind::Euclidean: {
      const std::vector<double> c = number_list(j, where);
      if (static_cast<int>(c.size()) != space.dim()) fail(where, "coordinate dimension mismatch");
      Eigen::VectorXd v(space.dim());
      for (int i = 0; i < space.dim(); ++i) v[i] = c[static_cast<std::size_t>(i)];
      return Point::euclidean(space.id(), std::move(v));
    }
    case SpaceKind::StarGraph: {
      if (!j.is_object()) fail(where, "star-graph point must be {\"ray\":i,\"arc\":s}");
      return Point::on_ray(space.id(), field(j, "ray", where).get<int>(),
                           number(field(j, "arc", where), where));
    }
    case SpaceKind::FiniteMetric: {
      if (!j.is_number_integer()) fail(where, "finite-metric point must be a node index");
      return Point::at_node(space.id(), j.get<int>());
    }
  }
  fail(where, "unknown space kind");
}

MetricSpace parse_space(const json& j) {
  const std::string kind = field(j, "kind", "space").get<std::string>();
  if (kind == "euclidean") {
    return MetricSpace::euclidean(field(j, "dim", "space").get<int>());
  }
  if (kind == "star_graph") {
    const double max_arc = j.contains("max_arc") ? number(j["max_arc"], "space.max_arc") : 100.0;
    return MetricSpace::star_graph(field(j, "rays", "space").get<int>(), max_arc);
  }
  if (kind == "finite_metric") {
    const json& m = field(j, "matrix", "space");
    if (!m.is_array() || m.empty()) fail("space.matrix", "expected a nonempty matrix");
    const std::size_t n = m.size();
    Eigen::MatrixXd d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> row = number_list(m[i], "space.matrix row");
      if (row.size() != n) fail("space.matrix", "matrix must be square");
      for (std::size_t k = 0; k < n; ++k) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
    return MetricSpace::finite(std::move(d));
  }
  fail("space.kind", "unknown kind '" + kind + "'");
}

SignedMeasure parse_measure(const json& j, const MetricSpace& space) {
  std::vector<Atom> atoms;
  std::vector<PolylineChain> chains;
  if (j.contains("atoms")) {
    const json& arr = j["atoms"];
    if (!arr.is_array()) fail("measure.atoms", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "measure.atoms[" + std::to_string(i) + "]";
      Atom a;
      a.position = parse_point(field(arr[i], "position", where), space, where + ".position");
      a.weight = number(field(arr[i], "weight", where), where + ".weight");
      atoms.push_back(std::move(a));
    }
  }
  if (j.contains("chains")) {
    const json& arr = j["chains"];
    if (!arr.is_array()) fail("measure.chains", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "measure.chains[" + std::to_string(i) + "]";
      PolylineChain c;
      const json& verts = field(arr[i], "vertices", where);
      if (!verts.is_array() || verts.size() < 2) fail(where + ".vertices", "need >= 2 vertices");
      for (std::size_t v = 0; v < verts.size(); ++v) {
        c.vertices.push_back(parse_point(verts[v], space, where + ".vertices"));
      }
      c.density = number(field(arr[i], "density", where), where + ".density");
      chains.push_back(std::move(c));
    }
  }
  try {
    return make_signed_measure(space, std::move(atoms), std::move(chains));
  } catch (const std::invalid_argument& e) {
    fail("measure", e.what());
  }
}

OpenSet parse_open_set(const json& j, const MetricSpace& space) {
  const std::string kind = field(j, "kind", "open_set").get<std::string>();
  try {
    if (kind == "balls") {
      const json& centers = field(j, "centers", "open_set");
      const std::vector<double> radii = number_list(field(j, "radii", "open_set"), "open_set.radii");
      if (!centers.is_array() || centers.size() != radii.size()) {
        fail("open_set", "centers/radii size mismatch");
      }
      std::vector<Ball> balls;
      for (std::size_t i = 0; i < radii.size(); ++i) {
        balls.push_back({parse_point(centers[i], space, "open_set.centers"), radii[i]});
      }
      return OpenSet::ball_union(std::move(balls));
    }
    if (kind == "boxes") {
      const json& lo = field(j, "lo", "open_set");
      const json& hi = field(j, "hi", "open_set");
      if (!lo.is_array() || !hi.is_array() || lo.size() != hi.size()) {
        fail("open_set", "lo/hi size mismatch");
      }
      std::vector<OpenSet::Box> boxes;
      for (std::size_t i = 0; i < lo.size(); ++i) {
        const std::vector<double> a = number_list(lo[i], "open_set.lo");
        const std::vector<double> b = number_list(hi[i], "open_set.hi");
        OpenSet::Box box;
        box.lo = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
        box.hi = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
        boxes.push_back(std::move(box));
      }
      return OpenSet::box_union(std::move(boxes), space.id());
    }
    if (kind == "point_neighborhood") {
      const json& pts = field(j, "points", "open_set");
      std::vector<Point> points;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        points.push_back(parse_point(pts[i], space, "open_set.points"));
      }
      return OpenSet::point_neighborhood(points, number(field(j, "eps", "open_set"), "open_set.eps"));
    }
    if (kind == "polyline_neighborhood") {
      const json& pts = field(j, "vertices", "open_set");
      std::vector<Point> points;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        points.push_back(parse_point(pts[i], space, "open_set.vertices"));
      }
      return OpenSet::polyline_neighborhood(std::move(points),
                                            number(field(j, "eps", "open_set"), "open_set.eps"));
    }
  } catch (const std::invalid_argument& e) {
    fail("open_set", e.what());
  }
  fail("open_set.kind", "unknown kind '" + kind + "'");
}

ReferenceMeasure parse_reference(const json& j, const MetricSpace& space,
                                 const SignedMeasure& mu) {
  const std::string kind = field(j, "kind", "reference").get<std::string>();
  const double alpha = number(field(j, "alpha", "reference"), "reference.alpha");
  if (alpha <= 0.0 || alpha > 1.0) fail("reference.alpha", "must be in (0,1]");
  if (kind == "lebesgue") {
    const int dim = j.contains("dim") ? j["dim"].get<int>() : space.dim();
    return make_lebesgue_reference(dim, alpha);
  }
  if (kind == "self") {
    SignedMeasure positive = mu;
    if (!positive.nonnegative()) {
      auto [plus, minus] = hahn_split(positive);
      positive = std::move(plus);
    }
    return make_self_reference(std::move(positive), alpha);
  }
  fail("reference.kind", "unknown kind '" + kind + "'");
}

PremeasureModel parse_premeasure(const json& j, const SignedMeasure& mu, std::uint64_t seed) {
  const std::string kind = field(j, "kind", "premeasure").get<std::string>();
  try {
    if (kind == "exact") return PremeasureModel::exact(mu);
    if (kind == "averaged") return PremeasureModel::averaged(mu);
    if (kind == "kernel") {
      StepKernel omega;
      omega.values = number_list(field(j, "omega", "premeasure"), "premeasure.omega");
      return PremeasureModel::kernel(mu, std::move(omega));
    }
    if (kind == "noisy") {
      const double c = number(field(j, "C", "premeasure"), "premeasure.C");
      const std::uint64_t s = j.contains("seed") ? j["seed"].get<std::uint64_t>() : seed;
      return PremeasureModel::noisy(mu, c, s);
    }
    if (kind == "signed_part") {
      const std::string sign = field(j, "sign", "premeasure").get<std::string>();
      if (sign != "+" && sign != "-") fail("premeasure.sign", "must be '+' or '-'");
      PremeasureKind base = PremeasureKind::Averaged;
      if (j.contains("base")) {
        const std::string b = j["base"].get<std::string>();
        if (b == "exact") base = PremeasureKind::Exact;
        else if (b == "averaged") base = PremeasureKind::Averaged;
        else if (b == "kernel") base = PremeasureKind::Kernel;
        else fail("premeasure.base", "unknown base '" + b + "'");
      }
      StepKernel omega = StepKernel::uniform();
      if (j.contains("omega")) omega.values = number_list(j["omega"], "premeasure.omega");
      return PremeasureModel::signed_part(mu, sign == "+" ? +1 : -1, base, std::move(omega));
    }
  } catch (const std::invalid_argument& e) {
    fail("premeasure", e.what());
  }
  fail("premeasure.kind", "unknown kind '" + kind + "'");
}

}  // namespace

double Scene::extra(const std::string& key, double fallback) const {
  for (const auto& [k, v] : extras) {
    if (k == key) return v;
  }
  return fallback;
}

Scene parse_scene(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("scene: JSON parse error: ") + e.what());
  }

  Scene scene;
  scene.space = parse_space(field(j, "space", "root"));
  scene.measure = parse_measure(field(j, "measure", "root"), scene.space);

  if (!j.contains("seed")) fail("root", "missing key 'seed'");
  scene.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("reference")) {
    scene.reference = parse_reference(j["reference"], scene.space, scene.measure);
  } else {
    scene.reference = make_lebesgue_reference(
        scene.space.kind() == SpaceKind::Euclidean ? scene.space.dim() : 1, 0.5);
  }

  if (j.contains("premeasure")) {
    scene.premeasure = parse_premeasure(j["premeasure"], scene.measure, scene.seed);
    const json& p = j["premeasure"];
    scene.premeasure_alpha = p.contains("alpha") ? number(p["alpha"], "premeasure.alpha")
                                                 : scene.reference.alpha;
    scene.premeasure_C = p.contains("C") ? number(p["C"], "premeasure.C") : 1.0;
  } else {
    scene.premeasure = scene.measure.nonnegative()
                           ? PremeasureModel::averaged(scene.measure)
                           : PremeasureModel::signed_part(scene.measure, +1);
    scene.premeasure_alpha = 0.5;
    scene.premeasure_C = 2.0;
  }

  if (j.contains("sets")) {
    const json& sets = j["sets"];
    if (sets.contains("target")) {
      const json& t = sets["target"];
      if (!t.is_array()) fail("sets.target", "expected an array of points");
      for (std::size_t i = 0; i < t.size(); ++i) {
        scene.target_points.push_back(parse_point(t[i], scene.space, "sets.target"));
      }
    }
    if (sets.contains("open_set")) {
      scene.open_set = parse_open_set(sets["open_set"], scene.space);
    }
  }
  // Default compact target: the measure's support description.
  scene.compact.points.clear();
  for (const Atom& a : scene.measure.atoms) scene.compact.points.push_back(a.position);
  scene.compact.chains = scene.measure.chains;
  if (!scene.target_points.empty()) {
    scene.compact.points = scene.target_points;
  }

  scene.delta_schedule = {0.2, 0.1, 0.05, 0.02, 0.01};
  scene.eps_schedule = {0.1, 0.05, 0.02};
  if (j.contains("schedules")) {
    const json& s = j["schedules"];
    if (s.contains("delta")) scene.delta_schedule = number_list(s["delta"], "schedules.delta");
    if (s.contains("eps")) scene.eps_schedule = number_list(s["eps"], "schedules.eps");
  }
  for (std::size_t i = 0; i + 1 < scene.delta_schedule.size(); ++i) {
    if (!(scene.delta_schedule[i + 1] < scene.delta_schedule[i])) {
      fail("schedules.delta", "must be strictly decreasing");
    }
  }
  for (std::size_t i = 0; i + 1 < scene.eps_schedule.size(); ++i) {
    if (!(scene.eps_schedule[i + 1] < scene.eps_schedule[i])) {
      fail("schedules.eps", "must be strictly decreasing");
    }
  }

  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (s.contains("cover_exact_candidates")) scene.solver.cover_exact_candidates = s["cover_exact_candidates"].get<int>();
    if (s.contains("cover_exact_targets")) scene.solver.cover_exact_targets = s["cover_exact_targets"].get<int>();
    if (s.contains("pack_exact_threshold")) scene.solver.pack_exact_threshold = s["pack_exact_threshold"].get<int>();
    if (s.contains("probe_exact_threshold")) scene.solver.probe_exact_threshold = s["probe_exact_threshold"].get<int>();
  }

  if (j.contains("extras")) {
    const json& e = j["extras"];
    if (!e.is_object()) fail("extras", "expected an object of numbers");
    for (auto it = e.begin(); it != e.end(); ++it) {
      scene.extras.emplace_back(it.key(), number(it.value(), "extras." + it.key()));
    }
  }
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SceneError("scene: cannot open file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scene(ss.str());
}

}  // namespace ballrecon
