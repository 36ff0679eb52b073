#include <doctest.h>

#include "ballrecon/report.hpp"
#include "ballrecon/scenarios.hpp"
#include "ballrecon/scene.hpp"

#include <cstdlib>
#include <random>
#include <sstream>

using namespace ballrecon;

namespace {

// Minimal RFC-4180 reader used as the reparse oracle.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
    } else {
      field += c;
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("format_double round-trips bit-exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double x = unif(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("csv rendering: header-only tables and quoting") {
  CsvTable empty;
  empty.name = "t";
  empty.columns = {"a", "b"};
  CHECK(csv_render(empty) == "a,b\n");

  CsvTable t;
  t.name = "t";
  t.columns = {"x", "note"};
  t.rows.push_back({"1.5", "plain"});
  t.rows.push_back({"2.5", "with,comma"});
  t.rows.push_back({"3.5", "say \"hi\""});
  const std::string text = csv_render(t);
  CHECK(text.find("\"with,comma\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);

  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 4);
  CHECK(rows[2][1] == "with,comma");
  CHECK(rows[3][1] == "say \"hi\"");
}

TEST_CASE("emitted numeric CSV reparses bit-exactly") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(-100.0, 100.0);
  CsvTable t;
  t.name = "t";
  t.columns = {"v"};
  std::vector<double> values;
  for (int i = 0; i < 500; ++i) {
    values.push_back(unif(rng));
    t.rows.push_back({format_double(values.back())});
  }
  const auto rows = parse_csv(csv_render(t));
  REQUIRE(rows.size() == values.size() + 1);
  for (size_t i = 0; i < values.size(); ++i) {
    CHECK(std::strtod(rows[i + 1][0].c_str(), nullptr) == values[i]);
  }
}

TEST_CASE("make_verdict relations") {
  CHECK(make_verdict("a", 1.0, "<=", 2.0).pass);
  CHECK(!make_verdict("a", 3.0, "<=", 2.0).pass);
  CHECK(make_verdict("a", 3.0, ">=", 2.0).pass);
  CHECK(make_verdict("a", 2.0, "==", 2.0 + 1e-12, 1e-9).pass);
  CHECK(!make_verdict("a", 2.0, "==", 2.1, 1e-9).pass);
  CHECK_THROWS_AS(make_verdict("a", 1.0, "<", 2.0), std::invalid_argument);
  const Verdict v = make_verdict("named", 1.0, "<=", 2.0);
  CHECK(v.inequality.find("<=") != std::string::npos);
}

TEST_CASE("scene parsing: happy path") {
  const std::string text = R"({
    "space": {"kind": "euclidean", "dim": 2},
    "measure": {
      "atoms": [{"position": [0.25, -0.5], "weight": 2.0}],
      "chains": [{"vertices": [[0,0],[1,0],[1,1]], "density": -0.5}]
    },
    "reference": {"kind": "lebesgue", "alpha": 0.5},
    "premeasure": {"kind": "kernel", "omega": [1.5, 1.0, 0.5], "alpha": 0.5, "C": 3.0},
    "sets": {
      "target": [[0.25, -0.5]],
      "open_set": {"kind": "boxes", "lo": [[-1,-1]], "hi": [[2,2]]}
    },
    "schedules": {"delta": [0.1, 0.05], "eps": [0.2, 0.1]},
    "solver": {"pack_exact_threshold": 50},
    "extras": {"n_instances": 3},
    "seed": 9
  })";
  const Scene scene = parse_scene(text);
  CHECK(scene.space.dim() == 2);
  CHECK(scene.measure.atoms.size() == 1);
  CHECK(scene.measure.chains.size() == 1);
  CHECK(scene.measure.chains[0].vertices.size() == 3);
  CHECK(scene.reference.gamma == doctest::Approx(4.0));
  CHECK(scene.premeasure.kind == PremeasureKind::Kernel);
  CHECK(scene.premeasure_C == 3.0);
  CHECK(scene.target_points.size() == 1);
  CHECK(scene.open_set.has_value());
  CHECK(scene.delta_schedule == std::vector<double>{0.1, 0.05});
  CHECK(scene.solver.pack_exact_threshold == 50);
  CHECK(scene.extra("n_instances", 0) == 3);
  CHECK(scene.extra("missing", 42) == 42);
  CHECK(scene.seed == 9);
}

TEST_CASE("scene parsing: star graph and finite metric points") {
  const std::string star = R"({
    "space": {"kind": "star_graph", "rays": 4, "max_arc": 5.0},
    "measure": {"atoms": [{"position": {"ray": 2, "arc": 1.5}, "weight": 1.0}]},
    "seed": 1
  })";
  const Scene s1 = parse_scene(star);
  CHECK(s1.space.kind() == SpaceKind::StarGraph);
  CHECK(s1.measure.atoms[0].position.ray == 2);

  const std::string finite = R"({
    "space": {"kind": "finite_metric", "matrix": [[0,1],[1,0]]},
    "measure": {"atoms": [{"position": 1, "weight": 1.0}]},
    "seed": 1
  })";
  const Scene s2 = parse_scene(finite);
  CHECK(s2.space.kind() == SpaceKind::FiniteMetric);
  CHECK(s2.measure.atoms[0].position.node == 1);
}

TEST_CASE("scene parsing: diagnostics carry the field path") {
  CHECK_THROWS_AS(parse_scene("{"), SceneError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"measure": {}, "seed": 1})"),
                       doctest::Contains("missing key 'space'"), SceneError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"space": {"kind": "euclidean"}, "measure": {}, "seed": 1})"),
                       doctest::Contains("space"), SceneError);
  CHECK_THROWS_WITH_AS(
      parse_scene(R"({"space": {"kind": "euclidean", "dim": 2}, "measure": {}})"),
      doctest::Contains("seed"), SceneError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"space": {"kind": "euclidean", "dim": 2}, "measure": {"atoms": [{"position": [1], "weight": 1}]}, "seed": 1})"),
      doctest::Contains("dimension"), SceneError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"space": {"kind": "euclidean", "dim": 2}, "measure": {}, "schedules": {"delta": [0.1, 0.2]}, "seed": 1})"),
      doctest::Contains("decreasing"), SceneError);
}

TEST_CASE("unknown scenario is rejected") {
  const Scene scene = parse_scene(
      R"({"space": {"kind": "euclidean", "dim": 2}, "measure": {"atoms": [{"position": [0,0], "weight": 1}]}, "seed": 1})");
  ScenarioOptions opts;
  CHECK_THROWS_AS(run_scenario("no-such-scenario", scene, opts), SceneError);
  CHECK(is_scenario("dirac-loss"));
  CHECK(!is_scenario("no-such-scenario"));
  CHECK(scenario_names().size() == 11);
}
