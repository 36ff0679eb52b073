#pragma once

#include "ballrecon/besicovitch.hpp"
#include "ballrecon/packing.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ballrecon {

struct SceneError : std::runtime_error {
  explicit SceneError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverConfig {
  int cover_exact_candidates = 20;
  int cover_exact_targets = 12;
  int pack_exact_threshold = 40;
  int probe_exact_threshold = 24;
};

// One structured scene file drives every scenario: space, measure, reference,
// premeasure, target/open-set specs, schedules, solver knobs and the seed.
struct Scene {
  MetricSpace space;
  SignedMeasure measure;
  ReferenceMeasure reference;
  PremeasureModel premeasure;
  double premeasure_alpha = 1.0;  // constants claimed for the two-sided bound
  double premeasure_C = 1.0;

  std::vector<Point> target_points;
  std::optional<OpenSet> open_set;
  CompactTarget compact;

  std::vector<double> delta_schedule;
  std::vector<double> eps_schedule;
  SolverConfig solver;
  std::uint64_t seed = 0;

  // Scenario-specific extras (counts, probe sizes); missing keys fall back to
  // the given default.
  double extra(const std::string& key, double fallback) const;
  std::vector<std::pair<std::string, double>> extras;
};

Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& json_text);

}  // namespace ballrecon
