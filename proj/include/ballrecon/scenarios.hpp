#pragma once

#include "ballrecon/report.hpp"
#include "ballrecon/scene.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ballrecon {

struct ScenarioOptions {
  std::string out_dir = ".";
  int threads = 1;
  std::optional<int> exact_threshold;  // overrides the scene's solver knobs
  std::optional<std::uint64_t> seed;
};

const std::vector<std::string>& scenario_names();
bool is_scenario(const std::string& name);

// Executes the named pipeline against the scene; the report carries one
// verdict per checked inequality plus the per-step CSV tables.
RunReport run_scenario(const std::string& name, const Scene& scene, const ScenarioOptions& opts);

}  // namespace ballrecon
