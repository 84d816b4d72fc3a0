#pragma once

#include <string>
#include <vector>

#include "topmeas/json_io.hpp"

namespace topmeas {

/// One expectation inside a scenario. basis says where the expected value
/// comes from: "closed_form" (an exact identity), "oracle" (computed by an
/// independent reference route), or "reference" (a known target constant,
/// which must carry a nonempty note).
struct ScenarioCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string basis;
  std::string note;
};

struct ScenarioReport {
  std::string id;
  bool pass = true;
  std::vector<ScenarioCheck> checks;
  json to_json() const;
};

struct Scenario {
  std::string id;
  int grid_n = 4;
  uint64_t seed = 0;
  json params;  // per-scenario knobs; builtins fill defaults
};

json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

/// The fixed built-in corpus, in canonical order.
std::vector<std::string> list_builtin();
Scenario builtin_scenario(const std::string& id);
bool is_builtin(const std::string& id);

ScenarioReport run_scenario(const Scenario& s);

/// Sequence and config descriptions for the converge subcommand:
/// {"type": "mixing"|"shrinking_indicator"|"alternating"|"constant", ...}.
MeasureSequence sequence_from_json(const json& j);
TestConfig convergence_config_from_json(const json& j, const MeasureSequence& s,
                                        uint64_t seed);

}  // namespace topmeas
