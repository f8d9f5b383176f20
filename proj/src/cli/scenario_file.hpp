#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <weyl/scenario.hpp>

namespace weyl::cli {

// Scenario selection shared by every command: a built-in name or a JSON
// file path, plus parameter overrides and an optional seed.
struct ScenarioRequest {
  std::string source;  // built-in name or file path
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;
};

struct ResolvedScenario {
  Scenario scenario;
  bool builtin = false;
  std::map<std::string, std::string> overrides;
};

// Parses a scenario document.  Structural problems (bad JSON, wrong shapes,
// unknown names) throw ParseError/Error; sampled preflight failures throw
// PreflightError.
Scenario load_scenario_file(const std::string& path,
                            const std::map<std::string, std::string>& overrides);

// Built-in name or file path, with overrides and seed applied and the
// preflight run.
ResolvedScenario resolve_scenario(const ScenarioRequest& request);

}  // namespace weyl::cli
