#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/scenario_file.hpp"

namespace weyl::cli {

using Json = nlohmann::ordered_json;

// Machine-readable report plus the process exit code: 0 all checks passed,
// 1 a numeric check failed. Input problems throw before a result exists.
struct CommandResult {
  Json report;
  int exit_code = 0;
};

struct TransportRequest {
  // either a generator index or a word of generator indices
  std::vector<int> word;
  std::string object = "metric";  // "metric" or "vector"
  std::vector<double> v0;         // for vector transport
};

CommandResult cmd_verify(const ScenarioRequest& scen, int points = 100);
CommandResult cmd_classify(const ScenarioRequest& scen);
CommandResult cmd_christoffel(const ScenarioRequest& scen,
                              const std::vector<double>& point, bool slice);
CommandResult cmd_transport(const ScenarioRequest& scen,
                            const TransportRequest& request);
CommandResult cmd_geodesic(const ScenarioRequest& scen,
                           const std::vector<double>& x0,
                           const std::vector<double>& v0, double s_max,
                           const std::string& csv_path);
CommandResult cmd_curvature(const ScenarioRequest& scen,
                            const std::vector<double>& point, double gauge_mu,
                            bool rescale_check);
CommandResult cmd_report(const ScenarioRequest& scen, int points = 100);

// Human-readable rendering of any report document.
std::string render_text(const Json& report);

}  // namespace weyl::cli
