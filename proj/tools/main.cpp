#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <weyl/error.hpp>

#include "cli/commands.hpp"

namespace {

using weyl::cli::CommandResult;
using weyl::cli::ScenarioRequest;

struct OutputOptions {
  bool json = false;
  std::string out_path;
};

std::map<std::string, std::string> parse_params(
    const std::vector<std::string>& raw) {
  std::map<std::string, std::string> out;
  for (const auto& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw weyl::Error("--param expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

void emit(const CommandResult& result, const OutputOptions& output,
          bool force_json) {
  if (!output.out_path.empty()) {
    std::ofstream f(output.out_path, std::ios::binary);
    if (!f)
      throw weyl::Error("cannot open output path '" + output.out_path + "'");
    f << result.report.dump(2) << "\n";
  }
  if (output.json || force_json)
    std::cout << result.report.dump(2) << "\n";
  else
    std::cout << weyl::cli::render_text(result.report);
}

void add_common(CLI::App* cmd, ScenarioRequest& request,
                std::vector<std::string>& raw_params, OutputOptions& output) {
  cmd->add_option("--scenario", request.source,
                  "built-in name (rw-klein, rw-torus, deg-cylinder) or a "
                  "scenario JSON path")
      ->required();
  cmd->add_option("--param", raw_params, "parameter override key=value");
  cmd->add_option("--seed", request.seed, "sampling seed override");
  cmd->add_flag("--json", output.json, "print the JSON report, not text");
  cmd->add_option("--out", output.out_path, "also write the JSON report here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "weylconn: locally metric connections from a metric and a closed "
      "one-form on quotients of R^n"};
  app.require_subcommand(1);

  ScenarioRequest request;
  std::vector<std::string> raw_params;
  OutputOptions output;

  int points = 100;
  std::vector<double> point, x0, v0;
  bool slice = false;
  std::vector<int> word;
  std::string object = "metric";
  double s_max = 1.0;
  double gauge_mu = 1.0;
  bool rescale_check = false;
  std::string csv_path;

  CLI::App* verify = app.add_subcommand(
      "verify", "closedness, invariance, and defining-equation checks");
  add_common(verify, request, raw_params, output);
  verify->add_option("--points", points, "sampled points per check");

  CLI::App* classify = app.add_subcommand(
      "classify", "periods, exactness verdict, holonomy scales, cocycles");
  add_common(classify, request, raw_params, output);

  CLI::App* christoffel =
      app.add_subcommand("christoffel", "nonzero Christoffel symbols");
  add_common(christoffel, request, raw_params, output);
  christoffel->add_option("--point", point,
                          "evaluation point (defaults to the basepoint)")
      ->delimiter(',');
  christoffel->add_flag("--slice", slice,
                        "use the spacelike-slice connection (rw scenarios)");

  CLI::App* transport = app.add_subcommand(
      "transport", "parallel transport around generator loops");
  add_common(transport, request, raw_params, output);
  transport
      ->add_option("--loop", word,
                   "generator indices applied in order, e.g. 0 or 0,1")
      ->delimiter(',')
      ->required();
  transport->add_option("--object", object, "'metric' or 'vector'");
  transport->add_option("--v0", v0, "vector components for --object vector")
      ->delimiter(',');

  CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a geodesic");
  add_common(geodesic, request, raw_params, output);
  geodesic->add_option("--x0", x0, "start point")->delimiter(',')->required();
  geodesic->add_option("--v0", v0, "start velocity")
      ->delimiter(',')
      ->required();
  geodesic->add_option("--smax", s_max, "parameter length")->required();
  geodesic->add_option("--csv", csv_path, "trajectory CSV output path");

  CLI::App* curvature =
      app.add_subcommand("curvature", "riemann, ricci, einstein at a point");
  add_common(curvature, request, raw_params, output);
  curvature->add_option("--point", point, "evaluation point")->delimiter(',');
  curvature->add_option("--gauge", gauge_mu, "gauge mu value (default 1)");
  curvature->add_flag("--rescale-check", rescale_check,
                      "verify einstein invariance under mu rescaling");

  CLI::App* report = app.add_subcommand(
      "report", "full machine-readable report (verify + classify + tables)");
  add_common(report, request, raw_params, output);
  report->add_option("--points", points, "sampled points per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // command-line usage problems are input errors
  }

  try {
    request.params = parse_params(raw_params);
    CommandResult result;
    if (*verify) result = weyl::cli::cmd_verify(request, points);
    else if (*classify) result = weyl::cli::cmd_classify(request);
    else if (*christoffel)
      result = weyl::cli::cmd_christoffel(request, point, slice);
    else if (*transport)
      result = weyl::cli::cmd_transport(request, {word, object, v0});
    else if (*geodesic)
      result = weyl::cli::cmd_geodesic(request, x0, v0, s_max, csv_path);
    else if (*curvature)
      result = weyl::cli::cmd_curvature(request, point, gauge_mu, rescale_check);
    else result = weyl::cli::cmd_report(request, points);

    emit(result, output, /*force_json=*/report->parsed());
    return result.exit_code;
  } catch (const weyl::PreflightError& e) {
    std::cerr << "numeric check failed: " << e.what() << "\n";
    return 1;
  } catch (const weyl::ConvergenceError& e) {
    std::cerr << "numeric check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
