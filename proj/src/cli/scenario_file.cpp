#include "cli/scenario_file.hpp"

#include <fstream>
#include <json.hpp>

#include <weyl/error.hpp>

namespace weyl::cli {

namespace {

using Json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw ParseError("scenario file: " + what);
}

template <class T>
T field(const Json& doc, const char* key) {
  if (!doc.contains(key))
    schema_error(std::string("missing key '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    schema_error(std::string("key '") + key + "' has the wrong type");
  }
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

}  // namespace

Scenario load_scenario_file(
    const std::string& path,
    const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("scenario file '" + path + "': " + e.what());
  }

  const int dim = field<int>(doc, "dimension");
  auto coords = field<std::vector<std::string>>(doc, "coordinates");
  if (static_cast<int>(coords.size()) != dim)
    schema_error("coordinates must list exactly 'dimension' names");

  std::map<std::string, double> parameters;
  if (doc.contains("parameters"))
    parameters = field<std::map<std::string, double>>(doc, "parameters");
  std::vector<std::string> param_names;
  for (const auto& [name, value] : parameters) param_names.push_back(name);

  const auto sig_pair = field<std::vector<int>>(doc, "signature");
  if (sig_pair.size() != 2 || sig_pair[0] + sig_pair[1] != dim)
    schema_error("signature must be [n_minus, n_plus] summing to dimension");

  auto symbols = Symbols::make(coords, param_names);
  const auto metric_rows =
      field<std::vector<std::vector<std::string>>>(doc, "metric");
  MetricField h = MetricField::from_strings(
      symbols, metric_rows, Signature{sig_pair[0], sig_pair[1]});

  std::optional<OneFormField> psi;
  if (doc.contains("psi") && !doc.at("psi").is_null()) {
    auto comps = field<std::vector<std::string>>(doc, "psi");
    if (static_cast<int>(comps.size()) != dim)
      schema_error("psi must have one component per coordinate");
    psi = OneFormField::from_strings(symbols, comps);
  }

  QuotientSpec quotient;
  quotient.dim = dim;
  quotient.coords = coords;
  quotient.basepoint = to_vec(field<std::vector<double>>(doc, "basepoint"));
  if (doc.contains("generators"))
    for (const auto& gen : doc.at("generators")) {
      const auto rows = field<std::vector<std::vector<double>>>(gen, "matrix");
      if (static_cast<int>(rows.size()) != dim)
        schema_error("generator matrix must be dimension x dimension");
      Mat a(dim, dim);
      for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != dim)
          schema_error("generator matrix must be dimension x dimension");
        for (int j = 0; j < dim; ++j)
          a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      const Vec b = to_vec(field<std::vector<double>>(gen, "translation"));
      if (b.size() != dim) schema_error("generator translation length");
      quotient.generators.emplace_back(a, b);
    }
  quotient.validate();

  Scenario scen{.name = doc.value("name", path),
                .quotient = std::move(quotient),
                .h = std::move(h),
                .psi = std::move(psi)};
  scen.h_projects_to_quotient = doc.value("projects_to_quotient", true);
  if (!scen.h_projects_to_quotient)
    scen.expected_fail_checks = {"h-deck-invariance"};

  for (const auto& [name, value] : parameters) scen.defaults.set(name, value);
  for (const auto& [name, value] : overrides) {
    if (!scen.defaults.find(name))
      throw Error("override for undeclared parameter '" + name + "'");
    try {
      scen.defaults.set(name, std::stod(value));
    } catch (const std::exception&) {
      throw Error("parameter '" + name + "' needs a numeric value");
    }
  }

  const auto box = field<std::vector<std::vector<double>>>(doc, "sample_box");
  if (static_cast<int>(box.size()) != dim)
    schema_error("sample_box needs one [lo, hi] pair per coordinate");
  for (const auto& pair : box) {
    if (pair.size() != 2 || !(pair[0] < pair[1]))
      schema_error("sample_box entries must be [lo, hi] with lo < hi");
    scen.box.emplace_back(pair[0], pair[1]);
  }
  scen.seed = doc.value("seed", std::uint64_t{0});

  run_preflight(scen, scen.defaults);
  return scen;
}

ResolvedScenario resolve_scenario(const ScenarioRequest& request) {
  ResolvedScenario out{
      .scenario = is_builtin_scenario(request.source)
                      ? build_builtin(request.source, request.params)
                      : load_scenario_file(request.source, request.params),
      .builtin = is_builtin_scenario(request.source),
      .overrides = request.params};
  if (request.seed) out.scenario.seed = *request.seed;
  return out;
}

}  // namespace weyl::cli
