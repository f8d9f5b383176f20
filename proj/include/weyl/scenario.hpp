#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weyl/connection.hpp"
#include "weyl/fields.hpp"
#include "weyl/sampling.hpp"

namespace weyl {

// One expected Christoffel entry (lower indices i <= j; the mirror is
// implied). `note` records where the value comes from.
struct GoldenChristoffel {
  int k = 0, i = 0, j = 0;
  std::function<double(const Point&, const Bindings&)> expected;
  std::string note;
};

struct GoldenTable {
  std::vector<GoldenChristoffel> entries;
  // Entries not listed are expected to vanish.
  bool others_vanish = true;
};

// Expected transport outcome around one generator loop.
struct ExpectedHolonomy {
  bool positive_multiple = true;
  // exp(-period) as a function of the bindings; null when the transported
  // form is not expected to be a multiple at all.
  std::function<double(const Bindings&)> scale;
};

// A fully wired example: quotient, fields, defaults, sampling domain, and
// the expected values its tests and reports check against.
struct Scenario {
  std::string name;
  QuotientSpec quotient;
  MetricField h;
  // False when h is a cover metric that deliberately fails phi* h = h (the
  // degenerate example); verify treats that failure as expected.
  bool h_projects_to_quotient = true;
  std::optional<OneFormField> psi;
  Bindings defaults;
  SampleBox box;
  std::uint64_t seed = 0;

  GoldenTable golden;  // for the cover connection; may be empty
  std::function<Vec(const Bindings&)> expected_periods;  // null when untabled
  std::vector<ExpectedHolonomy> expected_holonomy;       // per generator
  std::vector<std::string> expected_fail_checks;

  ConnectionField connection() const;
};

// Parameters of the modified Robertson-Walker examples.
struct RwParams {
  double p = 1.0, q = 1.0, r = 1.0;
  double a = 1.0, b = 2.0;
  std::string S = "1";      // expression in t
  std::string alpha = "1";  // positive, deck-invariant expression
};

// R x S1 x K: identifications x ~ x+p, (y, z) ~ (y+q, -z), z ~ z+r; metric
// -dt^2 + S(t)^2 (dx^2+dy^2+dz^2); psi = -a dx - b dy + dlog alpha.
Scenario build_rw_klein(const RwParams& params = {});

// Same with a 3-torus spatial section: the y generator has no z flip.
Scenario build_rw_torus(const RwParams& params = {});

// Cover metric g1 + g2 with g1 the cos/sin block in (t, theta), quotient by
// theta ~ theta + pi. No (h, psi) pair exists; transport around the theta
// loop flips the sign of the g1 block.
Scenario build_deg_cylinder();

// The t = t0 spacelike-slice connection of the RW examples:
// levi_civita( exp(a x + b y) S(t0)^2 delta_3 ), with its golden table.
struct SpatialSlice {
  MetricField metric;
  std::vector<DeckMap> generators;
  SampleBox box;
  GoldenTable golden;
  ConnectionField connection() const;
};

SpatialSlice rw_spatial_slice(const RwParams& params, double t0 = 0.0);

// The four-parameter family of parallel symmetric forms admitted by the
// degenerate connection: a g1 + b1 dx^2 + 2 b2 dx dy + b3 dy^2.
MetricField deg_parallel_family(const Scenario& deg, double a, double b1,
                                double b2, double b3);

// Built-in registry. Overrides: p, q, r, a, b numeric; S, alpha expression
// text. deg-cylinder accepts no overrides.
const std::vector<std::string>& builtin_scenario_names();
bool is_builtin_scenario(const std::string& name);
Scenario build_builtin(const std::string& name,
                       const std::map<std::string, std::string>& overrides = {});
RwParams rw_params_from_overrides(
    const std::map<std::string, std::string>& overrides);

// Sampled checks every scenario must pass before use: psi closedness, deck
// invariance of h (unless flagged) and psi, invertibility and declared
// signature of h. Throws PreflightError naming the failing check and point.
struct PreflightOptions {
  int points = 100;
  double closedness_tol = 1e-10;
  double invariance_tol = 1e-10;
};
void run_preflight(const Scenario& scen, const Bindings& binds,
                   const PreflightOptions& opt = {});

}  // namespace weyl
