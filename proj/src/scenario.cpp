#include "weyl/scenario.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "weyl/error.hpp"

namespace weyl {

ConnectionField Scenario::connection() const {
  if (psi) return weyl_connection(h, *psi);
  return levi_civita(h);
}

ConnectionField SpatialSlice::connection() const { return levi_civita(metric); }

namespace {

ScalarExpr dlog(const ScalarExpr& f, int coord) {
  return f.derivative(coord) / f;
}

std::vector<ScalarExpr> zero_upper(const SymbolsPtr& syms, int n) {
  return std::vector<ScalarExpr>(static_cast<std::size_t>(n * (n + 1) / 2),
                                 ScalarExpr::number(0.0, syms));
}

int upper_slot(int n, int i, int j) { return i * n - i * (i - 1) / 2 + (j - i); }

void require_nonzero(double v, const char* which) {
  if (v == 0.0)
    throw Error(std::string("parameter ") + which + " must be non-zero");
}

// Sampled positivity / invariance checks shared by the RW builders.
void check_scalar_positive(const ScalarExpr& f, const SampleBox& box,
                           const Bindings& binds, std::uint64_t seed,
                           const char* what) {
  UniformSampler rng(seed);
  for (int i = 0; i < 100; ++i) {
    const Point pt = sample_point(box, rng);
    if (!(f.eval(pt, binds) > 0.0))
      throw PreflightError(std::string(what) +
                           " must be positive on the sample box");
  }
}

void check_scalar_invariant(const ScalarExpr& f,
                            const std::vector<DeckMap>& gens,
                            const SampleBox& box, const Bindings& binds,
                            std::uint64_t seed, const char* what) {
  UniformSampler rng(seed);
  for (int i = 0; i < 100; ++i) {
    const Point pt = sample_point(box, rng);
    for (const DeckMap& g : gens) {
      const double r = deck_invariance_residual(f, g, pt, binds);
      if (r > 1e-10)
        throw PreflightError(std::string(what) +
                             " is not invariant under the identifications "
                             "(residual " +
                             std::to_string(r) + ")");
    }
  }
}

Scenario build_rw(const RwParams& params, bool klein) {
  require_nonzero(params.p, "p");
  require_nonzero(params.q, "q");
  require_nonzero(params.r, "r");

  auto syms = Symbols::make({"t", "x", "y", "z"}, {"a", "b", "p", "q", "r"});
  const ScalarExpr S = ScalarExpr::parse(params.S, syms);
  const ScalarExpr alpha = ScalarExpr::parse(params.alpha, syms);
  const ScalarExpr a_sym = ScalarExpr::parameter(0, syms);
  const ScalarExpr b_sym = ScalarExpr::parameter(1, syms);

  // -dt^2 + S(t)^2 (dx^2 + dy^2 + dz^2)
  std::vector<ScalarExpr> upper = zero_upper(syms, 4);
  const ScalarExpr S2 = S * S;
  upper[static_cast<std::size_t>(upper_slot(4, 0, 0))] =
      ScalarExpr::number(-1.0, syms);
  for (int i = 1; i < 4; ++i)
    upper[static_cast<std::size_t>(upper_slot(4, i, i))] = S2;
  MetricField h(syms, std::move(upper), Signature{1, 3});

  // psi = -a dx - b dy + dlog alpha
  std::vector<ScalarExpr> psi_comps{
      dlog(alpha, 0), -a_sym + dlog(alpha, 1), -b_sym + dlog(alpha, 2),
      dlog(alpha, 3)};
  OneFormField psi(syms, std::move(psi_comps));

  QuotientSpec quotient;
  quotient.dim = 4;
  quotient.coords = syms->coords;
  quotient.basepoint = Vec::Zero(4);
  Vec tx = Vec::Zero(4), ty = Vec::Zero(4), tz = Vec::Zero(4);
  tx[1] = params.p;
  ty[2] = params.q;
  tz[3] = params.r;
  Mat ylin = Mat::Identity(4, 4);
  if (klein) ylin(3, 3) = -1.0;
  quotient.generators = {DeckMap::translation(tx), DeckMap(ylin, ty),
                         DeckMap::translation(tz)};

  Scenario scen{.name = klein ? "rw-klein" : "rw-torus",
                .quotient = std::move(quotient),
                .h = std::move(h),
                .psi = std::move(psi)};
  scen.defaults = Bindings{{"a", params.a},
                           {"b", params.b},
                           {"p", params.p},
                           {"q", params.q},
                           {"r", params.r}};
  scen.box = {{-1.0, 1.0},
              {std::min(0.0, params.p), std::max(0.0, params.p)},
              {std::min(0.0, params.q), std::max(0.0, params.q)},
              {std::min(0.0, params.r), std::max(0.0, params.r)}};
  scen.seed = 1729;

  const double p = params.p, q = params.q;
  scen.expected_periods = [p, q](const Bindings& b) {
    Vec v(3);
    v[0] = -b.at("a") * p;
    v[1] = -b.at("b") * q;
    v[2] = 0.0;
    return v;
  };
  scen.expected_holonomy = {
      {true, [p](const Bindings& b) { return std::exp(b.at("a") * p); }},
      {true, [q](const Bindings& b) { return std::exp(b.at("b") * q); }},
      {true, [](const Bindings&) { return 1.0; }}};

  check_scalar_positive(S, scen.box, scen.defaults, scen.seed + 1,
                        "scale factor S");
  check_scalar_positive(alpha, scen.box, scen.defaults, scen.seed + 2,
                        "alpha");
  check_scalar_invariant(alpha, scen.quotient.generators, scen.box,
                         scen.defaults, scen.seed + 3, "alpha");
  run_preflight(scen, scen.defaults);
  return scen;
}

}  // namespace

Scenario build_rw_klein(const RwParams& params) { return build_rw(params, true); }
Scenario build_rw_torus(const RwParams& params) { return build_rw(params, false); }

Scenario build_deg_cylinder() {
  auto syms = Symbols::make({"t", "theta", "x", "y"}, {});
  const ScalarExpr theta = ScalarExpr::coordinate(1, syms);
  const ScalarExpr one = ScalarExpr::number(1.0, syms);

  std::vector<ScalarExpr> upper = zero_upper(syms, 4);
  upper[static_cast<std::size_t>(upper_slot(4, 0, 0))] = -cos(theta);
  upper[static_cast<std::size_t>(upper_slot(4, 0, 1))] = sin(theta);
  upper[static_cast<std::size_t>(upper_slot(4, 1, 1))] = cos(theta);
  upper[static_cast<std::size_t>(upper_slot(4, 2, 2))] = one;
  upper[static_cast<std::size_t>(upper_slot(4, 3, 3))] = one;
  MetricField h(syms, std::move(upper), Signature{1, 3});

  QuotientSpec quotient;
  quotient.dim = 4;
  quotient.coords = syms->coords;
  quotient.basepoint = Vec::Zero(4);
  Vec shift = Vec::Zero(4);
  shift[1] = std::numbers::pi;
  quotient.generators = {DeckMap::translation(shift)};

  Scenario scen{.name = "deg-cylinder",
                .quotient = std::move(quotient),
                .h = std::move(h)};
  scen.h_projects_to_quotient = false;
  scen.box = {{-1.0, 1.0}, {0.0, std::numbers::pi}, {-1.0, 1.0}, {-1.0, 1.0}};
  scen.seed = 2718;
  scen.expected_fail_checks = {"h-deck-invariance"};
  scen.expected_holonomy = {{false, nullptr}};

  // Levi-Civita table of the cos/sin block; the (x, y) block is flat.
  auto sc = [](const Point& pt) {
    return std::sin(pt[1]) * std::cos(pt[1]);
  };
  auto s2 = [](const Point& pt) {
    const double s = std::sin(pt[1]);
    return s * s;
  };
  const std::string note = "closed-form Levi-Civita of the cos/sin block";
  scen.golden.entries = {
      {0, 0, 0, [s2](const Point& pt, const Bindings&) { return -0.5 * s2(pt); }, note},
      {0, 0, 1, [sc](const Point& pt, const Bindings&) { return -0.5 * sc(pt); }, note},
      {0, 1, 1,
       [s2](const Point& pt, const Bindings&) {
         const double c = std::cos(pt[1]);
         return -(c * c + 0.5 * s2(pt));
       },
       note},
      {1, 0, 0, [sc](const Point& pt, const Bindings&) { return -0.5 * sc(pt); }, note},
      {1, 0, 1, [s2](const Point& pt, const Bindings&) { return 0.5 * s2(pt); }, note},
      {1, 1, 1, [sc](const Point& pt, const Bindings&) { return 0.5 * sc(pt); }, note},
  };
  scen.golden.others_vanish = true;

  run_preflight(scen, scen.defaults);
  return scen;
}

SpatialSlice rw_spatial_slice(const RwParams& params, double t0) {
  // S(t0) is a constant on the slice; it scales the metric without touching
  // the connection, but is kept for fidelity.
  auto syms4 = Symbols::make({"t", "x", "y", "z"}, {"a", "b", "p", "q", "r"});
  const Bindings binds{{"a", params.a},
                       {"b", params.b},
                       {"p", params.p},
                       {"q", params.q},
                       {"r", params.r}};
  Point pt0 = Vec::Zero(4);
  pt0[0] = t0;
  const double S0 = ScalarExpr::parse(params.S, syms4).eval(pt0, binds);

  auto syms = Symbols::make({"x", "y", "z"}, {"a", "b"});
  const ScalarExpr a_sym = ScalarExpr::parameter(0, syms);
  const ScalarExpr b_sym = ScalarExpr::parameter(1, syms);
  const ScalarExpr x = ScalarExpr::coordinate(0, syms);
  const ScalarExpr y = ScalarExpr::coordinate(1, syms);
  const ScalarExpr conf =
      ScalarExpr::number(S0 * S0, syms) * exp(a_sym * x + b_sym * y);

  std::vector<ScalarExpr> upper = zero_upper(syms, 3);
  for (int i = 0; i < 3; ++i)
    upper[static_cast<std::size_t>(upper_slot(3, i, i))] = conf;

  SpatialSlice slice{
      .metric = MetricField(syms, std::move(upper), Signature{0, 3})};

  Vec tx = Vec::Zero(3), ty = Vec::Zero(3), tz = Vec::Zero(3);
  tx[0] = params.p;
  ty[1] = params.q;
  tz[2] = params.r;
  Mat ylin = Mat::Identity(3, 3);
  ylin(2, 2) = -1.0;
  slice.generators = {DeckMap::translation(tx), DeckMap(ylin, ty),
                      DeckMap::translation(tz)};
  slice.box = {{std::min(0.0, params.p), std::max(0.0, params.p)},
               {std::min(0.0, params.q), std::max(0.0, params.q)},
               {std::min(0.0, params.r), std::max(0.0, params.r)}};

  // Gamma^k_ij = (f_i d_kj + f_j d_ki - f_k d_ij)/2 for the conformal
  // factor exp(f), f = a x + b y.
  const std::string note = "half-gradient rule for exp(a*x+b*y) times flat";
  auto half = [](const char* name) {
    return [name](const Point&, const Bindings& b) {
      return 0.5 * b.at(name);
    };
  };
  auto neg_half = [](const char* name) {
    return [name](const Point&, const Bindings& b) {
      return -0.5 * b.at(name);
    };
  };
  slice.golden.entries = {
      {0, 0, 0, half("a"), note},      // x_xx = a/2
      {1, 0, 1, half("a"), note},      // y_xy = a/2
      {2, 0, 2, half("a"), note},      // z_xz = a/2
      {0, 0, 1, half("b"), note},      // x_xy = b/2
      {1, 1, 1, half("b"), note},      // y_yy = b/2
      {2, 1, 2, half("b"), note},      // z_yz = b/2
      {0, 1, 1, neg_half("a"), note},  // x_yy = -a/2
      {0, 2, 2, neg_half("a"), note},  // x_zz = -a/2
      {1, 0, 0, neg_half("b"), note},  // y_xx = -b/2
      {1, 2, 2, neg_half("b"), note},  // y_zz = -b/2
  };
  slice.golden.others_vanish = true;
  return slice;
}

MetricField deg_parallel_family(const Scenario& deg, double a, double b1,
                                double b2, double b3) {
  const SymbolsPtr& syms = deg.h.symbols();
  auto num = [&](double v) { return ScalarExpr::number(v, syms); };

  std::vector<ScalarExpr> upper = zero_upper(syms, 4);
  upper[static_cast<std::size_t>(upper_slot(4, 0, 0))] =
      num(a) * deg.h.component(0, 0);
  upper[static_cast<std::size_t>(upper_slot(4, 0, 1))] =
      num(a) * deg.h.component(0, 1);
  upper[static_cast<std::size_t>(upper_slot(4, 1, 1))] =
      num(a) * deg.h.component(1, 1);
  upper[static_cast<std::size_t>(upper_slot(4, 2, 2))] = num(b1);
  upper[static_cast<std::size_t>(upper_slot(4, 2, 3))] = num(b2);
  upper[static_cast<std::size_t>(upper_slot(4, 3, 3))] = num(b3);
  return MetricField(syms, std::move(upper), Signature{1, 3});
}

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = {"rw-klein", "rw-torus",
                                                 "deg-cylinder"};
  return names;
}

bool is_builtin_scenario(const std::string& name) {
  for (const auto& n : builtin_scenario_names())
    if (n == name) return true;
  return false;
}

RwParams rw_params_from_overrides(
    const std::map<std::string, std::string>& overrides) {
  RwParams params;
  for (const auto& [key, value] : overrides) {
    try {
      if (key == "p") params.p = std::stod(value);
      else if (key == "q") params.q = std::stod(value);
      else if (key == "r") params.r = std::stod(value);
      else if (key == "a") params.a = std::stod(value);
      else if (key == "b") params.b = std::stod(value);
      else if (key == "S") params.S = value;
      else if (key == "alpha") params.alpha = value;
      else throw Error("unknown parameter '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw Error("parameter '" + key + "' needs a numeric value");
    }
  }
  return params;
}

Scenario build_builtin(const std::string& name,
                       const std::map<std::string, std::string>& overrides) {
  if (name == "rw-klein") return build_rw_klein(rw_params_from_overrides(overrides));
  if (name == "rw-torus") return build_rw_torus(rw_params_from_overrides(overrides));
  if (name == "deg-cylinder") {
    if (!overrides.empty())
      throw Error("deg-cylinder has no parameters to override");
    return build_deg_cylinder();
  }
  throw Error("unknown built-in scenario '" + name + "'");
}

void run_preflight(const Scenario& scen, const Bindings& binds,
                   const PreflightOptions& opt) {
  UniformSampler rng(scen.seed);
  for (int i = 0; i < opt.points; ++i) {
    const Point pt = sample_point(scen.box, rng);

    try {
      metric_at(scen.h, pt, binds);
    } catch (const Error& e) {
      throw PreflightError("metric check failed at sampled point " +
                           std::to_string(i) + ": " + e.what());
    }

    if (scen.psi) {
      const double closed = max_abs(closedness_residual(*scen.psi, pt, binds));
      if (closed > opt.closedness_tol)
        throw PreflightError("psi-closedness failed at sampled point " +
                             std::to_string(i) + " (residual " +
                             std::to_string(closed) + ")");
    }

    for (std::size_t g = 0; g < scen.quotient.generators.size(); ++g) {
      const DeckMap& gen = scen.quotient.generators[g];
      if (scen.h_projects_to_quotient) {
        const double res = deck_invariance_residual(scen.h, gen, pt, binds);
        if (res > opt.invariance_tol)
          throw PreflightError("h-deck-invariance failed for generator " +
                               std::to_string(g) + " at sampled point " +
                               std::to_string(i) + " (residual " +
                               std::to_string(res) + ")");
      }
      if (scen.psi) {
        const double res = deck_invariance_residual(*scen.psi, gen, pt, binds);
        if (res > opt.invariance_tol)
          throw PreflightError("psi-deck-invariance failed for generator " +
                               std::to_string(g) + " at sampled point " +
                               std::to_string(i) + " (residual " +
                               std::to_string(res) + ")");
      }
    }
  }
}

}  // namespace weyl
