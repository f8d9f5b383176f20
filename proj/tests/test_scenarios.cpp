#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <weyl/error.hpp>
#include <weyl/sampling.hpp>
#include <weyl/scenario.hpp>
#include <weyl/transport.hpp>

#include "support/fixtures.hpp"

using namespace weyl;
using namespace weyl::testing;

namespace {

// worst mismatch of a connection against a golden table at a point
double golden_residual(const ConnectionField& conn, const GoldenTable& table,
                       const Point& pt, const Bindings& binds) {
  const Christoffels gamma = conn.christoffel_at(pt, binds);
  const int n = conn.dim();
  std::vector<bool> listed(static_cast<std::size_t>(n * n * n), false);
  double worst = 0.0;
  for (const auto& entry : table.entries) {
    const double want = entry.expected(pt, binds);
    worst = std::max(worst,
                     std::abs(gamma.at(entry.k, entry.i, entry.j) - want));
    worst = std::max(worst,
                     std::abs(gamma.at(entry.k, entry.j, entry.i) - want));
    listed[static_cast<std::size_t>((entry.k * n + entry.i) * n + entry.j)] =
        true;
    listed[static_cast<std::size_t>((entry.k * n + entry.j) * n + entry.i)] =
        true;
  }
  if (table.others_vanish)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!listed[static_cast<std::size_t>((k * n + i) * n + j)])
            worst = std::max(worst, std::abs(gamma.at(k, i, j)));
  return worst;
}

}  // namespace

TEST_CASE("spatial slice golden table for two parameter sets") {
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{
           {1.0, 2.0}, {-0.5, 3.0}}) {
    const SpatialSlice slice = rw_spatial_slice({.a = a, .b = b});
    const ConnectionField conn = slice.connection();
    const Bindings binds{{"a", a}, {"b", b}};
    UniformSampler rng(404);
    for (int i = 0; i < 20; ++i) {
      const Point pt = sample_point(slice.box, rng);
      CHECK(golden_residual(conn, slice.golden, pt, binds) < 1e-10);
    }
  }
}

TEST_CASE("degenerate golden table at marked and random angles") {
  const Scenario deg = build_deg_cylinder();
  const ConnectionField conn = deg.connection();

  for (double theta : {0.0, std::numbers::pi / 6, std::numbers::pi / 4,
                       std::numbers::pi / 2, 1.1}) {
    const Point pt = make_point({0.3, theta, -0.2, 0.9});
    CHECK(golden_residual(conn, deg.golden, pt, deg.defaults) < 1e-10);
  }
  UniformSampler rng(405);
  for (int i = 0; i < 20; ++i) {
    const Point pt = sample_point(deg.box, rng);
    CHECK(golden_residual(conn, deg.golden, pt, deg.defaults) < 1e-10);
  }

  // spot values quoted directly
  const Christoffels at0 =
      conn.christoffel_at(make_point({0, 0, 0, 0}), deg.defaults);
  CHECK(at0.at(0, 1, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  const Christoffels at90 = conn.christoffel_at(
      make_point({0, std::numbers::pi / 2, 0, 0}), deg.defaults);
  CHECK(at90.at(0, 0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("rw periods follow (-a p, -b q, 0) including negatives") {
  const double combos[][4] = {
      {1, 2, 1, 3},     {-0.5, 3, 2, 1},   {0, 0, 1, 1},
      {2, -1, 0.5, 2},  {-1, -2, 1.5, 0.5}, {0.3, 0, 2, -1},
      {1, 1, -1, 1},    {-2, 0.5, 1, -2},  {5, -3, 0.25, 4},
      {0.1, 0.2, 3, 3}};
  for (const auto& c : combos) {
    const RwParams params{
        .p = c[2], .q = c[3], .r = 1.0, .a = c[0], .b = c[1]};
    const Scenario rw = build_rw_klein(params);
    const Vec got = periods(*rw.psi, rw.quotient, rw.defaults);
    const Vec want = rw.expected_periods(rw.defaults);
    CHECK(max_abs(Vec(got - want)) < 1e-8);

    const auto verdict = classify_exactness(got);
    if (c[0] == 0.0 && c[1] == 0.0)
      CHECK(verdict == MetricityVerdict::GloballyMetric);
    else
      CHECK(verdict == MetricityVerdict::LocallyMetricOnly);
  }
}

TEST_CASE("verdict is blind to deck-invariant exact additions") {
  for (const char* alpha :
       {"2+sin(x*6.283185307179586)",
        "2+cos(y*2.0943951023931953)",  // 2 pi / 3, invariant for q = 3
        "exp(0.2*sin(x*6.283185307179586))"}) {
    const Scenario rw = build_rw_klein(
        {.p = 1, .q = 3, .r = 1, .a = 1, .b = 2, .alpha = alpha});
    const Vec got = periods(*rw.psi, rw.quotient, rw.defaults);
    CHECK(max_abs(Vec(got - rw.expected_periods(rw.defaults))) < 1e-8);
    CHECK(classify_exactness(got) == MetricityVerdict::LocallyMetricOnly);
  }
}

TEST_CASE("builder rejects bad parameters") {
  CHECK_THROWS_AS(build_rw_klein({.p = 0.0}), Error);
  CHECK_THROWS_AS(build_rw_klein({.alpha = "2+sin(x)"}), PreflightError);
  CHECK_THROWS_AS(build_rw_klein({.alpha = "sin(x*6.283185307179586)"}),
                  PreflightError);  // not positive
  CHECK_THROWS_AS(build_rw_klein({.S = "t"}), PreflightError);  // vanishes
  // alpha depending on z is odd under the Klein flip
  CHECK_THROWS_AS(build_rw_klein({.alpha = "2+sin(z*6.283185307179586)"}),
                  PreflightError);
}

TEST_CASE("degenerate parallel family and its negative control") {
  const Scenario deg = build_deg_cylinder();
  const ConnectionField conn = deg.connection();

  UniformSampler rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.in(0.2, 2.0) * (rng.index(2) ? 1.0 : -1.0);
    const double b1 = rng.in(0.2, 2.0);
    const double b3 = rng.in(0.2, 2.0);
    const double cap = std::sqrt(b1 * b3);
    const double b2 = rng.in(-0.9, 0.9) * cap;
    const MetricField form = deg_parallel_family(deg, a, b1, b2, b3);
    UniformSampler prng(72 + trial);
    for (int i = 0; i < 100; ++i) {
      const Point pt = sample_point(deg.box, prng);
      CHECK(nabla_h_residual(conn, form, nullptr, pt, deg.defaults) < 1e-9);
    }
  }

  // adding x^2 dx^2 breaks parallelism
  const SymbolsPtr& syms = deg.h.symbols();
  const MetricField base = deg_parallel_family(deg, 1, 1, 0, 1);
  std::vector<ScalarExpr> upper;
  const ScalarExpr x2 = pow(ScalarExpr::coordinate(2, syms), 2.0);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      ScalarExpr c = base.component(i, j);
      if (i == 2 && j == 2) c = c + x2;
      upper.push_back(c);
    }
  const MetricField broken(syms, std::move(upper), Signature{1, 3});
  double worst = 0.0;
  UniformSampler prng(99);
  for (int i = 0; i < 20; ++i) {
    const Point pt = sample_point(deg.box, prng);
    worst = std::max(worst,
                     nabla_h_residual(conn, broken, nullptr, pt, deg.defaults));
  }
  CHECK(worst > 0.1);
}

TEST_CASE("expected holonomy closures match the transport results") {
  const Scenario rw = build_rw_klein({.p = 1, .q = 3, .r = 1, .a = 1, .b = 2});
  const ConnectionField conn = rw.connection();
  for (int g = 0; g < 3; ++g) {
    const auto& expect = rw.expected_holonomy[static_cast<std::size_t>(g)];
    REQUIRE(expect.positive_multiple);
    const HolonomyScale got = holonomy_scale_for_generator(
        conn, rw.h, &*rw.psi, rw.quotient, g, rw.defaults);
    CHECK(got.positive_multiple);
    CHECK(got.scale ==
          doctest::Approx(expect.scale(rw.defaults)).epsilon(1e-6));
  }

  const Scenario deg = build_deg_cylinder();
  REQUIRE(!deg.expected_holonomy[0].positive_multiple);
}

TEST_CASE("torus slice is homogeneous when alpha is 1") {
  const Scenario torus = build_rw_torus();
  const ConnectionField conn = torus.connection();

  UniformSampler rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Vec shift = Vec::Zero(4);
    for (int i = 1; i < 4; ++i) shift[i] = rng.in(-1.0, 1.0);
    const DeckMap translation = DeckMap::translation(shift);
    const Point pt = sample_point(torus.box, rng);
    CHECK(deck_equivariance_residual(conn, translation, pt, torus.defaults) <
          1e-10);
  }

  // an x-dependent alpha breaks generic translations but not generators
  const Scenario bumpy =
      build_rw_torus({.alpha = "2+sin(x*6.283185307179586)"});
  const ConnectionField bconn = bumpy.connection();
  Vec odd = Vec::Zero(4);
  odd[1] = 0.3;
  odd[2] = 0.7;
  odd[3] = 0.2;
  const Point probe = make_point({0.0, 0.1, 0.2, 0.3});
  CHECK(deck_equivariance_residual(bconn, DeckMap::translation(odd), probe,
                                   bumpy.defaults) > 1e-4);
  UniformSampler rng2(32);
  for (int i = 0; i < 10; ++i) {
    const Point pt = sample_point(bumpy.box, rng2);
    for (const DeckMap& g : bumpy.quotient.generators)
      CHECK(deck_equivariance_residual(bconn, g, pt, bumpy.defaults) < 1e-10);
  }
}

TEST_CASE("registry dispatch and overrides") {
  CHECK(is_builtin_scenario("rw-klein"));
  CHECK(is_builtin_scenario("deg-cylinder"));
  CHECK(!is_builtin_scenario("nope"));

  const Scenario scen = build_builtin("rw-klein", {{"a", "0.5"}, {"q", "2"}});
  CHECK(scen.defaults.at("a") == 0.5);
  CHECK(scen.defaults.at("q") == 2.0);

  CHECK_THROWS_AS(build_builtin("rw-klein", {{"bogus", "1"}}), Error);
  CHECK_THROWS_AS(build_builtin("deg-cylinder", {{"a", "1"}}), Error);
  CHECK_THROWS_AS(build_builtin("missing", {}), Error);
}
