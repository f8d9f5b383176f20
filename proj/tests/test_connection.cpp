#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <weyl/connection.hpp>
#include <weyl/error.hpp>
#include <weyl/sampling.hpp>
#include <weyl/scenario.hpp>
#include <weyl/transport.hpp>

#include "support/fixtures.hpp"

using namespace weyl;
using namespace weyl::testing;

namespace {

// exp(a x + b y) * (-dt^2 + S^2 Sigma) on the rw chart, the local metric of
// the rw connection in the alpha = 1 gauge
MetricField rw_local_metric(const Scenario& rw) {
  const SymbolsPtr& syms = rw.h.symbols();
  const ScalarExpr conf =
      exp(ScalarExpr::parameter(0, syms) * ScalarExpr::coordinate(1, syms) +
          ScalarExpr::parameter(1, syms) * ScalarExpr::coordinate(2, syms));
  std::vector<ScalarExpr> upper;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) upper.push_back(conf * rw.h.component(i, j));
  return MetricField(syms, std::move(upper), rw.h.signature());
}

double max_gamma_diff(const ConnectionField& a, const ConnectionField& b,
                      const Point& pt, const Bindings& binds) {
  const Christoffels ga = a.christoffel_at(pt, binds);
  const Christoffels gb = b.christoffel_at(pt, binds);
  double worst = 0.0;
  for (std::size_t i = 0; i < ga.g.size(); ++i)
    worst = std::max(worst, std::abs(ga.g[i] - gb.g[i]));
  return worst;
}

}  // namespace

TEST_CASE("levi-civita of a flat metric vanishes") {
  const ConnectionField conn = levi_civita(flat_metric({"x", "y", "z"}));
  const Christoffels g = conn.christoffel_at(make_point({0.5, -2.0, 1.0}), {});
  CHECK(g.max_abs_entry() == 0.0);
}

TEST_CASE("levi-civita of the degenerate block at theta = pi/4") {
  const Scenario deg = build_deg_cylinder();
  const ConnectionField conn = deg.connection();
  const Point pt = make_point({0.0, std::numbers::pi / 4, 0.0, 0.0});
  const Christoffels g = conn.christoffel_at(pt, {});
  // t = 0, theta = 1
  CHECK(g.at(0, 0, 0) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(g.at(1, 1, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g.at(0, 1, 1) == doctest::Approx(-0.75).epsilon(1e-12));
}

TEST_CASE("levi-civita of exp(a x) delta_3") {
  const ConnectionField conn = levi_civita(conformal_flat3());
  const Bindings binds{{"a", 1.0}, {"b", 0.0}};
  const Christoffels g =
      conn.christoffel_at(make_point({0.3, -0.6, 0.9}), binds);
  CHECK(g.at(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));   // x_xx
  CHECK(g.at(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-12));   // y_xy
  CHECK(g.at(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));  // x_yy
  CHECK(g.at(0, 2, 2) == doctest::Approx(-0.5).epsilon(1e-12));  // x_zz
}

TEST_CASE("weyl connection with psi = 0 reduces to levi-civita") {
  auto syms = Symbols::make({"x", "y", "z"}, {"a", "b"});
  std::vector<ScalarExpr> zero(3, ScalarExpr::number(0.0, syms));
  const OneFormField psi0(syms, std::move(zero));
  const ConnectionField w = weyl_connection(conformal_flat3(), psi0);
  const ConnectionField lc = levi_civita(conformal_flat3());

  const Bindings binds{{"a", 0.7}, {"b", -0.4}};
  UniformSampler rng(3);
  for (int i = 0; i < 100; ++i) {
    const Point pt =
        make_point({rng.in(-1, 1), rng.in(-1, 1), rng.in(-1, 1)});
    CHECK(max_gamma_diff(w, lc, pt, binds) == 0.0);
  }
}

TEST_CASE("weyl(delta_3, -a dx) matches the conformal levi-civita") {
  const ConnectionField w =
      weyl_connection(flat_metric({"x", "y", "z"}, {"a", "b"}), minus_a_dx3());
  const Bindings binds{{"a", 1.0}, {"b", 0.0}};
  const Point origin = make_point({0.0, 0.0, 0.0});

  const Christoffels g = w.christoffel_at(origin, binds);
  CHECK(g.at(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.at(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(g.at(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));

  const ConnectionField lc = levi_civita(conformal_flat3());
  UniformSampler rng(4);
  for (int i = 0; i < 100; ++i) {
    const Point pt =
        make_point({rng.in(-1, 1), rng.in(-1, 1), rng.in(-1, 1)});
    CHECK(max_gamma_diff(w, lc, pt, binds) < 1e-14);
  }
}

TEST_CASE("rw weyl connection equals levi-civita of the local metric") {
  const Scenario rw = build_rw_klein();  // alpha = 1
  const ConnectionField w = rw.connection();
  const ConnectionField lc = levi_civita(rw_local_metric(rw));

  UniformSampler rng(7);
  for (int i = 0; i < 100; ++i) {
    const Point pt = sample_point(rw.box, rng);
    CHECK(max_gamma_diff(w, lc, pt, rw.defaults) < 1e-9);
  }
}

TEST_CASE("defining equation residual") {
  // metric compatibility of plain levi-civita
  const Scenario deg = build_deg_cylinder();
  const ConnectionField lc = deg.connection();
  UniformSampler rng(21);
  for (int i = 0; i < 50; ++i) {
    const Point pt = sample_point(deg.box, rng);
    CHECK(nabla_h_residual(lc, deg.h, nullptr, pt, {}) < 1e-10);
  }

  // nabla h = h psi for the rw pair
  const Scenario rw = build_rw_klein();
  const ConnectionField w = rw.connection();
  for (int i = 0; i < 100; ++i) {
    const Point pt = sample_point(rw.box, rng);
    CHECK(nabla_h_residual(w, rw.h, &*rw.psi, pt, rw.defaults) < 1e-9);
  }

  // deliberate mismatch: flat connection, flat metric, psi = -dx has
  // residual |h psi| = 1
  const MetricField flat = flat_metric({"x", "y", "z"}, {"a", "b"});
  const ConnectionField flat_conn = levi_civita(flat);
  const OneFormField psi = minus_a_dx3();
  const Bindings binds{{"a", 1.0}, {"b", 0.0}};
  const double res =
      nabla_h_residual(flat_conn, flat, &psi, make_point({0.0, 0.0, 0.0}),
                       binds);
  CHECK(res == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("deck equivariance of the built-in connections") {
  const Scenario rw = build_rw_klein();
  const ConnectionField w = rw.connection();
  UniformSampler rng(33);
  for (int i = 0; i < 25; ++i) {
    const Point pt = sample_point(rw.box, rng);
    for (const DeckMap& g : rw.quotient.generators)
      CHECK(deck_equivariance_residual(w, g, pt, rw.defaults) < 1e-10);
  }

  const Scenario deg = build_deg_cylinder();
  const ConnectionField lc = deg.connection();
  for (int i = 0; i < 25; ++i) {
    const Point pt = sample_point(deg.box, rng);
    CHECK(deck_equivariance_residual(lc, deg.quotient.generators[0], pt, {}) <
          1e-10);
  }
}

TEST_CASE("explicit tables: constant Gamma is translation equivariant") {
  auto syms = Symbols::make({"x", "y"}, {});
  std::vector<ScalarExpr> table(8, ScalarExpr::number(0.0, syms));
  // Gamma^x_xy = Gamma^x_yx = 0.3
  table[1] = table[2] = ScalarExpr::number(0.3, syms);
  const ConnectionField conn = ConnectionField::explicit_table(syms, table);
  CHECK(conn.provenance() == ConnectionField::Provenance::ExplicitTable);

  const DeckMap shift = DeckMap::translation(make_vec({0.4, -2.0}));
  CHECK(deck_equivariance_residual(conn, shift, make_point({1.0, 2.0}), {}) ==
        0.0);

  // asymmetric tables are rejected
  std::vector<ScalarExpr> bad(8, ScalarExpr::number(0.0, syms));
  bad[1] = ScalarExpr::number(0.3, syms);
  CHECK_THROWS_AS(ConnectionField::explicit_table(syms, bad), Error);
}

TEST_CASE("torsion freeness holds exactly") {
  const Scenario rw = build_rw_klein({.a = -0.3, .b = 1.7, .alpha =
                                          "2+sin(x*6.283185307179586)"});
  const ConnectionField w = rw.connection();
  UniformSampler rng(50);
  for (int i = 0; i < 20; ++i) {
    const Point pt = sample_point(rw.box, rng);
    const Christoffels g = w.christoffel_at(pt, rw.defaults);
    for (int k = 0; k < 4; ++k)
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          CHECK(g.at(k, a, b) == g.at(k, b, a));
  }
}

TEST_CASE("local gauge along paths") {
  const Scenario rw = build_rw_klein();  // psi = -dx - 2dy with defaults

  SUBCASE("zero form") {
    auto syms = rw.h.symbols();
    std::vector<ScalarExpr> zero(4, ScalarExpr::number(0.0, syms));
    const OneFormField psi0(syms, std::move(zero));
    const Curve path = Curve::segment(make_point({0, 0, 0, 0}),
                                      make_point({0.3, 0.5, -0.2, 1.0}));
    CHECK(local_gauge(psi0, path, rw.defaults) == 1.0);
  }

  SUBCASE("constant form over a straight segment") {
    const Curve path = Curve::segment(make_point({0, 0, 0, 0}),
                                      make_point({0, 1, 0, 0}));
    const double mu = local_gauge(*rw.psi, path, rw.defaults);
    CHECK(mu == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }

  SUBCASE("exact form integrates to the ratio of alpha") {
    auto syms = Symbols::make({"x"}, {});
    const ScalarExpr alpha = ScalarExpr::parse("2+sin(x)", syms);
    const OneFormField dlog(syms, {alpha.derivative(0) / alpha});
    const Curve path = Curve::segment(make_point({0.0}),
                                      make_point({std::numbers::pi / 2}));
    CHECK(local_gauge(dlog, path, {}) ==
          doctest::Approx(1.5).epsilon(1e-10));

    const GaugeFunction mu(dlog, path, {});
    CHECK(mu.value() == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(mu.basepoint()[0] == 0.0);
  }
}

TEST_CASE("gauge compatibility: numeric mu matches the symbolic gauge") {
  // Inside one fundamental box, mu from the path integral must agree with
  // the closed form exp(-a x - b y), and levi-civita of mu^-1 h with the
  // weyl connection.
  const Scenario rw = build_rw_klein();
  const Bindings& binds = rw.defaults;
  UniformSampler rng(61);
  for (int i = 0; i < 10; ++i) {
    const Point target = sample_point(rw.box, rng);
    const Curve path = Curve::segment(Vec(Vec::Zero(4)), target);
    const double mu = local_gauge(*rw.psi, path, binds);
    const double closed_form = std::exp(-1.0 * target[1] - 2.0 * target[2]);
    CHECK(mu == doctest::Approx(closed_form).epsilon(1e-9));
  }

  const ConnectionField w = rw.connection();
  const ConnectionField lc = levi_civita(rw_local_metric(rw));
  for (int i = 0; i < 20; ++i) {
    const Point pt = sample_point(rw.box, rng);
    CHECK(max_gamma_diff(w, lc, pt, binds) < 1e-8);
  }
}

TEST_CASE("uniqueness: (alpha h, psi + dlog alpha) gives the same connection") {
  const Scenario rw = build_rw_klein();
  const SymbolsPtr& syms = rw.h.symbols();

  const ScalarExpr alpha = ScalarExpr::parse(
      "2+sin(x*6.283185307179586)*cos(y*6.283185307179586)", syms);

  std::vector<ScalarExpr> scaled;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) scaled.push_back(alpha * rw.h.component(i, j));
  const MetricField ah(syms, std::move(scaled), rw.h.signature());

  std::vector<ScalarExpr> shifted;
  for (int i = 0; i < 4; ++i)
    shifted.push_back(rw.psi->component(i) + alpha.derivative(i) / alpha);
  const OneFormField psi2(syms, std::move(shifted));

  const ConnectionField w1 = rw.connection();
  const ConnectionField w2 = weyl_connection(ah, psi2);
  UniformSampler rng(77);
  for (int i = 0; i < 100; ++i) {
    const Point pt = sample_point(rw.box, rng);
    CHECK(max_gamma_diff(w1, w2, pt, rw.defaults) < 1e-10);
  }
}

TEST_CASE("exact psi reduces to levi-civita of mu^-1 h") {
  // psi = dlog mu with mu = exp(-x^2/2): globally exact, so the weyl
  // connection is levi-civita of mu^-1 delta_3.
  auto syms = Symbols::make({"x", "y", "z"}, {});
  const ScalarExpr mu = ScalarExpr::parse("exp(-x^2/2)", syms);
  OneFormField psi(syms,
                   {mu.derivative(0) / mu, mu.derivative(1) / mu,
                    mu.derivative(2) / mu});

  std::vector<ScalarExpr> upper(6, ScalarExpr::number(0.0, syms));
  const ScalarExpr inv_mu = ScalarExpr::number(1.0, syms) / mu;
  upper[0] = inv_mu;
  upper[3] = inv_mu;
  upper[5] = inv_mu;
  const MetricField scaled(syms, std::move(upper), Signature{0, 3});

  std::vector<ScalarExpr> id6(6, ScalarExpr::number(0.0, syms));
  id6[0] = id6[3] = id6[5] = ScalarExpr::number(1.0, syms);
  const MetricField flat(syms, std::move(id6), Signature{0, 3});
  const ConnectionField w2 = weyl_connection(flat, psi);
  const ConnectionField lc = levi_civita(scaled);

  UniformSampler rng(88);
  for (int i = 0; i < 50; ++i) {
    const Point pt =
        make_point({rng.in(-1, 1), rng.in(-1, 1), rng.in(-1, 1)});
    CHECK(max_gamma_diff(w2, lc, pt, {}) < 1e-10);
  }
}

TEST_CASE("weyl preflight rejects a non-closed psi") {
  auto syms = Symbols::make({"x", "y", "z"}, {});
  // x dy is not closed
  OneFormField bad(syms, {ScalarExpr::number(0.0, syms),
                          ScalarExpr::coordinate(0, syms),
                          ScalarExpr::number(0.0, syms)});
  std::vector<ScalarExpr> id6(6, ScalarExpr::number(0.0, syms));
  id6[0] = id6[3] = id6[5] = ScalarExpr::number(1.0, syms);
  const MetricField flat(syms, std::move(id6), Signature{0, 3});

  SampleSpec samples{{{-1, 1}, {-1, 1}, {-1, 1}}, 20, 5};
  CHECK_THROWS_AS(weyl_connection(flat, bad, samples, {}), PreflightError);
}
