#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <weyl/error.hpp>
#include <weyl/fields.hpp>
#include <weyl/sampling.hpp>
#include <weyl/scenario.hpp>

#include "support/fixtures.hpp"

using namespace weyl;
using namespace weyl::testing;

TEST_CASE("metric_at: constant flat metric") {
  const MetricField flat = flat_metric({"x", "y", "z"});
  const Mat m = metric_at(flat, make_point({0.2, -1.0, 3.0}), {});
  CHECK(max_abs(Mat(m - Mat::Identity(3, 3))) == 0.0);
}

TEST_CASE("metric_at: g1 block at marked angles") {
  const MetricField g1 = g1_block();

  Mat at0 = metric_at(g1, make_point({0.4, 0.0}), {});
  CHECK(at0(0, 0) == -1.0);
  CHECK(at0(0, 1) == 0.0);
  CHECK(at0(1, 1) == 1.0);

  Mat at90 = metric_at(g1, make_point({0.0, std::numbers::pi / 2}), {});
  CHECK(std::abs(at90(0, 0)) < 1e-16);
  CHECK(at90(0, 1) == 1.0);
  CHECK(std::abs(at90(1, 1)) < 1e-16);
  CHECK(std::abs(at90.determinant() + 1.0) < 1e-15);
}

TEST_CASE("metric_at enforces the declared signature") {
  auto syms = Symbols::make({"x", "y"}, {});
  std::vector<ScalarExpr> upper{ScalarExpr::number(1.0, syms),
                                ScalarExpr::number(0.0, syms),
                                ScalarExpr::number(1.0, syms)};
  const MetricField wrong(syms, std::move(upper), Signature{1, 1});
  CHECK_THROWS_AS(metric_at(wrong, make_point({0.0, 0.0}), {}),
                  SignatureError);

  // x dx^2 + dy^2 degenerates at x = 0
  std::vector<ScalarExpr> upper2{ScalarExpr::coordinate(0, syms),
                                 ScalarExpr::number(0.0, syms),
                                 ScalarExpr::number(1.0, syms)};
  const MetricField singular(syms, std::move(upper2), Signature{0, 2});
  CHECK_THROWS_AS(metric_at(singular, make_point({0.0, 1.0}), {}),
                  SingularMatrixError);
}

TEST_CASE("inverse_metric_at") {
  const MetricField flat = flat_metric({"x", "y", "z"});
  const Point pt = make_point({0.3, 0.4, -0.2});
  CHECK(max_abs(Mat(inverse_metric_at(flat, pt, {}) - Mat::Identity(3, 3))) ==
        0.0);

  // g1 is self-inverse: det = -1 and the adjugate reproduces the entries
  const MetricField g1 = g1_block();
  UniformSampler rng(11);
  for (int i = 0; i < 20; ++i) {
    const Point p2 = make_point({rng.in(-1, 1), rng.in(0, std::numbers::pi)});
    const Mat m = g1.value_at(p2, {});
    const Mat inv = inverse_metric_at(g1, p2, {});
    CHECK(max_abs(Mat(inv - m)) < 1e-15);
    CHECK(max_abs(Mat(inv * m - Mat::Identity(2, 2))) < 1e-12);
  }

  // exp(a x) delta scales inversely
  const MetricField conf = conformal_flat3();
  const Bindings binds{{"a", 1.0}, {"b", 0.0}};
  const Point p3 = make_point({0.7, 0.1, -0.4});
  const Mat inv = inverse_metric_at(conf, p3, binds);
  CHECK(max_abs(Mat(inv - std::exp(-0.7) * Mat::Identity(3, 3))) < 1e-15);
}

TEST_CASE("closedness residual") {
  auto syms = Symbols::make({"x", "y"}, {"a", "b"});
  const Bindings binds{{"a", 1.0}, {"b", 2.0}};

  // constant form
  OneFormField constant(syms, {-ScalarExpr::parameter(0, syms),
                               -ScalarExpr::parameter(1, syms)});
  CHECK(max_abs(closedness_residual(constant, make_point({0.3, 0.8}), binds)) ==
        0.0);

  // dlog alpha for alpha = 2 + sin(x) cos(y)
  const ScalarExpr alpha =
      ScalarExpr::parse("2+sin(x)*cos(y)", syms);
  OneFormField dlog(syms, {alpha.derivative(0) / alpha,
                           alpha.derivative(1) / alpha});
  UniformSampler rng(5);
  for (int i = 0; i < 50; ++i) {
    const Point pt = make_point({rng.in(-2, 2), rng.in(-2, 2)});
    CHECK(max_abs(closedness_residual(dlog, pt, binds)) < 1e-12);
  }

  // w = x dy is not closed: (dw)_xy = 1
  OneFormField w(syms, {ScalarExpr::number(0.0, syms),
                        ScalarExpr::coordinate(0, syms)});
  const Mat dw = closedness_residual(w, make_point({1.4, -0.2}), binds);
  CHECK(dw(0, 1) == 1.0);
  CHECK(dw(1, 0) == -1.0);
}

TEST_CASE("deck invariance residuals") {
  const Scenario rw = build_rw_klein();

  UniformSampler rng(17);
  for (int i = 0; i < 20; ++i) {
    const Point pt = sample_point(rw.box, rng);
    for (const DeckMap& g : rw.quotient.generators) {
      CHECK(deck_invariance_residual(rw.h, g, pt, rw.defaults) < 1e-12);
      CHECK(deck_invariance_residual(*rw.psi, g, pt, rw.defaults) < 1e-12);
    }
  }

  // the degenerate cover metric picks up a sign on its g1 block
  const Scenario deg = build_deg_cylinder();
  const DeckMap& shift = deg.quotient.generators[0];
  const Point pt = make_point({0.3, 0.7, 0.0, 0.0});
  const Mat g1g2 = deg.h.value_at(pt, {});
  const double res = deck_invariance_residual(deg.h, shift, pt, {});
  // residual is exactly twice the largest g1 entry
  const double expected =
      2.0 * std::max({std::abs(g1g2(0, 0)), std::abs(g1g2(0, 1)),
                      std::abs(g1g2(1, 1))});
  CHECK(res == doctest::Approx(expected).epsilon(1e-12));

  // constant-coefficient fields are invariant under pure translations
  const MetricField flat = flat_metric({"x", "y", "z"});
  const DeckMap shift3 = DeckMap::translation(make_vec({0.3, -0.1, 2.0}));
  CHECK(deck_invariance_residual(flat, shift3, make_point({1.0, 2.0, 3.0}),
                                 {}) == 0.0);
}

TEST_CASE("deck maps compose and invert") {
  Mat flip = Mat::Identity(3, 3);
  flip(2, 2) = -1.0;
  const DeckMap a(flip, make_vec({0.0, 2.0, 0.0}));
  const DeckMap b = DeckMap::translation(make_vec({1.0, 0.0, 0.0}));

  const Point pt = make_point({0.5, -1.0, 0.25});
  const Point via = a.apply(b.apply(pt));
  const Point composed = a.after(b).apply(pt);
  CHECK(max_abs(Vec(via - composed)) == 0.0);

  const Point back = a.inverse().apply(a.apply(pt));
  CHECK(max_abs(Vec(back - pt)) < 1e-15);

  CHECK_THROWS_AS(DeckMap(Mat::Zero(2, 2), Vec::Zero(2)),
                  SingularMatrixError);
}

TEST_CASE("metric signature is constant across samples") {
  for (const char* name : {"rw-klein", "rw-torus", "deg-cylinder"}) {
    const Scenario scen = build_builtin(name);
    UniformSampler rng(scen.seed + 99);
    for (int i = 0; i < 1000; ++i) {
      const Point pt = sample_point(scen.box, rng);
      CHECK_NOTHROW(metric_at(scen.h, pt, scen.defaults));
    }
  }
}

TEST_CASE("from_strings accepts upper-triangle and full grids") {
  auto syms = Symbols::make({"x", "y"}, {});
  const MetricField up = MetricField::from_strings(
      syms, {{"1", "x"}, {"2"}}, Signature{0, 2});
  CHECK(up.component(0, 1).print() == "x");
  CHECK(up.component(1, 0).print() == "x");

  const MetricField full = MetricField::from_strings(
      syms, {{"1", "x"}, {"x", "2"}}, Signature{0, 2});
  CHECK(structurally_equal(full.component(0, 1), full.component(1, 0)));

  CHECK_THROWS_AS(MetricField::from_strings(syms, {{"1", "x"}, {"y", "2"}},
                                            Signature{0, 2}),
                  ParseError);
}
