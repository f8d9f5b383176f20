#pragma once

#include <string>
#include <vector>

#include <weyl/fields.hpp>

namespace weyl::testing {

// delta_n on coordinates x, y, z, w, ... with optional parameters
inline MetricField flat_metric(std::vector<std::string> coords,
                               std::vector<std::string> params = {}) {
  auto syms = Symbols::make(std::move(coords), std::move(params));
  const int n = static_cast<int>(syms->coords.size());
  std::vector<ScalarExpr> upper(static_cast<std::size_t>(n * (n + 1) / 2),
                                ScalarExpr::number(0.0, syms));
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++idx)
      if (i == j) upper[static_cast<std::size_t>(idx)] = ScalarExpr::number(1.0, syms);
  return MetricField(syms, std::move(upper), Signature{0, n});
}

// exp(a x + b y) delta_3 on (x, y, z) with parameters a, b
inline MetricField conformal_flat3() {
  auto syms = Symbols::make({"x", "y", "z"}, {"a", "b"});
  const ScalarExpr conf =
      exp(ScalarExpr::parameter(0, syms) * ScalarExpr::coordinate(0, syms) +
          ScalarExpr::parameter(1, syms) * ScalarExpr::coordinate(1, syms));
  std::vector<ScalarExpr> upper(6, ScalarExpr::number(0.0, syms));
  upper[0] = conf;  // xx
  upper[3] = conf;  // yy
  upper[5] = conf;  // zz
  return MetricField(syms, std::move(upper), Signature{0, 3});
}

// psi = -a dx on the same chart as conformal_flat3 / flat (x, y, z; a, b)
inline OneFormField minus_a_dx3() {
  auto syms = Symbols::make({"x", "y", "z"}, {"a", "b"});
  std::vector<ScalarExpr> comps{-ScalarExpr::parameter(0, syms),
                                ScalarExpr::number(0.0, syms),
                                ScalarExpr::number(0.0, syms)};
  return OneFormField(syms, std::move(comps));
}

// the (t, theta) cos/sin block on its own 2d chart
inline MetricField g1_block() {
  auto syms = Symbols::make({"t", "theta"}, {});
  const ScalarExpr theta = ScalarExpr::coordinate(1, syms);
  std::vector<ScalarExpr> upper{-cos(theta), sin(theta), cos(theta)};
  return MetricField(syms, std::move(upper), Signature{1, 1});
}

inline Point make_point(std::initializer_list<double> vals) {
  Point p(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) p[i++] = v;
  return p;
}

inline Vec make_vec(std::initializer_list<double> vals) {
  return make_point(vals);
}

}  // namespace weyl::testing
