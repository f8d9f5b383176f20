#pragma once

#include <vector>

#include "weyl/expr.hpp"
#include "weyl/linalg.hpp"

namespace weyl {

// Piecewise-smooth path in cover coordinates. Either expression-defined
// (components in one parameter over [s0, s1], tangents exact via jets) or a
// polyline (linear interpolation, parameter uniform per segment over
// [0, 1]).
class Curve {
 public:
  static Curve segment(Point a, Point b);
  static Curve polyline(std::vector<Point> pts);
  // Components over the single coordinate `s` (plus any bound parameters).
  static Curve from_exprs(std::vector<ScalarExpr> comps, double s0, double s1);

  int dim() const;
  double s_begin() const { return s0_; }
  double s_end() const { return s1_; }

  Point at(double s, const Bindings& binds) const;
  Vec tangent(double s, const Bindings& binds) const;

  // Tangent within a given smooth piece. At a vertex, tangent(s) takes the
  // right-hand piece; integrators working inside piece i must use this form
  // or they pick up the neighbour's slope at the shared endpoint.
  Vec tangent_in(std::size_t piece, double s, const Bindings& binds) const;

  // Parameter values where the tangent may jump (polyline vertices),
  // including both ends. Integrators split here.
  const std::vector<double>& breakpoints() const { return breaks_; }

  Point start(const Bindings& binds) const { return at(s0_, binds); }
  Point end(const Bindings& binds) const { return at(s1_, binds); }

  // Degenerate (identity-generator) loops have coincident endpoints and no
  // interior extent.
  bool zero_length(const Bindings& binds, double tol = 1e-14) const;

  Curve reversed() const;

 private:
  Curve() = default;

  bool expression_ = false;
  std::vector<ScalarExpr> comps_;  // expression form
  std::vector<Point> pts_;         // polyline form
  double s0_ = 0.0, s1_ = 1.0;
  std::vector<double> breaks_;
};

}  // namespace weyl
