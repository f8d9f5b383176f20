#include "weyl/curve.hpp"

#include <algorithm>
#include <cmath>

#include "weyl/error.hpp"

namespace weyl {

Curve Curve::segment(Point a, Point b) {
  return polyline({std::move(a), std::move(b)});
}

Curve Curve::polyline(std::vector<Point> pts) {
  if (pts.size() < 2) throw Error("polyline needs at least two points");
  const auto n = pts.front().size();
  for (const auto& p : pts)
    if (p.size() != n) throw Error("polyline points have mixed dimensions");
  Curve c;
  c.expression_ = false;
  c.pts_ = std::move(pts);
  c.s0_ = 0.0;
  c.s1_ = 1.0;
  const auto m = c.pts_.size() - 1;
  for (std::size_t i = 0; i <= m; ++i)
    c.breaks_.push_back(static_cast<double>(i) / static_cast<double>(m));
  return c;
}

Curve Curve::from_exprs(std::vector<ScalarExpr> comps, double s0, double s1) {
  if (comps.empty()) throw Error("expression curve needs components");
  for (const auto& e : comps) {
    if (!e) throw Error("expression curve has an empty component");
    if (e.dim() != 1)
      throw Error("curve components must be expressions in one parameter");
  }
  if (!(s1 > s0)) throw Error("curve parameter range is empty");
  Curve c;
  c.expression_ = true;
  c.comps_ = std::move(comps);
  c.s0_ = s0;
  c.s1_ = s1;
  c.breaks_ = {s0, s1};
  return c;
}

int Curve::dim() const {
  return expression_ ? static_cast<int>(comps_.size())
                     : static_cast<int>(pts_.front().size());
}

Point Curve::at(double s, const Bindings& binds) const {
  if (expression_) {
    Point param(1);
    param[0] = s;
    Point out(dim());
    for (int i = 0; i < dim(); ++i)
      out[i] = comps_[static_cast<std::size_t>(i)].eval(param, binds);
    return out;
  }
  const auto m = static_cast<double>(pts_.size() - 1);
  const double u = std::clamp(s, 0.0, 1.0) * m;
  const auto seg = std::min(static_cast<std::size_t>(u), pts_.size() - 2);
  const double local = u - static_cast<double>(seg);
  return pts_[seg] + local * (pts_[seg + 1] - pts_[seg]);
}

Vec Curve::tangent(double s, const Bindings& binds) const {
  if (expression_) return tangent_in(0, s, binds);
  const auto m = static_cast<double>(pts_.size() - 1);
  const double u = std::clamp(s, 0.0, 1.0) * m;
  auto seg = std::min(static_cast<std::size_t>(u), pts_.size() - 2);
  // At interior vertices take the right-hand tangent.
  return tangent_in(seg, s, binds);
}

Vec Curve::tangent_in(std::size_t piece, double s, const Bindings& binds) const {
  if (expression_) {
    Point param(1);
    param[0] = s;
    Vec out(dim());
    for (int i = 0; i < dim(); ++i)
      out[i] = comps_[static_cast<std::size_t>(i)].eval_jet1(param, binds).grad[0];
    return out;
  }
  if (piece + 1 >= pts_.size()) throw Error("curve piece index out of range");
  const auto m = static_cast<double>(pts_.size() - 1);
  return m * (pts_[piece + 1] - pts_[piece]);
}

bool Curve::zero_length(const Bindings& binds, double tol) const {
  if (!expression_) {
    double extent = 0.0;
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
      extent = std::max(extent, max_abs(Vec(pts_[i + 1] - pts_[i])));
    return extent <= tol;
  }
  const Point a = start(binds), b = end(binds);
  const Point mid = at(0.5 * (s0_ + s1_), binds);
  return max_abs(Vec(b - a)) <= tol && max_abs(Vec(mid - a)) <= tol;
}

Curve Curve::reversed() const {
  if (expression_)
    throw Error("reversing expression-defined curves is not supported");
  Curve c = *this;
  std::reverse(c.pts_.begin(), c.pts_.end());
  return c;
}

}  // namespace weyl
