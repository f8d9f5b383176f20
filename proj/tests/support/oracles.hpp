#pragma once

// Test-only oracles, independent of the library's jet/evaluation path: all
// derivatives here come from central finite differences of plain eval()
// calls, Richardson-extrapolated once.

#include <weyl/connection.hpp>
#include <weyl/curvature.hpp>
#include <weyl/expr.hpp>
#include <weyl/linalg.hpp>

namespace weyl::testing {

inline double fd_partial(const ScalarExpr& e, const Point& pt,
                         const Bindings& binds, int i, double h) {
  Point up = pt, dn = pt;
  up[i] += h;
  dn[i] -= h;
  return (e.eval(up, binds) - e.eval(dn, binds)) / (2.0 * h);
}

inline Vec fd_gradient(const ScalarExpr& e, const Point& pt,
                       const Bindings& binds, double h = 1e-5) {
  Vec g(pt.size());
  for (int i = 0; i < pt.size(); ++i) {
    // central difference is O(h^2); one Richardson step
    const double coarse = fd_partial(e, pt, binds, i, h);
    const double fine = fd_partial(e, pt, binds, i, h / 2.0);
    g[i] = (4.0 * fine - coarse) / 3.0;
  }
  return g;
}

inline double fd_second(const ScalarExpr& e, const Point& pt,
                        const Bindings& binds, int i, int j, double h) {
  if (i == j) {
    Point up = pt, dn = pt;
    up[i] += h;
    dn[i] -= h;
    return (e.eval(up, binds) - 2.0 * e.eval(pt, binds) + e.eval(dn, binds)) /
           (h * h);
  }
  Point pp = pt, pm = pt, mp = pt, mm = pt;
  pp[i] += h; pp[j] += h;
  pm[i] += h; pm[j] -= h;
  mp[i] -= h; mp[j] += h;
  mm[i] -= h; mm[j] -= h;
  return (e.eval(pp, binds) - e.eval(pm, binds) - e.eval(mp, binds) +
          e.eval(mm, binds)) /
         (4.0 * h * h);
}

inline Mat fd_hessian(const ScalarExpr& e, const Point& pt,
                      const Bindings& binds, double h = 1e-4) {
  const auto n = pt.size();
  Mat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double coarse = fd_second(e, pt, binds, i, j, h);
      const double fine = fd_second(e, pt, binds, i, j, h / 2.0);
      out(i, j) = out(j, i) = (4.0 * fine - coarse) / 3.0;
    }
  return out;
}

// Riemann tensor with d Gamma from central differences of christoffel_at,
// assembled with the same index convention as the library.
inline RiemannTensor fd_riemann(const ConnectionField& conn, const Point& pt,
                                const Bindings& binds, double h = 1e-4) {
  const int n = conn.dim();
  ChristoffelJets jets(n);
  jets.gamma = conn.christoffel_at(pt, binds);
  for (int m = 0; m < n; ++m) {
    Point up = pt, dn = pt;
    up[m] += h;
    dn[m] -= h;
    const Christoffels gu = conn.christoffel_at(up, binds);
    const Christoffels gd = conn.christoffel_at(dn, binds);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          jets.d[static_cast<std::size_t>(m)].at(k, i, j) =
              (gu.at(k, i, j) - gd.at(k, i, j)) / (2.0 * h);
  }
  return riemann_from_jets(jets);
}

// Ricci of exp(2f) * delta_n on a flat background by the standard conformal
// rescaling formula:
//   R_ij = -(n-2)(f_ij - f_i f_j) - (lap f + (n-2)|grad f|^2) delta_ij
// with all derivatives of f from finite differences.
inline Mat conformal_flat_ricci(const ScalarExpr& two_f, const Point& pt,
                                const Bindings& binds) {
  const auto n = pt.size();
  const Vec df = fd_gradient(two_f, pt, binds) / 2.0;
  Mat ddf(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      ddf(i, j) = fd_second(two_f, pt, binds, i, j, 1e-4) / 2.0;
  const double lap = ddf.trace();
  const double grad2 = df.squaredNorm();
  Mat out(n, n);
  const double nm2 = static_cast<double>(n) - 2.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = -nm2 * (ddf(i, j) - df[i] * df[j]) -
                  ((i == j) ? (lap + nm2 * grad2) : 0.0);
  return out;
}

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace weyl::testing
