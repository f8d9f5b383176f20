#include "weyl/curvature.hpp"

#include <cmath>

#include "weyl/error.hpp"

namespace weyl {

double RiemannTensor::max_abs_entry() const {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

RiemannTensor riemann_from_jets(const ChristoffelJets& jets) {
  const int n = jets.gamma.n;
  RiemannTensor out(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double v = jets.d[static_cast<std::size_t>(i)].at(l, j, k) -
                     jets.d[static_cast<std::size_t>(j)].at(l, i, k);
          for (int m = 0; m < n; ++m)
            v += jets.gamma.at(l, i, m) * jets.gamma.at(m, j, k) -
                 jets.gamma.at(l, j, m) * jets.gamma.at(m, i, k);
          out.at(l, k, i, j) = v;
          out.at(l, k, j, i) = -v;
        }
  return out;
}

RiemannTensor riemann(const ConnectionField& conn, const Point& pt,
                      const Bindings& binds) {
  return riemann_from_jets(conn.christoffel_jets_at(pt, binds));
}

Mat ricci(const RiemannTensor& riem) {
  const int n = riem.n;
  Mat out = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += riem.at(i, k, i, j);
      out(k, j) = v;
    }
  return out;
}

Mat ricci(const ConnectionField& conn, const Point& pt, const Bindings& binds) {
  return ricci(riemann(conn, pt, binds));
}

double bianchi_residual(const RiemannTensor& riem) {
  const int n = riem.n;
  double worst = 0.0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          worst = std::max(worst, std::abs(riem.at(l, k, i, j) +
                                           riem.at(l, i, j, k) +
                                           riem.at(l, j, k, i)));
  return worst;
}

GaugedCurvature scalar_and_einstein(const ConnectionField& conn,
                                    const MetricField& h, double gauge_mu,
                                    const Point& pt, const Bindings& binds) {
  if (!(gauge_mu > 0.0)) throw Error("gauge mu must be positive");
  GaugedCurvature out;
  out.gauge_mu = gauge_mu;
  out.ricci = ricci(conn, pt, binds);
  const Mat g_loc = h.value_at(pt, binds) / gauge_mu;
  const Mat g_inv = invert_checked(g_loc, "gauge metric");
  out.scalar = (g_inv * out.ricci).trace();
  out.einstein = out.ricci - 0.5 * out.scalar * g_loc;
  return out;
}

CurvatureTensors curvature_tensors(const ConnectionField& conn,
                                   const MetricField& h, double gauge_mu,
                                   const Point& pt, const Bindings& binds) {
  CurvatureTensors out{riemann(conn, pt, binds), Mat(), 0.0, gauge_mu, Mat()};
  GaugedCurvature gauged = scalar_and_einstein(conn, h, gauge_mu, pt, binds);
  out.ricci = std::move(gauged.ricci);
  out.scalar = gauged.scalar;
  out.einstein = std::move(gauged.einstein);
  return out;
}

}  // namespace weyl
