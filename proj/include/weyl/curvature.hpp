#pragma once

#include <vector>

#include "weyl/connection.hpp"
#include "weyl/fields.hpp"

namespace weyl {

// R^l_kij, antisymmetric in (i, j) by construction. Layout:
// r[((l*n + k)*n + i)*n + j].
struct RiemannTensor {
  int n = 0;
  std::vector<double> r;

  explicit RiemannTensor(int dim)
      : n(dim),
        r(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}
  double& at(int l, int k, int i, int j) {
    return r[static_cast<std::size_t>(((l * n + k) * n + i) * n + j)];
  }
  double at(int l, int k, int i, int j) const {
    return r[static_cast<std::size_t>(((l * n + k) * n + i) * n + j)];
  }
  double max_abs_entry() const;
};

// Index convention, fixed here and used by every oracle:
//   R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik
//           + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik
RiemannTensor riemann(const ConnectionField& conn, const Point& pt,
                      const Bindings& binds);

// Assembles the same formula from precomputed Christoffel jets (shared by
// the finite-difference oracle in the tests).
RiemannTensor riemann_from_jets(const ChristoffelJets& jets);

// R_kj = R^i_kij
Mat ricci(const ConnectionField& conn, const Point& pt, const Bindings& binds);
Mat ricci(const RiemannTensor& riem);

// Worst violation of R^l_kij + R^l_ijk + R^l_jki = 0.
double bianchi_residual(const RiemannTensor& riem);

// Scalar curvature and Einstein tensor in the local gauge mu: indices are
// raised with g_loc = h / mu. The scalar is only meaningful together with
// its gauge; the Einstein tensor is invariant under constant rescalings of
// mu.
struct GaugedCurvature {
  Mat ricci;
  double scalar = 0.0;
  double gauge_mu = 1.0;
  Mat einstein;
};

GaugedCurvature scalar_and_einstein(const ConnectionField& conn,
                                    const MetricField& h, double gauge_mu,
                                    const Point& pt, const Bindings& binds);

// The full bundle at a point.
struct CurvatureTensors {
  RiemannTensor riemann;
  Mat ricci;
  double scalar = 0.0;
  double gauge_mu = 1.0;
  Mat einstein;
};

CurvatureTensors curvature_tensors(const ConnectionField& conn,
                                   const MetricField& h, double gauge_mu,
                                   const Point& pt, const Bindings& binds);

}  // namespace weyl
