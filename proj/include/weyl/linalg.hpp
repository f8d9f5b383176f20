#pragma once

#include <Eigen/Dense>

#include "weyl/error.hpp"

namespace weyl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Points on the universal cover R^n, in chart coordinates.
using Point = Vec;

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vec& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Declared metric signature as (negative count, positive count).
struct Signature {
  int n_minus = 0;
  int n_plus = 0;
  int dim() const { return n_minus + n_plus; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Eigenvalue-sign signature of a symmetric matrix. Eigenvalues within
// zero_tol (relative to the largest magnitude) of zero make the matrix
// singular.
Signature signature_of(const Mat& sym, double zero_tol = 1e-10);

// Inverse with a relative singularity guard.
Mat invert_checked(const Mat& m, const char* what = "matrix");

}  // namespace weyl
