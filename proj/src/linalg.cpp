#include "weyl/linalg.hpp"

#include <string>

namespace weyl {

Signature signature_of(const Mat& sym, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  Signature sig;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) < zero_tol * scale)
      throw SingularMatrixError("matrix is numerically singular (eigenvalue " +
                                std::to_string(ev[i]) + ")");
    (ev[i] < 0 ? sig.n_minus : sig.n_plus)++;
  }
  return sig;
}

Mat invert_checked(const Mat& m, const char* what) {
  Eigen::FullPivLU<Mat> lu(m);
  const double scale = std::max(1.0, max_abs(m));
  if (!lu.isInvertible() ||
      std::abs(lu.determinant()) <
          1e-12 * std::pow(scale, static_cast<double>(m.rows())))
    throw SingularMatrixError(std::string(what) + " is numerically singular");
  return lu.inverse();
}

}  // namespace weyl
