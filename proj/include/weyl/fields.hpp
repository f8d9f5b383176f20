#pragma once

#include <string>
#include <vector>

#include "weyl/expr.hpp"
#include "weyl/linalg.hpp"

namespace weyl {

// Jets of all components of a symmetric expression matrix at one point:
// value(i,j), d[m](i,j) = d_m g_ij, dd[m][l](i,j) = d_m d_l g_ij.
struct MetricJets {
  Mat value;
  std::vector<Mat> d;
  std::vector<std::vector<Mat>> dd;
};

// Value and first derivatives only.
struct MetricFirstJets {
  Mat value;
  std::vector<Mat> d;
};

// Symmetric matrix of expressions with a declared signature. The upper
// triangle is stored once, so components (i,j) and (j,i) are the same
// expression object.
class MetricField {
 public:
  MetricField(SymbolsPtr symbols, std::vector<ScalarExpr> upper,
              Signature sig);

  // Builds from an upper-triangle (or full, consistency-checked) grid of
  // expression strings.
  static MetricField from_strings(SymbolsPtr symbols,
                                  const std::vector<std::vector<std::string>>& rows,
                                  Signature sig);

  int dim() const { return dim_; }
  const SymbolsPtr& symbols() const { return symbols_; }
  Signature signature() const { return signature_; }
  const ScalarExpr& component(int i, int j) const;

  // Raw component values, no invertibility or signature check.
  Mat value_at(const Point& pt, const Bindings& binds) const;
  MetricFirstJets first_jets_at(const Point& pt, const Bindings& binds) const;
  MetricJets jets_at(const Point& pt, const Bindings& binds) const;

 private:
  int dim_;
  SymbolsPtr symbols_;
  std::vector<ScalarExpr> upper_;  // row-major upper triangle, i <= j
  Signature signature_;
};

// Covector of expressions.
class OneFormField {
 public:
  OneFormField(SymbolsPtr symbols, std::vector<ScalarExpr> components);
  static OneFormField from_strings(SymbolsPtr symbols,
                                   const std::vector<std::string>& comps);

  int dim() const { return static_cast<int>(components_.size()); }
  const SymbolsPtr& symbols() const { return symbols_; }
  const ScalarExpr& component(int i) const;

  Vec value_at(const Point& pt, const Bindings& binds) const;
  // grad(m, j) = d_m psi_j
  Mat gradient_at(const Point& pt, const Bindings& binds) const;

 private:
  SymbolsPtr symbols_;
  std::vector<ScalarExpr> components_;
};

// Affine covering-space automorphism x -> Ax + b.
class DeckMap {
 public:
  DeckMap(Mat linear, Vec translation);

  static DeckMap translation(Vec b);

  int dim() const { return static_cast<int>(translation_.size()); }
  const Mat& linear() const { return linear_; }
  const Mat& inverse_linear() const { return inverse_linear_; }
  const Vec& offset() const { return translation_; }

  Point apply(const Point& p) const { return linear_ * p + translation_; }
  Point apply_inverse(const Point& p) const {
    return inverse_linear_ * (p - translation_);
  }
  Vec push_vector(const Vec& v) const { return linear_ * v; }

  DeckMap inverse() const;
  // Composition acting as first `inner`, then `*this`.
  DeckMap after(const DeckMap& inner) const;

 private:
  Mat linear_;
  Mat inverse_linear_;
  Vec translation_;
};

// The quotient manifold description: cover dimension, chart names, deck
// generators, and the basepoint used for loops and sampling.
struct QuotientSpec {
  int dim = 0;
  std::vector<std::string> coords;
  std::vector<DeckMap> generators;
  Point basepoint;

  void validate() const;
};

// Evaluated matrix with invertibility and declared-signature checks.
Mat metric_at(const MetricField& h, const Point& pt, const Bindings& binds);
Mat inverse_metric_at(const MetricField& h, const Point& pt,
                      const Bindings& binds);

// (d psi)_ij = d_i psi_j - d_j psi_i, from jets.
Mat closedness_residual(const OneFormField& w, const Point& pt,
                        const Bindings& binds);

// Max-norm of (phi* field)(pt) - field(pt); covectors pull back by A^T,
// bilinear forms by A^T (.) A.
double deck_invariance_residual(const MetricField& h, const DeckMap& phi,
                                const Point& pt, const Bindings& binds);
double deck_invariance_residual(const OneFormField& w, const DeckMap& phi,
                                const Point& pt, const Bindings& binds);
// Scalar fields pull back by composition.
double deck_invariance_residual(const ScalarExpr& f, const DeckMap& phi,
                                const Point& pt, const Bindings& binds);

}  // namespace weyl
