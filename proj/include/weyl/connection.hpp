#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "weyl/curve.hpp"
#include "weyl/fields.hpp"
#include "weyl/sampling.hpp"

namespace weyl {

// Christoffel symbols at one point, symmetric in the lower index pair by
// construction. Layout: g[(k*n + i)*n + j].
struct Christoffels {
  int n = 0;
  std::vector<double> g;

  explicit Christoffels(int dim)
      : n(dim), g(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}
  double& at(int k, int i, int j) {
    return g[static_cast<std::size_t>((k * n + i) * n + j)];
  }
  double at(int k, int i, int j) const {
    return g[static_cast<std::size_t>((k * n + i) * n + j)];
  }
  double max_abs_entry() const;
};

// Christoffels plus their first derivatives d[m] = d_m Gamma.
struct ChristoffelJets {
  Christoffels gamma;
  std::vector<Christoffels> d;

  explicit ChristoffelJets(int dim)
      : gamma(dim), d(static_cast<std::size_t>(dim), Christoffels(dim)) {}
};

// Pointwise sampling used by constructors that validate their inputs.
struct SampleSpec {
  SampleBox box;
  int count = 100;
  std::uint64_t seed = 0;
};

// A symmetric connection given by its Christoffel symbols.  Carries its
// provenance: Levi-Civita of a metric, the (h, psi) construction, or an
// explicit expression table.  Derivatives of Gamma come from second-order
// jets of the ingredient fields (for the explicit table, from jets of the
// table entries).
class ConnectionField {
 public:
  enum class Provenance { LeviCivita, Weyl, ExplicitTable };

  Christoffels christoffel_at(const Point& pt, const Bindings& binds) const;
  ChristoffelJets christoffel_jets_at(const Point& pt,
                                      const Bindings& binds) const;

  int dim() const { return dim_; }
  Provenance provenance() const { return provenance_; }
  const MetricField* metric() const {
    return metric_ ? &*metric_ : nullptr;
  }
  const OneFormField* one_form() const { return psi_ ? &*psi_ : nullptr; }

  // Gamma^k_ij with lower indices symmetrized storage of expressions, k
  // outermost; entries must already satisfy Gamma^k_ij = Gamma^k_ji.
  static ConnectionField explicit_table(SymbolsPtr symbols,
                                        std::vector<ScalarExpr> table);

  friend ConnectionField levi_civita(MetricField g);
  friend ConnectionField weyl_connection(MetricField h, OneFormField psi);

 private:
  ConnectionField() = default;

  int dim_ = 0;
  Provenance provenance_ = Provenance::LeviCivita;
  std::optional<MetricField> metric_;
  std::optional<OneFormField> psi_;
  SymbolsPtr table_symbols_;
  std::vector<ScalarExpr> table_;  // n^3 entries, (k, i, j) row-major
};

// Levi-Civita connection of g:
//   Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)
ConnectionField levi_civita(MetricField g);

// The unique symmetric connection with nabla h = h (.) psi, built as
// Levi-Civita of h plus the correction
//   -1/2 (delta^k_i psi_j + delta^k_j psi_i - h_ij psi^k),  psi^k = h^kl psi_l.
// The closed form is validated by nabla_h_residual in the test suites, and
// by the checking overload below at construction time.
ConnectionField weyl_connection(MetricField h, OneFormField psi);

// Same, with a sampled preflight: psi closedness above 1e-8 at any sampled
// point aborts with a diagnostic.
ConnectionField weyl_connection(MetricField h, OneFormField psi,
                                const SampleSpec& samples,
                                const Bindings& binds);

// Max-norm over i,j,k of  d_k h_ij - Gamma^l_ki h_lj - Gamma^l_kj h_il
//                        - h_ij psi_k.
// Passing psi == nullptr checks plain metric compatibility (psi = 0).
double nabla_h_residual(const ConnectionField& conn, const MetricField& h,
                        const OneFormField* psi, const Point& pt,
                        const Bindings& binds);
inline double nabla_h_residual(const ConnectionField& conn,
                               const MetricField& h, const OneFormField& psi,
                               const Point& pt, const Bindings& binds) {
  return nabla_h_residual(conn, h, &psi, pt, binds);
}

// Max-norm of A^k_l Gamma^l_mn(pt) (A^-1)^m_i (A^-1)^n_j - Gamma^k_ij(phi pt)
// for the affine phi (no inhomogeneous term).
double deck_equivariance_residual(const ConnectionField& conn,
                                  const DeckMap& phi, const Point& pt,
                                  const Bindings& binds);

// mu(pt) = exp( integral of psi along path ), normalized so that
// mu(path start) = 1. The path is part of the answer: globally mu is only
// defined per homotopy class.
double local_gauge(const OneFormField& psi, const Curve& path,
                   const Bindings& binds);

// A local gauge pinned to its defining path. There is deliberately no
// global mu(point) accessor: away from the simply-connected case the value
// depends on the homotopy class of the path, so the path stays part of the
// object.
class GaugeFunction {
 public:
  GaugeFunction(const OneFormField& psi, Curve path, const Bindings& binds);

  double value() const { return value_; }             // mu at the path end
  const Point& basepoint() const { return base_; }    // where mu = 1
  const Curve& path() const { return path_; }

 private:
  Curve path_;
  Point base_;
  double value_;
};

}  // namespace weyl
