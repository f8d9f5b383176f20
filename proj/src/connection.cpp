#include "weyl/connection.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "weyl/error.hpp"
#include "weyl/transport.hpp"

namespace weyl {

double Christoffels::max_abs_entry() const {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Levi-Civita Gamma from metric values and first derivatives; when `dd` and
// `jets` are given, also d Gamma (second derivatives of g, first of g^-1).
void levi_civita_eval(const Mat& value, const std::vector<Mat>& d,
                      const std::vector<std::vector<Mat>>* dd,
                      Christoffels* gamma, ChristoffelJets* jets) {
  const int n = static_cast<int>(value.rows());
  const Mat ginv = invert_checked(value, "metric");

  std::vector<Mat> dginv;  // d_m g^-1 = -g^-1 (d_m g) g^-1
  if (jets) {
    dginv.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m)
      dginv.push_back(Mat(-ginv * d[static_cast<std::size_t>(m)] * ginv));
  }

  auto C = [&](int l, int i, int j) {
    return d[static_cast<std::size_t>(i)](l, j) +
           d[static_cast<std::size_t>(j)](l, i) -
           d[static_cast<std::size_t>(l)](i, j);
  };
  // d_m C_lij, using d_m d_i g_lj symmetric in (m, i)
  auto dC = [&](int m, int l, int i, int j) {
    return (*dd)[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)](l, j) +
           (*dd)[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)](l, i) -
           (*dd)[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)](i, j);
  };

  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l) sum += ginv(k, l) * C(l, i, j);
        sum *= 0.5;
        if (gamma) {
          gamma->at(k, i, j) = sum;
          gamma->at(k, j, i) = sum;
        }
        if (jets) {
          jets->gamma.at(k, i, j) = sum;
          jets->gamma.at(k, j, i) = sum;
          for (int m = 0; m < n; ++m) {
            double dsum = 0.0;
            for (int l = 0; l < n; ++l)
              dsum += dginv[static_cast<std::size_t>(m)](k, l) * C(l, i, j) +
                      ginv(k, l) * dC(m, l, i, j);
            dsum *= 0.5;
            jets->d[static_cast<std::size_t>(m)].at(k, i, j) = dsum;
            jets->d[static_cast<std::size_t>(m)].at(k, j, i) = dsum;
          }
        }
      }
}

// Correction turning Levi-Civita of h into the connection with
// nabla h = h (.) psi.
void weyl_correction_eval(const Mat& value, const std::vector<Mat>& d,
                          const Vec& psi,
                          const Mat& dpsi /* (m, j) = d_m psi_j */,
                          Christoffels* gamma, ChristoffelJets* jets) {
  const int n = static_cast<int>(value.rows());
  const Mat hinv = invert_checked(value, "metric");
  const Vec psi_up = hinv * psi;

  Mat dpsi_up;  // (m, k) = d_m psi^k
  if (jets) {
    dpsi_up = Mat(n, n);
    for (int m = 0; m < n; ++m) {
      const Mat dinv = -hinv * d[static_cast<std::size_t>(m)] * hinv;
      const Vec dup = dinv * psi + hinv * dpsi.row(m).transpose();
      for (int k = 0; k < n; ++k) dpsi_up(m, k) = dup[k];
    }
  }

  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double corr = -0.5 * ((k == i ? psi[j] : 0.0) +
                                    (k == j ? psi[i] : 0.0) -
                                    value(i, j) * psi_up[k]);
        if (gamma) {
          gamma->at(k, i, j) += corr;
          gamma->at(k, j, i) = gamma->at(k, i, j);
        }
        if (jets) {
          jets->gamma.at(k, i, j) += corr;
          jets->gamma.at(k, j, i) = jets->gamma.at(k, i, j);
          for (int m = 0; m < n; ++m) {
            const double dcorr =
                -0.5 * ((k == i ? dpsi(m, j) : 0.0) +
                        (k == j ? dpsi(m, i) : 0.0) -
                        d[static_cast<std::size_t>(m)](i, j) * psi_up[k] -
                        value(i, j) * dpsi_up(m, k));
            auto& slot = jets->d[static_cast<std::size_t>(m)];
            slot.at(k, i, j) += dcorr;
            slot.at(k, j, i) = slot.at(k, i, j);
          }
        }
      }
}

}  // namespace

ConnectionField ConnectionField::explicit_table(SymbolsPtr symbols,
                                                std::vector<ScalarExpr> table) {
  const int n = static_cast<int>(symbols->coords.size());
  if (static_cast<int>(table.size()) != n * n * n)
    throw Error("explicit Christoffel table has the wrong size");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        const auto& lower = table[static_cast<std::size_t>((k * n + i) * n + j)];
        const auto& upper = table[static_cast<std::size_t>((k * n + j) * n + i)];
        if (!structurally_equal(lower, upper))
          throw Error("explicit Christoffel table is not symmetric in the "
                      "lower indices");
      }
  ConnectionField c;
  c.dim_ = n;
  c.provenance_ = Provenance::ExplicitTable;
  c.table_symbols_ = std::move(symbols);
  c.table_ = std::move(table);
  return c;
}

ConnectionField levi_civita(MetricField g) {
  ConnectionField c;
  c.dim_ = g.dim();
  c.provenance_ = ConnectionField::Provenance::LeviCivita;
  c.metric_ = std::move(g);
  return c;
}

ConnectionField weyl_connection(MetricField h, OneFormField psi) {
  if (h.dim() != psi.dim())
    throw Error("metric and one-form dimensions differ");
  ConnectionField c;
  c.dim_ = h.dim();
  c.provenance_ = ConnectionField::Provenance::Weyl;
  c.metric_ = std::move(h);
  c.psi_ = std::move(psi);
  return c;
}

ConnectionField weyl_connection(MetricField h, OneFormField psi,
                                const SampleSpec& samples,
                                const Bindings& binds) {
  UniformSampler rng(samples.seed);
  for (int i = 0; i < samples.count; ++i) {
    const Point pt = sample_point(samples.box, rng);
    const double closed = max_abs(closedness_residual(psi, pt, binds));
    if (closed > 1e-8)
      throw PreflightError(
          "psi is not closed: |d psi| = " + std::to_string(closed) +
          " at sampled point " + std::to_string(i));
  }
  return weyl_connection(std::move(h), std::move(psi));
}

Christoffels ConnectionField::christoffel_at(const Point& pt,
                                             const Bindings& binds) const {
  Christoffels out(dim_);
  switch (provenance_) {
    case Provenance::ExplicitTable: {
      for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
          for (int j = i; j < dim_; ++j) {
            const double v =
                table_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)]
                    .eval(pt, binds);
            out.at(k, i, j) = out.at(k, j, i) = v;
          }
      return out;
    }
    case Provenance::LeviCivita: {
      const MetricFirstJets gj = metric_->first_jets_at(pt, binds);
      levi_civita_eval(gj.value, gj.d, nullptr, &out, nullptr);
      return out;
    }
    case Provenance::Weyl: {
      const MetricFirstJets hj = metric_->first_jets_at(pt, binds);
      levi_civita_eval(hj.value, hj.d, nullptr, &out, nullptr);
      const Vec psi_v = psi_->value_at(pt, binds);
      weyl_correction_eval(hj.value, hj.d, psi_v, Mat(), &out, nullptr);
      return out;
    }
  }
  throw Error("corrupt connection");
}

ChristoffelJets ConnectionField::christoffel_jets_at(
    const Point& pt, const Bindings& binds) const {
  ChristoffelJets out(dim_);
  switch (provenance_) {
    case Provenance::ExplicitTable: {
      for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
          for (int j = i; j < dim_; ++j) {
            const Jet2 jet =
                table_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)]
                    .eval_jet2(pt, binds);
            out.gamma.at(k, i, j) = out.gamma.at(k, j, i) = jet.val;
            for (int m = 0; m < dim_; ++m) {
              out.d[static_cast<std::size_t>(m)].at(k, i, j) = jet.grad[m];
              out.d[static_cast<std::size_t>(m)].at(k, j, i) = jet.grad[m];
            }
          }
      return out;
    }
    case Provenance::LeviCivita: {
      const MetricJets gj = metric_->jets_at(pt, binds);
      levi_civita_eval(gj.value, gj.d, &gj.dd, nullptr, &out);
      return out;
    }
    case Provenance::Weyl: {
      const MetricJets hj = metric_->jets_at(pt, binds);
      levi_civita_eval(hj.value, hj.d, &hj.dd, nullptr, &out);
      const Vec psi_v = psi_->value_at(pt, binds);
      const Mat dpsi = psi_->gradient_at(pt, binds);
      weyl_correction_eval(hj.value, hj.d, psi_v, dpsi, nullptr, &out);
      return out;
    }
  }
  throw Error("corrupt connection");
}

double nabla_h_residual(const ConnectionField& conn, const MetricField& h,
                        const OneFormField* psi, const Point& pt,
                        const Bindings& binds) {
  const int n = h.dim();
  const MetricJets hj = h.jets_at(pt, binds);
  const Christoffels gamma = conn.christoffel_at(pt, binds);
  const Vec psi_v = psi ? psi->value_at(pt, binds) : Vec(Vec::Zero(n));

  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double r = hj.d[static_cast<std::size_t>(k)](i, j) -
                   hj.value(i, j) * psi_v[k];
        for (int l = 0; l < n; ++l)
          r -= gamma.at(l, k, i) * hj.value(l, j) +
               gamma.at(l, k, j) * hj.value(i, l);
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

double deck_equivariance_residual(const ConnectionField& conn,
                                  const DeckMap& phi, const Point& pt,
                                  const Bindings& binds) {
  const int n = conn.dim();
  const Christoffels here = conn.christoffel_at(pt, binds);
  const Christoffels there = conn.christoffel_at(phi.apply(pt), binds);
  const Mat& A = phi.linear();
  const Mat& Ainv = phi.inverse_linear();

  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double pushed = 0.0;
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m)
            for (int q = 0; q < n; ++q)
              pushed += A(k, l) * here.at(l, m, q) * Ainv(m, i) * Ainv(q, j);
        worst = std::max(worst, std::abs(pushed - there.at(k, i, j)));
      }
  return worst;
}

double local_gauge(const OneFormField& psi, const Curve& path,
                   const Bindings& binds) {
  return std::exp(line_integral(psi, path, binds));
}

GaugeFunction::GaugeFunction(const OneFormField& psi, Curve path,
                             const Bindings& binds)
    : path_(std::move(path)),
      base_(path_.start(binds)),
      value_(local_gauge(psi, path_, binds)) {}

}  // namespace weyl
