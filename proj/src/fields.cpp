#include "weyl/fields.hpp"

#include <utility>

#include "weyl/error.hpp"

namespace weyl {

namespace {
int upper_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // row-major upper triangle offset of (i, j), i <= j
  return i * n - i * (i - 1) / 2 + (j - i);
}
}  // namespace

MetricField::MetricField(SymbolsPtr symbols, std::vector<ScalarExpr> upper,
                         Signature sig)
    : symbols_(std::move(symbols)), upper_(std::move(upper)), signature_(sig) {
  dim_ = static_cast<int>(symbols_->coords.size());
  if (static_cast<int>(upper_.size()) != dim_ * (dim_ + 1) / 2)
    throw Error("metric component count does not match dimension");
  if (sig.dim() != dim_)
    throw Error("declared signature does not match dimension");
  for (const auto& e : upper_)
    if (!e) throw Error("metric has an empty component expression");
}

MetricField MetricField::from_strings(
    SymbolsPtr symbols, const std::vector<std::vector<std::string>>& rows,
    Signature sig) {
  const int n = static_cast<int>(symbols->coords.size());
  if (static_cast<int>(rows.size()) != n)
    throw ParseError("metric must have one row per coordinate");
  std::vector<ScalarExpr> upper(static_cast<std::size_t>(n * (n + 1) / 2));
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    const bool full = static_cast<int>(row.size()) == n;
    if (!full && static_cast<int>(row.size()) != n - i)
      throw ParseError("metric row " + std::to_string(i) +
                       " must have " + std::to_string(n) + " (full) or " +
                       std::to_string(n - i) + " (upper-triangle) entries");
    for (int c = 0; c < static_cast<int>(row.size()); ++c) {
      const int j = full ? c : i + c;
      if (j < i) {
        // full grid: the mirror entry must match the one already parsed
        const auto mirror = rows[static_cast<std::size_t>(j)];
        const std::string& other =
            mirror[static_cast<std::size_t>(static_cast<int>(mirror.size()) == n ? i : i - j)];
        if (other != row[static_cast<std::size_t>(c)])
          throw ParseError("metric entries (" + std::to_string(i) + "," +
                           std::to_string(j) + ") and mirror differ");
        continue;
      }
      upper[static_cast<std::size_t>(upper_index(n, i, j))] =
          ScalarExpr::parse(row[static_cast<std::size_t>(c)], symbols);
    }
  }
  return MetricField(symbols, std::move(upper), sig);
}

const ScalarExpr& MetricField::component(int i, int j) const {
  return upper_[static_cast<std::size_t>(upper_index(dim_, i, j))];
}

Mat MetricField::value_at(const Point& pt, const Bindings& binds) const {
  Mat m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) m(i, j) = m(j, i) = component(i, j).eval(pt, binds);
  return m;
}

MetricFirstJets MetricField::first_jets_at(const Point& pt,
                                           const Bindings& binds) const {
  const int n = dim_;
  MetricFirstJets out;
  out.value = Mat(n, n);
  out.d.assign(static_cast<std::size_t>(n), Mat(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Jet1 jet = component(i, j).eval_jet1(pt, binds);
      out.value(i, j) = out.value(j, i) = jet.val;
      for (int m = 0; m < n; ++m)
        out.d[static_cast<std::size_t>(m)](i, j) =
            out.d[static_cast<std::size_t>(m)](j, i) = jet.grad[m];
    }
  return out;
}

MetricJets MetricField::jets_at(const Point& pt, const Bindings& binds) const {
  const int n = dim_;
  MetricJets out;
  out.value = Mat(n, n);
  out.d.assign(static_cast<std::size_t>(n), Mat(n, n));
  out.dd.assign(static_cast<std::size_t>(n),
                std::vector<Mat>(static_cast<std::size_t>(n), Mat(n, n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Jet2 jet = component(i, j).eval_jet2(pt, binds);
      out.value(i, j) = out.value(j, i) = jet.val;
      for (int m = 0; m < n; ++m) {
        out.d[static_cast<std::size_t>(m)](i, j) =
            out.d[static_cast<std::size_t>(m)](j, i) = jet.grad[m];
        for (int l = 0; l < n; ++l) {
          auto& slot = out.dd[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)];
          slot(i, j) = slot(j, i) = jet.hess(m, l);
        }
      }
    }
  return out;
}

OneFormField::OneFormField(SymbolsPtr symbols,
                           std::vector<ScalarExpr> components)
    : symbols_(std::move(symbols)), components_(std::move(components)) {
  if (components_.size() != symbols_->coords.size())
    throw Error("one-form component count does not match dimension");
  for (const auto& e : components_)
    if (!e) throw Error("one-form has an empty component expression");
}

OneFormField OneFormField::from_strings(SymbolsPtr symbols,
                                        const std::vector<std::string>& comps) {
  std::vector<ScalarExpr> parsed;
  parsed.reserve(comps.size());
  for (const auto& text : comps)
    parsed.push_back(ScalarExpr::parse(text, symbols));
  return OneFormField(std::move(symbols), std::move(parsed));
}

const ScalarExpr& OneFormField::component(int i) const {
  return components_[static_cast<std::size_t>(i)];
}

Vec OneFormField::value_at(const Point& pt, const Bindings& binds) const {
  Vec v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = component(i).eval(pt, binds);
  return v;
}

Mat OneFormField::gradient_at(const Point& pt, const Bindings& binds) const {
  const int n = dim();
  Mat g(n, n);
  for (int j = 0; j < n; ++j) {
    const Jet1 jet = component(j).eval_jet1(pt, binds);
    for (int m = 0; m < n; ++m) g(m, j) = jet.grad[m];
  }
  return g;
}

DeckMap::DeckMap(Mat linear, Vec translation)
    : linear_(std::move(linear)), translation_(std::move(translation)) {
  if (linear_.rows() != linear_.cols() ||
      linear_.rows() != translation_.size())
    throw Error("deck map shape mismatch");
  inverse_linear_ = invert_checked(linear_, "deck map linear part");
}

DeckMap DeckMap::translation(Vec b) {
  const auto n = b.size();
  return DeckMap(Mat::Identity(n, n), std::move(b));
}

DeckMap DeckMap::inverse() const {
  return DeckMap(inverse_linear_, -(inverse_linear_ * translation_));
}

DeckMap DeckMap::after(const DeckMap& inner) const {
  return DeckMap(linear_ * inner.linear_,
                 linear_ * inner.translation_ + translation_);
}

void QuotientSpec::validate() const {
  if (dim <= 0) throw Error("quotient dimension must be positive");
  if (static_cast<int>(coords.size()) != dim)
    throw Error("coordinate name count does not match dimension");
  if (basepoint.size() != dim)
    throw Error("basepoint dimension does not match quotient");
  for (const auto& g : generators)
    if (g.dim() != dim) throw Error("generator dimension does not match quotient");
}

Mat metric_at(const MetricField& h, const Point& pt, const Bindings& binds) {
  Mat m = h.value_at(pt, binds);
  const Signature sig = signature_of(m);  // throws when singular
  if (!(sig == h.signature()))
    throw SignatureError("metric signature (" + std::to_string(sig.n_minus) +
                         "," + std::to_string(sig.n_plus) +
                         ") differs from declared (" +
                         std::to_string(h.signature().n_minus) + "," +
                         std::to_string(h.signature().n_plus) + ")");
  return m;
}

Mat inverse_metric_at(const MetricField& h, const Point& pt,
                      const Bindings& binds) {
  return invert_checked(h.value_at(pt, binds), "metric");
}

Mat closedness_residual(const OneFormField& w, const Point& pt,
                        const Bindings& binds) {
  const Mat g = w.gradient_at(pt, binds);
  return g - g.transpose();
}

double deck_invariance_residual(const MetricField& h, const DeckMap& phi,
                                const Point& pt, const Bindings& binds) {
  const Mat pulled =
      phi.linear().transpose() * h.value_at(phi.apply(pt), binds) * phi.linear();
  return max_abs(Mat(pulled - h.value_at(pt, binds)));
}

double deck_invariance_residual(const OneFormField& w, const DeckMap& phi,
                                const Point& pt, const Bindings& binds) {
  const Vec pulled = phi.linear().transpose() * w.value_at(phi.apply(pt), binds);
  return max_abs(Vec(pulled - w.value_at(pt, binds)));
}

double deck_invariance_residual(const ScalarExpr& f, const DeckMap& phi,
                                const Point& pt, const Bindings& binds) {
  return std::abs(f.eval(phi.apply(pt), binds) - f.eval(pt, binds));
}

}  // namespace weyl
