#include "weyl/transport.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "weyl/error.hpp"

namespace weyl {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
  // composite Simpson over `panels` parabolic panels (2*panels intervals)
  const int m = 2 * panels;
  const double h = (b - a) / m;
  double sum = f(a) + f(b);
  for (int i = 1; i < m; ++i) sum += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// Christoffels and tangent along a fixed curve, cached on (piece, s). RK4
// evaluates the two middle stages at the same s, and the last stage of one
// step at the first stage's s of the next, so a two-slot cache roughly
// halves the Christoffel evaluations.
class CurveFrame {
 public:
  CurveFrame(const ConnectionField& conn, const Curve& curve,
             const Bindings& binds)
      : conn_(conn), curve_(curve), binds_(binds) {}

  struct Slot {
    std::size_t piece = static_cast<std::size_t>(-1);
    double s = std::numeric_limits<double>::quiet_NaN();
    Christoffels gamma{0};
    Vec tangent;
  };

  const Slot& at(std::size_t piece, double s) {
    for (const Slot& slot : slots_)
      if (slot.s == s && slot.piece == piece) return slot;
    Slot& slot = slots_[next_];
    next_ = 1 - next_;
    slot.piece = piece;
    slot.s = s;
    slot.gamma = conn_.christoffel_at(curve_.at(s, binds_), binds_);
    slot.tangent = curve_.tangent_in(piece, s, binds_);
    return slot;
  }

 private:
  const ConnectionField& conn_;
  const Curve& curve_;
  const Bindings& binds_;
  std::array<Slot, 2> slots_;
  int next_ = 0;
};

// Fixed-step RK4 over one smooth parameter interval. The derivative sees
// the exact same stage parameter values across steps, for the cache above.
template <class Rhs>
void rk4_interval(Rhs&& rhs, std::size_t piece, Vec& y, double a, double b,
                  double step) {
  const double len = b - a;
  if (len <= 0.0) return;
  const int nsteps = std::max(1, static_cast<int>(std::ceil(len / step)));
  const double h = len / nsteps;
  const auto n = y.size();
  Vec k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (int i = 0; i < nsteps; ++i) {
    const double s0 = a + h * i;
    const double s1 = a + h * (i + 1);
    const double sh = s0 + 0.5 * h;
    rhs(piece, s0, y, k1);
    tmp = y + 0.5 * h * k1;
    rhs(piece, sh, tmp, k2);
    tmp = y + 0.5 * h * k2;
    rhs(piece, sh, tmp, k3);
    tmp = y + h * k3;
    rhs(piece, s1, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

template <class Rhs>
Vec rk4_over_curve(const Curve& curve, Rhs&& rhs, Vec y0, double step) {
  const auto& breaks = curve.breakpoints();
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    rk4_interval(rhs, i, y0, breaks[i], breaks[i + 1], step);
  return y0;
}

// Runs the integration at `step` and `step/2` and enforces the gate.
template <class MakeRhs>
Vec gated_transport(const Curve& curve, MakeRhs&& make_rhs, const Vec& y0,
                    const TransportOptions& opt, const char* what) {
  auto coarse_rhs = make_rhs();
  const Vec coarse = rk4_over_curve(curve, coarse_rhs, y0, opt.step);
  auto fine_rhs = make_rhs();
  const Vec fine = rk4_over_curve(curve, fine_rhs, y0, opt.step / 2.0);
  const double diff = max_abs(Vec(fine - coarse));
  if (diff > opt.gate_tol * std::max(1.0, max_abs(fine)))
    throw ConvergenceError(std::string(what) +
                           ": step-halving gate failed, difference " +
                           std::to_string(diff));
  return fine;
}

int pack_size(int n) { return n * (n + 1) / 2; }

Vec pack_upper(const Mat& B) {
  const int n = static_cast<int>(B.rows());
  Vec out(pack_size(n));
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out[idx++] = B(i, j);
  return out;
}

Mat unpack_upper(const Vec& y, int n) {
  Mat B(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) B(i, j) = B(j, i) = y[idx++];
  return B;
}

}  // namespace

double line_integral(const OneFormField& psi, const Curve& gamma,
                     const Bindings& binds, const QuadratureOptions& opt) {
  if (psi.dim() != gamma.dim())
    throw Error("one-form and curve dimensions differ");

  const auto& breaks = gamma.breakpoints();
  const double total = gamma.s_end() - gamma.s_begin();
  if (total <= 0.0) return 0.0;

  auto run = [&](int panels_total) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i], b = breaks[i + 1];
      auto integrand = [&, i](double s) {
        return psi.value_at(gamma.at(s, binds), binds)
            .dot(gamma.tangent_in(i, s, binds));
      };
      const int panels = std::max(
          1, static_cast<int>(std::ceil(panels_total * (b - a) / total)));
      acc += simpson(integrand, a, b, panels);
    }
    return acc;
  };

  int panels = std::max(2, opt.subintervals / 2);  // panels = intervals / 2
  for (int attempt = 0; attempt <= opt.max_refinements; ++attempt) {
    const double coarse = run(panels / 2);
    const double fine = run(panels);
    const double err = std::abs(fine - coarse) / 15.0;
    if (err <= opt.rel_tol * std::max(1.0, std::abs(fine))) return fine;
    panels *= 2;
  }
  throw ConvergenceError("line integral did not reach the requested accuracy");
}

Curve generator_loop(const QuotientSpec& spec, int index) {
  return generator_loop(spec, index, spec.basepoint);
}

Curve generator_loop(const QuotientSpec& spec, int index, const Point& base) {
  if (index < 0 || index >= static_cast<int>(spec.generators.size()))
    throw Error("generator index out of range");
  const DeckMap& g = spec.generators[static_cast<std::size_t>(index)];
  return Curve::segment(base, g.apply(base));
}

Vec periods(const OneFormField& psi, const QuotientSpec& spec,
            const Bindings& binds, const QuadratureOptions& opt) {
  Vec out(static_cast<Eigen::Index>(spec.generators.size()));
  for (int i = 0; i < out.size(); ++i)
    out[i] = line_integral(psi, generator_loop(spec, static_cast<int>(i)),
                           binds, opt);
  return out;
}

MetricityVerdict classify_exactness(const Vec& period_vector, double tol) {
  return max_abs(period_vector) < tol ? MetricityVerdict::GloballyMetric
                                      : MetricityVerdict::LocallyMetricOnly;
}

Vec transport_vector(const ConnectionField& conn, const Curve& gamma,
                     const Vec& v0, const Bindings& binds,
                     const TransportOptions& opt) {
  const int n = conn.dim();
  if (gamma.dim() != n || v0.size() != n)
    throw Error("transport dimension mismatch");

  auto make_rhs = [&]() {
    return [frame = CurveFrame(conn, gamma, binds), n](
               std::size_t piece, double s, const Vec& y, Vec& dy) mutable {
      const auto& f = frame.at(piece, s);
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            acc -= f.gamma.at(k, i, j) * f.tangent[i] * y[j];
        dy[k] = acc;
      }
    };
  };
  return gated_transport(gamma, make_rhs, v0, opt, "vector transport");
}

Mat transport_bilinear(const ConnectionField& conn, const Curve& gamma,
                       const Mat& B0, const Bindings& binds,
                       const TransportOptions& opt) {
  const int n = conn.dim();
  if (gamma.dim() != n || B0.rows() != n || B0.cols() != n)
    throw Error("transport dimension mismatch");
  if (max_abs(Mat(B0 - B0.transpose())) != 0.0)
    throw Error("transported bilinear form must be symmetric");

  auto make_rhs = [&]() {
    return [frame = CurveFrame(conn, gamma, binds), n](
               std::size_t piece, double s, const Vec& y, Vec& dy) mutable {
      const auto& f = frame.at(piece, s);
      const Mat B = unpack_upper(y, n);
      int idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
              acc += f.gamma.at(l, i, k) * f.tangent[k] * B(l, j) +
                     f.gamma.at(l, j, k) * f.tangent[k] * B(i, l);
          dy[idx++] = acc;
        }
    };
  };
  const Vec out =
      gated_transport(gamma, make_rhs, pack_upper(B0), opt, "bilinear transport");
  return unpack_upper(out, n);
}

HolonomyScale holonomy_scale(const ConnectionField& conn, const MetricField& h,
                             const OneFormField* psi, const Curve& loop,
                             const DeckMap& deck, const Bindings& binds,
                             const TransportOptions& topt,
                             const QuadratureOptions& qopt) {
  const Mat B0 = h.value_at(loop.start(binds), binds);
  const Mat transported = transport_bilinear(conn, loop, B0, binds, topt);
  const Mat pulled = deck.linear().transpose() * transported * deck.linear();

  HolonomyScale out;
  const double b0_sq = B0.cwiseProduct(B0).sum();
  out.scale = B0.cwiseProduct(pulled).sum() / b0_sq;
  const Mat misfit = pulled - out.scale * B0;
  out.fit_residual = std::sqrt(misfit.cwiseProduct(misfit).sum() / b0_sq);
  out.positive_multiple = out.fit_residual <= 1e-4 && out.scale > 0.0;

  const double scale_ref = std::max(max_abs(B0), max_abs(pulled));
  for (int i = 0; i < B0.rows(); ++i) {
    const double q0 = B0(i, i), q1 = pulled(i, i);
    if (std::abs(q0) > 1e-8 * scale_ref && std::abs(q1) > 1e-8 * scale_ref &&
        q0 * q1 < 0.0)
      out.sign_flip = true;
  }

  if (psi) {
    out.period = line_integral(*psi, loop, binds, qopt);
    out.expected_scale = std::exp(-*out.period);
    out.matches_expected =
        std::abs(out.scale - *out.expected_scale) < 1e-6 * std::abs(out.scale);
  }
  return out;
}

HolonomyScale holonomy_scale_for_generator(const ConnectionField& conn,
                                           const MetricField& h,
                                           const OneFormField* psi,
                                           const QuotientSpec& spec, int index,
                                           const Bindings& binds,
                                           const TransportOptions& topt,
                                           const QuadratureOptions& qopt) {
  return holonomy_scale(conn, h, psi, generator_loop(spec, index),
                        spec.generators[static_cast<std::size_t>(index)], binds,
                        topt, qopt);
}

namespace {
DeckMap compose_word(const QuotientSpec& spec, const std::vector<int>& word) {
  DeckMap composite = spec.generators[static_cast<std::size_t>(word[0])];
  for (std::size_t i = 1; i < word.size(); ++i)
    composite =
        spec.generators[static_cast<std::size_t>(word[i])].after(composite);
  return composite;
}
}  // namespace

double cocycle_check(const ConnectionField& conn, const MetricField& h,
                     const OneFormField* psi, const QuotientSpec& spec,
                     const std::vector<int>& word, const Bindings& binds,
                     const TransportOptions& topt,
                     const QuadratureOptions& qopt) {
  if (word.empty()) throw Error("cocycle word must be nonempty");
  for (int idx : word)
    if (idx < 0 || idx >= static_cast<int>(spec.generators.size()))
      throw Error("cocycle word index out of range");

  double product = 1.0;
  for (int idx : word)
    product *=
        holonomy_scale_for_generator(conn, h, psi, spec, idx, binds, topt, qopt)
            .scale;

  const DeckMap composite = compose_word(spec, word);
  const Curve loop =
      Curve::segment(spec.basepoint, composite.apply(spec.basepoint));
  const double composite_scale =
      holonomy_scale(conn, h, psi, loop, composite, binds, topt, qopt).scale;
  return std::abs(composite_scale - product) / std::abs(product);
}

Trajectory geodesic(const ConnectionField& conn, const Point& x0,
                    const Vec& v0, double s_max, const Bindings& binds,
                    const GeodesicOptions& opt) {
  const int n = conn.dim();
  if (x0.size() != n || v0.size() != n)
    throw Error("geodesic dimension mismatch");
  if (!(s_max > 0.0)) throw Error("geodesic needs s_max > 0");

  auto rhs = [&](const Vec& y, Vec& dy) {
    const Point x = y.head(n);
    const Vec v = y.tail(n);
    const Christoffels gamma = conn.christoffel_at(x, binds);
    dy.head(n) = v;
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc -= gamma.at(k, i, j) * v[i] * v[j];
      dy[n + k] = acc;
    }
  };

  // Returns the final state; when `record` is set, samples every stride-th
  // step plus the endpoint, and flags blow-ups.
  auto integrate = [&](double step, Trajectory* record) {
    const int nsteps = std::max(1, static_cast<int>(std::ceil(s_max / step)));
    const double h = s_max / nsteps;
    Vec y(2 * n);
    y.head(n) = x0;
    y.tail(n) = v0;
    Vec k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), tmp(2 * n);
    if (record) record->samples.push_back({0.0, x0, v0});
    for (int i = 0; i < nsteps; ++i) {
      rhs(y, k1);
      tmp = y + 0.5 * h * k1;
      rhs(tmp, k2);
      tmp = y + 0.5 * h * k2;
      rhs(tmp, k3);
      tmp = y + h * k3;
      rhs(tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double s_now = h * (i + 1);
      if (max_abs(Vec(y.head(n))) > opt.blowup) {
        if (record) {
          record->samples.push_back({s_now, y.head(n), y.tail(n)});
          record->truncated = true;
        }
        return y;
      }
      if (record && ((i + 1) % opt.stride == 0 || i + 1 == nsteps))
        record->samples.push_back({s_now, y.head(n), y.tail(n)});
    }
    return y;
  };

  Trajectory traj;
  const Vec coarse = integrate(opt.step, &traj);
  if (traj.truncated) return traj;
  const Vec fine = integrate(opt.step / 2.0, nullptr);
  traj.gate_error = max_abs(Vec(fine - coarse));
  if (traj.gate_error > opt.gate_tol * std::max(1.0, max_abs(fine)))
    throw ConvergenceError("geodesic step-halving gate failed, difference " +
                           std::to_string(traj.gate_error));
  return traj;
}

HolonomyReport holonomy_report(const ConnectionField& conn,
                               const MetricField& h, const OneFormField& psi,
                               const QuotientSpec& spec, const Bindings& binds,
                               double exactness_tol,
                               const TransportOptions& topt,
                               const QuadratureOptions& qopt) {
  HolonomyReport report;
  const int ngen = static_cast<int>(spec.generators.size());
  Vec period_vec(ngen);
  for (int i = 0; i < ngen; ++i) {
    GeneratorHolonomy gh;
    gh.scale =
        holonomy_scale_for_generator(conn, h, &psi, spec, i, binds, topt, qopt);
    gh.period = gh.scale.period.value();
    period_vec[i] = gh.period;
    report.generators.push_back(std::move(gh));
  }
  report.verdict = classify_exactness(period_vec, exactness_tol);

  // Composite scales computed fresh; generator scales reused from above.
  for (int i = 0; i < ngen; ++i)
    for (int j = 0; j < ngen; ++j) {
      const std::vector<int> word{i, j};
      const double product =
          report.generators[static_cast<std::size_t>(i)].scale.scale *
          report.generators[static_cast<std::size_t>(j)].scale.scale;
      const DeckMap composite = compose_word(spec, word);
      const Curve loop =
          Curve::segment(spec.basepoint, composite.apply(spec.basepoint));
      const double composite_scale =
          holonomy_scale(conn, h, &psi, loop, composite, binds, topt, qopt)
              .scale;
      report.cocycles.push_back(
          {word, std::abs(composite_scale - product) / std::abs(product)});
    }
  return report;
}

}  // namespace weyl
