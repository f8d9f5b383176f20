#pragma once

#include <optional>
#include <vector>

#include "weyl/connection.hpp"
#include "weyl/curve.hpp"
#include "weyl/fields.hpp"

namespace weyl {

struct QuadratureOptions {
  int subintervals = 10000;  // composite Simpson panels across the curve
  double rel_tol = 1e-9;     // Richardson estimate must reach this
  int max_refinements = 4;
};

struct TransportOptions {
  double step = 1e-3;      // in curve parameter
  double gate_tol = 1e-8;  // step-halving convergence gate
};

struct GeodesicOptions {
  double step = 1e-3;
  double gate_tol = 1e-7;
  int stride = 10;          // record every stride-th step
  double blowup = 1e12;     // abort when a coordinate passes this
};

// integral of psi over gamma by composite Simpson quadrature with a
// Richardson error estimate against the half-resolution rule.
double line_integral(const OneFormField& psi, const Curve& gamma,
                     const Bindings& binds, const QuadratureOptions& = {});

// Straight cover segment from the basepoint to its image under generator
// `index`; projects to a closed loop on the quotient. The identity
// generator yields a zero-length curve (Curve::zero_length).
Curve generator_loop(const QuotientSpec& spec, int index);
Curve generator_loop(const QuotientSpec& spec, int index, const Point& base);

// Per-generator loop periods of psi.
Vec periods(const OneFormField& psi, const QuotientSpec& spec,
            const Bindings& binds, const QuadratureOptions& = {});

enum class MetricityVerdict { GloballyMetric, LocallyMetricOnly };

// All periods below tol means psi is exact and the connection is globally
// metric.
MetricityVerdict classify_exactness(const Vec& period_vector,
                                    double tol = 1e-8);

// Parallel transport of a vector along gamma:
//   dV^k/ds + Gamma^k_ij gdot^i V^j = 0,
// fixed-step RK4 with a step-halving convergence gate on the endpoint.
Vec transport_vector(const ConnectionField& conn, const Curve& gamma,
                     const Vec& v0, const Bindings& binds,
                     const TransportOptions& = {});

// Parallel transport of a symmetric bilinear form:
//   dB_ij/ds - Gamma^l_ik gdot^k B_lj - Gamma^l_jk gdot^k B_il = 0;
// only the upper triangle is integrated, so symmetry is exact.
Mat transport_bilinear(const ConnectionField& conn, const Curve& gamma,
                       const Mat& B0, const Bindings& binds,
                       const TransportOptions& = {});

// Result of following the local parallel metric around a loop and
// comparing, after deck pullback, with its start value.
struct HolonomyScale {
  // False is the distinguished "transported form is not a positive multiple
  // of the start form" outcome (degenerate connections), not an error.
  bool positive_multiple = true;
  double scale = 1.0;        // least-squares c with transported ~ c * B0
  double fit_residual = 0.0; // relative Frobenius misfit of that c
  bool sign_flip = false;    // some diagonal direction changed causal type
  std::optional<double> period;          // when psi was supplied
  std::optional<double> expected_scale;  // exp(-period)
  bool matches_expected = true;          // |c - expected| < 1e-6 * c
};

// B0 is mu^-1 h at the loop start with mu normalized to 1 there, i.e.
// h(start). `deck` identifies the loop end with its start on the quotient.
HolonomyScale holonomy_scale(const ConnectionField& conn, const MetricField& h,
                             const OneFormField* psi, const Curve& loop,
                             const DeckMap& deck, const Bindings& binds,
                             const TransportOptions& topt = {},
                             const QuadratureOptions& qopt = {});

HolonomyScale holonomy_scale_for_generator(const ConnectionField& conn,
                                           const MetricField& h,
                                           const OneFormField* psi,
                                           const QuotientSpec& spec, int index,
                                           const Bindings& binds,
                                           const TransportOptions& topt = {},
                                           const QuadratureOptions& qopt = {});

// Relative mismatch between the scale of the composed word's loop and the
// product of the word's generator scales. word[0] acts first.
double cocycle_check(const ConnectionField& conn, const MetricField& h,
                     const OneFormField* psi, const QuotientSpec& spec,
                     const std::vector<int>& word, const Bindings& binds,
                     const TransportOptions& topt = {},
                     const QuadratureOptions& qopt = {});

struct GeodesicSample {
  double s;
  Point x;
  Vec v;
};

struct Trajectory {
  std::vector<GeodesicSample> samples;  // always includes start and end
  bool truncated = false;               // blow-up guard fired
  double gate_error = 0.0;              // endpoint step-halving difference
};

// d^2 x^k/ds^2 + Gamma^k_ij xdot^i xdot^j = 0 from (x0, v0), fixed-step
// RK4 over [0, s_max].
Trajectory geodesic(const ConnectionField& conn, const Point& x0,
                    const Vec& v0, double s_max, const Bindings& binds,
                    const GeodesicOptions& = {});

// Aggregate used by classification commands and tests.
struct GeneratorHolonomy {
  double period = 0.0;
  HolonomyScale scale;
};

struct CocycleEntry {
  std::vector<int> word;
  double residual = 0.0;
};

struct HolonomyReport {
  std::vector<GeneratorHolonomy> generators;
  MetricityVerdict verdict = MetricityVerdict::GloballyMetric;
  std::vector<CocycleEntry> cocycles;  // all length-2 words
};

HolonomyReport holonomy_report(const ConnectionField& conn,
                               const MetricField& h, const OneFormField& psi,
                               const QuotientSpec& spec, const Bindings& binds,
                               double exactness_tol = 1e-8,
                               const TransportOptions& topt = {},
                               const QuadratureOptions& qopt = {});

}  // namespace weyl
