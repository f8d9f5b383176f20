#pragma once

#include <cmath>

#include "weyl/error.hpp"
#include "weyl/linalg.hpp"
#include "weyl/real_math.hpp"

namespace weyl {

// First-order forward-mode jet: value and gradient. The cheap path for
// everything that only needs one derivative order (Christoffel values,
// tangents, closedness). Same value-channel contract as Jet2.
struct Jet1 {
  double val = 0.0;
  Vec grad;

  Jet1() = default;
  Jet1(double v, Vec g) : val(v), grad(std::move(g)) {}

  static Jet1 constant(double v, int n) { return {v, Vec::Zero(n)}; }
  static Jet1 variable(double v, int n, int i) {
    Jet1 j = constant(v, n);
    j.grad[i] = 1.0;
    return j;
  }
};

inline Jet1 operator-(const Jet1& a) { return {-a.val, -a.grad}; }
inline Jet1 operator+(const Jet1& a, const Jet1& b) {
  return {a.val + b.val, a.grad + b.grad};
}
inline Jet1 operator-(const Jet1& a, const Jet1& b) {
  return {a.val - b.val, a.grad - b.grad};
}
inline Jet1 operator*(const Jet1& a, const Jet1& b) {
  return {a.val * b.val, a.val * b.grad + b.val * a.grad};
}
inline Jet1 operator/(const Jet1& a, const Jet1& b) {
  if (b.val == 0.0) throw EvalDomainError("division by zero");
  const double q = a.val / b.val;
  return {q, (a.grad - q * b.grad) / b.val};
}

inline Jet1 chain(double u, double du, const Jet1& f) {
  return {u, du * f.grad};
}

inline Jet1 sin(const Jet1& f) {
  return chain(detail::r_sin(f.val), detail::r_cos(f.val), f);
}
inline Jet1 cos(const Jet1& f) {
  return chain(detail::r_cos(f.val), -detail::r_sin(f.val), f);
}
inline Jet1 exp(const Jet1& f) {
  const double e = std::exp(f.val);
  return chain(e, e, f);
}
inline Jet1 log(const Jet1& f) {
  if (!(f.val > 0.0)) throw EvalDomainError("log of non-positive value");
  return chain(std::log(f.val), 1.0 / f.val, f);
}
inline Jet1 sqrt(const Jet1& f) {
  if (f.val < 0.0) throw EvalDomainError("sqrt of negative value");
  if (f.val == 0.0)
    throw EvalDomainError("derivative of sqrt is singular at zero");
  const double r = std::sqrt(f.val);
  return chain(r, 0.5 / r, f);
}
inline Jet1 pow(const Jet1& f, double c) {
  const bool integral = (c == std::floor(c)) && std::abs(c) < 1e15;
  if (!integral && !(f.val > 0.0))
    throw EvalDomainError("fractional power of non-positive base");
  if (integral && c < 0.0 && f.val == 0.0)
    throw EvalDomainError("negative power of zero");
  const double v = std::pow(f.val, c);
  const double d1 = (c == 0.0) ? 0.0 : c * std::pow(f.val, c - 1.0);
  return chain(v, d1, f);
}

// Second-order forward-mode jet: value, gradient and Hessian with respect
// to the n chart coordinates. The Hessian stays exactly symmetric because
// every rule below builds it from symmetric pieces (u v^T + v u^T terms are
// entrywise-commuted sums, which IEEE addition keeps equal).
//
// The value channel applies exactly the same double operation as a plain
// double evaluation of the same tree, so jet.val matches eval() bit for
// bit.
struct Jet2 {
  double val = 0.0;
  Vec grad;
  Mat hess;

  Jet2() = default;
  Jet2(double v, Vec g, Mat h)
      : val(v), grad(std::move(g)), hess(std::move(h)) {}

  static Jet2 constant(double v, int n) {
    return {v, Vec::Zero(n), Mat::Zero(n, n)};
  }
  static Jet2 variable(double v, int n, int i) {
    Jet2 j = constant(v, n);
    j.grad[i] = 1.0;
    return j;
  }

  int dim() const { return static_cast<int>(grad.size()); }
};

// u v^T + v u^T with entries (i,j) and (j,i) produced by the same two
// multiplies and one add, so the result is symmetric to the last bit.
inline Mat sym_outer(const Vec& u, const Vec& v) {
  const auto n = u.size();
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) m(i, j) = m(j, i) = u[i] * v[j] + v[i] * u[j];
  return m;
}

// u u^T with mirrored entries copied, not recomputed: Eigen's product
// kernels may scale one factor and lose bitwise symmetry.
inline Mat outer_self(const Vec& u) {
  const auto n = u.size();
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) m(i, j) = m(j, i) = u[i] * u[j];
  return m;
}

inline Jet2 operator-(const Jet2& a) { return {-a.val, -a.grad, -a.hess}; }

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.val + b.val, a.grad + b.grad, a.hess + b.hess};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.val - b.val, a.grad - b.grad, a.hess - b.hess};
}

// (uv)'' = u''v + u'v'^T + v'u'^T + uv''
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.val * b.val, a.val * b.grad + b.val * a.grad,
          a.val * b.hess + b.val * a.hess + sym_outer(a.grad, b.grad)};
}

// q = a/b: q' = (a' - q b')/b, q'' = (a'' - q'b'^T - b'q'^T - q b'')/b
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.val == 0.0) throw EvalDomainError("division by zero");
  const double q = a.val / b.val;
  Vec dq = (a.grad - q * b.grad) / b.val;
  Mat ddq = (a.hess - sym_outer(dq, b.grad) - q * b.hess) / b.val;
  return {q, std::move(dq), std::move(ddq)};
}

// u(f)'' = u''(f) f'f'^T + u'(f) f''
inline Jet2 chain(double u, double du, double ddu, const Jet2& f) {
  return {u, du * f.grad, ddu * outer_self(f.grad) + du * f.hess};
}

inline Jet2 sin(const Jet2& f) {
  const double s = detail::r_sin(f.val), c = detail::r_cos(f.val);
  return chain(s, c, -s, f);
}

inline Jet2 cos(const Jet2& f) {
  const double s = detail::r_sin(f.val), c = detail::r_cos(f.val);
  return chain(c, -s, -c, f);
}

inline Jet2 exp(const Jet2& f) {
  const double e = std::exp(f.val);
  return chain(e, e, e, f);
}

inline Jet2 log(const Jet2& f) {
  if (!(f.val > 0.0)) throw EvalDomainError("log of non-positive value");
  return chain(std::log(f.val), 1.0 / f.val, -1.0 / (f.val * f.val), f);
}

inline Jet2 sqrt(const Jet2& f) {
  if (f.val < 0.0) throw EvalDomainError("sqrt of negative value");
  if (f.val == 0.0)
    throw EvalDomainError("derivative of sqrt is singular at zero");
  const double r = std::sqrt(f.val);
  return chain(r, 0.5 / r, -0.25 / (r * f.val), f);
}

// Power with a constant exponent. Non-integer exponents are only defined
// for positive bases; negative integer exponents exclude base zero.
inline Jet2 pow(const Jet2& f, double c) {
  const bool integral = (c == std::floor(c)) && std::abs(c) < 1e15;
  if (!integral && !(f.val > 0.0))
    throw EvalDomainError("fractional power of non-positive base");
  if (integral && c < 0.0 && f.val == 0.0)
    throw EvalDomainError("negative power of zero");
  const double v = std::pow(f.val, c);
  const double d1 = (c == 0.0) ? 0.0 : c * std::pow(f.val, c - 1.0);
  const double d2 =
      (c == 0.0 || c == 1.0) ? 0.0 : c * (c - 1.0) * std::pow(f.val, c - 2.0);
  return chain(v, d1, d2, f);
}

}  // namespace weyl
