#pragma once

// Bounded random expressions over a small chart, with a validity filter so
// finite-difference oracles stay well conditioned at the chosen point.

#include <optional>
#include <string>
#include <vector>

#include <weyl/expr.hpp>
#include <weyl/sampling.hpp>

namespace weyl::testing {

class RandomExprGen {
 public:
  RandomExprGen(SymbolsPtr symbols, std::uint64_t seed)
      : symbols_(std::move(symbols)), rng_(seed) {}

  ScalarExpr expr(int depth) {
    if (depth <= 0) return leaf();
    switch (rng_.index(9)) {
      case 0:
        return expr(depth - 1) + expr(depth - 1);
      case 1:
        return expr(depth - 1) - expr(depth - 1);
      case 2:
        return expr(depth - 1) * expr(depth - 1);
      case 3:
        return expr(depth - 1) / positive(depth - 1);
      case 4:
        return -expr(depth - 1);
      case 5:
        return sin(expr(depth - 1));
      case 6:
        return cos(expr(depth - 1));
      case 7: {
        switch (rng_.index(3)) {
          case 0:
            return log(positive(depth - 1));
          case 1:
            return sqrt(positive(depth - 1));
          default:
            return exp(number(0.25) * expr(depth - 1));
        }
      }
      default: {
        static const double exponents[] = {2.0, 3.0, -1.0, -2.0, 0.5, 1.5};
        const double e = exponents[rng_.index(6)];
        const bool integral = e == 2.0 || e == 3.0;
        return pow(integral ? expr(depth - 1) : positive(depth - 1), e);
      }
    }
  }

  // A sample point in the safe box, and an expression valid around it.
  struct Case {
    ScalarExpr e;
    Point pt;
  };

  Case valid_case(int depth, const Bindings& binds, double magnitude_cap = 100.0) {
    const int n = static_cast<int>(symbols_->coords.size());
    for (int attempt = 0; attempt < 200; ++attempt) {
      ScalarExpr e = expr(depth);
      Point pt(n);
      for (int i = 0; i < n; ++i) pt[i] = rng_.in(-1.5, 1.5);
      try {
        const Jet2 jet = e.eval_jet2(pt, binds);
        if (!std::isfinite(jet.val) || std::abs(jet.val) > magnitude_cap)
          continue;
        if (!jet.grad.allFinite() || max_abs(jet.grad) > 1e3) continue;
        if (!jet.hess.allFinite() || max_abs(jet.hess) > 1e4) continue;
        // keep a margin so +-h stencils stay inside every domain
        bool stencil_ok = true;
        for (int i = 0; i < n && stencil_ok; ++i)
          for (double d : {-2e-4, 2e-4}) {
            Point q = pt;
            q[i] += d;
            try {
              (void)e.eval(q, binds);
            } catch (const EvalDomainError&) {
              stencil_ok = false;
              break;
            }
          }
        if (!stencil_ok) continue;
        return {std::move(e), std::move(pt)};
      } catch (const EvalDomainError&) {
        continue;
      }
    }
    throw Error("random expression generator failed to produce a valid case");
  }

 private:
  ScalarExpr number(double v) { return ScalarExpr::number(v, symbols_); }

  ScalarExpr leaf() {
    const std::size_t ncoord = symbols_->coords.size();
    const std::size_t nparam = symbols_->params.size();
    const std::size_t pick = rng_.index(2 + ncoord + nparam);
    if (pick < 2) return number(std::round(rng_.in(-2.0, 2.0) * 8.0) / 8.0);
    if (pick < 2 + ncoord)
      return ScalarExpr::coordinate(static_cast<int>(pick - 2), symbols_);
    return ScalarExpr::parameter(static_cast<int>(pick - 2 - ncoord), symbols_);
  }

  // Bounded away from zero: 2 + sin(...) or 2 + cos(...) in [1, 3].
  ScalarExpr positive(int depth) {
    ScalarExpr inner = depth <= 0 ? leaf() : expr(depth - 1);
    return number(2.0) + (rng_.index(2) ? sin(inner) : cos(inner));
  }

  SymbolsPtr symbols_;
  UniformSampler rng_;
};

}  // namespace weyl::testing
