#pragma once

namespace weyl::detail {

// Out-of-line libm entry points. The plain evaluator and the jet value
// channel must produce bit-identical values; keeping these calls opaque
// stops the compiler from pairing a sin with a nearby cos into sincos()
// (whose last-ulp rounding can differ) in one path but not the other.
double r_sin(double x);
double r_cos(double x);

}  // namespace weyl::detail
