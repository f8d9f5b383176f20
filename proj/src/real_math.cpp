#include "weyl/real_math.hpp"

#include <cmath>

namespace weyl::detail {

__attribute__((noinline)) double r_sin(double x) { return std::sin(x); }
__attribute__((noinline)) double r_cos(double x) { return std::cos(x); }

}  // namespace weyl::detail
