#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "weyl/linalg.hpp"

namespace weyl {

// Seeded uniform double stream. The mt19937_64 bit stream is mapped to
// [0,1) by the fixed 53-bit construction instead of
// std::uniform_real_distribution, whose output is implementation-defined;
// identical seeds give identical samples on every standard library.
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0,1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(unit() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 engine_;
};

// Axis-aligned box, one (lo, hi) pair per coordinate.
using SampleBox = std::vector<std::pair<double, double>>;

inline Point sample_point(const SampleBox& box, UniformSampler& rng) {
  Point p(static_cast<Eigen::Index>(box.size()));
  for (std::size_t i = 0; i < box.size(); ++i)
    p[static_cast<Eigen::Index>(i)] = rng.in(box[i].first, box[i].second);
  return p;
}

inline std::vector<Point> sample_points(const SampleBox& box, int count,
                                        std::uint64_t seed) {
  UniformSampler rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts.push_back(sample_point(box, rng));
  return pts;
}

}  // namespace weyl
