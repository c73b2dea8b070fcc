#pragma once

#include <cstdint>
#include <random>

#include "xphase/state.hpp"

namespace xphase {

// Deterministic across platforms: the mt19937_64 engine is fully specified by
// the standard; the [0,1) mapping is ours because the library distributions
// are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vec3 vec3(double lo, double hi) {
    const double x = uniform(lo, hi);
    const double y = uniform(lo, hi);
    const double z = uniform(lo, hi);
    return Vec3{x, y, z};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace xphase
