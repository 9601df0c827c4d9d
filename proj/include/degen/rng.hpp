#pragma once

#include <cstdint>

#include "degen/linalg.hpp"

namespace degen {

/// xoshiro256** generator seeded through splitmix64.
///
/// Hand-rolled so that seeded streams are identical across standard
/// libraries and platforms; the experiment file format documents streams in
/// terms of this generator.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01();

  /// Uniform in [a, b).
  double uniform(double a, double b);

  /// Uniform integer in [0, n), n >= 1.
  int uniform_int(int n);

  /// Uniform point in the closed L2 ball of the given radius (rejection
  /// sampling from the enclosing cube).
  Vec in_ball(int dim, double radius);

 private:
  uint64_t s_[4];
};

}  // namespace degen
