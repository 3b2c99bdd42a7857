#pragma once

#include <cstdint>

#include "pgakit/linalg.hpp"

namespace pgakit {

// SplitMix64 with Box-Muller normals. Both are implemented here (not taken
// from <random>) so that draws are identical across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Independent stream for (seed, index).
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  double uniform();  // in (0, 1)
  double normal();
  std::uint64_t below(std::uint64_t n);

  Vec normal_vector(int n);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// d x k with orthonormal columns, from QR of a Gaussian matrix.
Mat random_orthonormal(SplitMix64& rng, int d, int k);

}  // namespace pgakit
