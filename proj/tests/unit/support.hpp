#pragma once

#include <cstddef>

#include "pgakit/linalg.hpp"

namespace testing {

// Row-major fixture array -> matrix.
template <std::size_t N>
pgakit::Mat rows(const double (&a)[N], int r, int c) {
  pgakit::Mat M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = a[i * c + j];
  return M;
}

template <std::size_t N>
pgakit::Vec vec(const double (&a)[N]) {
  pgakit::Vec v(static_cast<int>(N));
  for (std::size_t i = 0; i < N; ++i) v(static_cast<int>(i)) = a[i];
  return v;
}

inline double max_abs(const pgakit::Mat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing
