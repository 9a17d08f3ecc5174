#pragma once

#include <cstddef>
#include <limits>

namespace falldet {

// Squared Euclidean distance with a fixed accumulation order: 64-dimension
// chunks walked from the tail of the vector toward the front, 4 lanes per
// chunk. The concatenated feature layout puts the large-magnitude energy
// features last, so the running sum grows fastest on the first chunks and the
// bound check can cut off far candidates early. The bound variant may return
// once the partial sum exceeds `limit`; whenever the returned value is
// <= limit it is the exact distance, bit identical to the unbounded call.
inline double squared_distance_bounded(const double* __restrict a, const double* __restrict b,
                                       size_t d, double limit) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  constexpr size_t kChunk = 64;
  size_t hi = d;
  while (hi >= kChunk) {
    const size_t lo = hi - kChunk;
    for (size_t j = lo; j < hi; j += 4) {
      double d0 = a[j] - b[j];
      double d1 = a[j + 1] - b[j + 1];
      double d2 = a[j + 2] - b[j + 2];
      double d3 = a[j + 3] - b[j + 3];
      s0 += d0 * d0;
      s1 += d1 * d1;
      s2 += d2 * d2;
      s3 += d3 * d3;
    }
    hi = lo;
    if (s0 + s1 + s2 + s3 > limit) return s0 + s1 + s2 + s3;
  }
  size_t j = 0;
  for (; j + 4 <= hi; j += 4) {
    double d0 = a[j] - b[j];
    double d1 = a[j + 1] - b[j + 1];
    double d2 = a[j + 2] - b[j + 2];
    double d3 = a[j + 3] - b[j + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; j < hi; ++j) {
    double d0 = a[j] - b[j];
    s0 += d0 * d0;
  }
  return s0 + s1 + s2 + s3;
}

inline double squared_distance(const double* a, const double* b, size_t d) {
  return squared_distance_bounded(a, b, d, std::numeric_limits<double>::infinity());
}

}  // namespace falldet
