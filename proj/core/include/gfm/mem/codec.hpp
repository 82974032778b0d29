#pragma once

#include <bit>
#include <cstdint>
#include <span>

namespace gfm::mem {

/// Number of discrete yaw angles encoded per cell; one bit each, so a cell
/// code is exactly one 64-bit word.
inline constexpr int kAngleCount = 64;

/// Packs per-angle Jacobian ranks into a cell code: bit i-1 is set iff the
/// ray at discrete angle i is rank deficient (rank 1). ranks must hold
/// kAngleCount entries from {1, 2}.
inline uint64_t encode_cell(std::span<const int> ranks) {
  uint64_t code = 0;
  for (int i = 0; i < kAngleCount; ++i) {
    if (ranks[i] == 1) {
      code |= uint64_t{1} << i;
    }
  }
  return code;
}

namespace detail {
// 2^n modulo 2^64, defined for n in [0, 64].
inline uint64_t pow2_mod64(int n) {
  return n >= 64 ? 0 : uint64_t{1} << n;
}
}  // namespace detail

/// Restricts a cell code to the discrete angles covered by a scan window.
/// For i <= j the window is the contiguous angle range i..j; for i > j it
/// wraps around the angular seam. All arithmetic is modulo 2^64.
inline uint64_t window_code(uint64_t q, int i, int j) {
  using detail::pow2_mod64;
  const uint64_t mask = i <= j ? pow2_mod64(j) - pow2_mod64(i - 1)
                               : ~(pow2_mod64(i) - pow2_mod64(j - 1));
  return mask & q;
}

/// Windowed metric value: the number of rank-deficient angles inside the
/// window, i.e. the Hamming weight of the windowed code. Constant time.
inline int gfm_discrete(uint64_t q, int i, int j) {
  return std::popcount(window_code(q, i, j));
}

}  // namespace gfm::mem
