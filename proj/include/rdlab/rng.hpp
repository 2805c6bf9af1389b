#pragma once

// Counter-based random numbers: Philox4x32-10 (Salmon et al., SC'11) keyed by
// (seed, stream). Draw n of a stream is a pure function of (seed, stream, n),
// so sequences are reproducible across machines and trivially splittable.
//
// Normal variates use the Box-Muller transform on the two 53-bit uniforms
// carried by one Philox block: block b yields normals 2b and 2b+1.

#include <array>
#include <cstdint>

namespace rdlab {

inline constexpr const char* kGeneratorName = "philox4x32-10/box-muller";

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

  /// Uniform on the open interval (0, 1); `which` selects the first or second
  /// 53-bit value of block `block`.
  double uniform(std::uint64_t block, int which) const;

  /// n-th standard normal of this stream.
  double normal(std::uint64_t n) const;

  /// Next normal of the sequential cursor.
  double next_normal() { return normal(cursor_++); }

 private:
  std::uint64_t seed_;
  std::uint32_t stream_;
  std::uint64_t cursor_ = 0;
};

}  // namespace rdlab
