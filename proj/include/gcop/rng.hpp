#pragma once

#include <cstdint>

namespace gcop {

// Reproducible random stream used by every sampler in the library.
//
// Generator family (fixed for this repo): PCG64 XSL-RR 128/64.
// The 64-bit seed and stream id are expanded to the 128-bit state and
// sequence increment via splitmix64, so
//   * the same (seed, stream_id) pair replays the identical sequence on
//     every platform (128-bit integer arithmetic, no libm involved), and
//   * distinct stream ids select distinct LCG increments, giving
//     statistically independent streams.
//
// A stream is single-owner: never share one instance across threads.
// Distinct streams may run concurrently.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1): ((x >> 11) + 0.5) * 2^-53.
  // Never returns 0.0 or 1.0, safe under log().
  double uniform_open01();

  // Standard normal via inverse-CDF of uniform_open01(); one uniform
  // consumed per draw, keeping the stream layout platform-independent.
  double normal();

  // Exp(1) via -log(uniform_open01()).
  double exponential();

  // Unbiased integer in [0, n), n >= 1. Masked rejection sampling.
  std::uint64_t uniform_below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  unsigned __int128 state_;
  unsigned __int128 inc_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace gcop
