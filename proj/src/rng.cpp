#include "gcop/rng.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "gcop/special_functions.hpp"

namespace gcop {

namespace {

using u128 = unsigned __int128;

constexpr u128 kMultiplier =
    (static_cast<u128>(0x2360ed051fc65da4ULL) << 64) | 0x4385df649fccf645ULL;

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t s = seed;
  const u128 init_state = (static_cast<u128>(splitmix64(s)) << 64) | splitmix64(s);
  std::uint64_t q = stream_id ^ 0xda3e39cb94b95bdbULL;
  const u128 init_seq = (static_cast<u128>(splitmix64(q)) << 64) | splitmix64(q);

  inc_ = (init_seq << 1) | 1;
  state_ = 0;
  next_u64();
  state_ += init_state;
  next_u64();
}

std::uint64_t RngStream::next_u64() {
  state_ = state_ * kMultiplier + inc_;
  const std::uint64_t xored =
      static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
  const unsigned rot = static_cast<unsigned>(state_ >> 122);
  return std::rotr(xored, static_cast<int>(rot));
}

double RngStream::uniform_open01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return std_normal_quantile(uniform_open01()); }

double RngStream::exponential() { return -std::log(uniform_open01()); }

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::domain_error("uniform_below: n must be positive");
  const std::uint64_t mask = ~0ULL >> std::countl_zero(n | 1);
  for (;;) {
    const std::uint64_t v = next_u64() & mask;
    if (v < n) return v;
  }
}

}  // namespace gcop
