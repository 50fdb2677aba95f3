#pragma once

#include <cstdint>
#include <random>

namespace ncomm {

using Rng = std::mt19937_64;

/// Generator for an independent stream: chain c of a run seeded with s always
/// gets the same state regardless of how chains are scheduled.
inline Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream) feeds a seed_seq.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t a = mix(seed);
  std::uint64_t b = mix(a ^ mix(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

template <class Int>
inline Int uniform_index(Rng& rng, Int n) {
  return std::uniform_int_distribution<Int>(0, n - 1)(rng);
}

inline double uniform_unit(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace ncomm
