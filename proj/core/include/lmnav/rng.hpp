#pragma once

#include <cstdint>
#include <random>

namespace lmnav {

// splitmix64 finalizer; used to derive decorrelated seed streams from a
// run seed plus structural indices (episode, step, purpose tag).
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix64(base ^ 0x5851f42d4c957f2dULL);
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  return mix64(s ^ c);
}

using Rng = std::mt19937_64;

}  // namespace lmnav
