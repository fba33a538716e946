#pragma once

#include <cstdint>
#include <random>

namespace kcore {

using Rng = std::mt19937_64;

inline constexpr const char* kRngName = "mt19937_64";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of replicate `rep` under a base seed. splitmix64 is a bijection, so
/// distinct reps always get distinct seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t rep) noexcept {
  return base ^ splitmix64(rep);
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

}  // namespace kcore
