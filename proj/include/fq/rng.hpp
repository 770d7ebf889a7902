#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace fq {

// Deterministic 64-bit generator. mt19937_64 is fully specified by the
// standard, so a seeded stream is identical across platforms.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for (master, path), e.g. path = {difficulty index, n, trial}.
// Chained finalizers keep distinct paths decorrelated, and extending a sweep
// grid never changes the seeds of already-run trials.
[[nodiscard]] constexpr std::uint64_t derive_seed(
    std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t v : path) h = splitmix64(h ^ v);
  return h;
}

// Unbiased integer in [0, bound) by masked rejection. Never uses
// std::uniform_int_distribution, whose mapping is implementation-defined.
[[nodiscard]] inline std::uint64_t uniform_below(Rng& g, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
  for (;;) {
    const std::uint64_t v = g() & mask;
    if (v < bound) return v;
  }
}

// Uniform double in [0, 1) with 53 random bits.
[[nodiscard]] inline double uniform_unit(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace fq
