#pragma once

#include <cstdint>
#include <random>

namespace v2x {

using Rng = std::mt19937_64;

/// Purposes for independent random streams. Each (purpose, id) pair gets its
/// own generator so adding draws for one purpose never perturbs another.
enum class Stream : std::uint64_t {
  spawn_position = 1,
  spawn_lane = 2,
  spawn_speed = 3,
  activation = 4,
  scheduler = 5,
  shadowing = 6,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

/// Seed of trial `trial` under `base_seed`. Independent of the scheduler, so
/// every scheduler variant of one trial sees the same spawn draws.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
  return combine_seed(base_seed, 0x7472696100000000ULL + static_cast<std::uint64_t>(trial));
}

inline Rng make_stream(std::uint64_t seed, Stream purpose, std::uint64_t id = 0) {
  return Rng(combine_seed(combine_seed(seed, static_cast<std::uint64_t>(purpose)), id));
}

}  // namespace v2x
