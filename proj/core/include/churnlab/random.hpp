#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace churnlab {

using Rng = std::mt19937_64;

// Derives an independent seed for a named sub-stream (init, shuffle, a run,
// a trial) from a parent seed. Pure function of its arguments.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// 64-bit FNV-1a. Stable across platforms and runs.
std::uint64_t stable_hash(std::string_view text);

// Sub-stream tags used when deriving seeds.
namespace streams {
inline constexpr std::uint64_t kInit = 0x1001;
inline constexpr std::uint64_t kShuffle = 0x2001;
inline constexpr std::uint64_t kMixup = 0x3001;
inline constexpr std::uint64_t kPhaseOne = 0x4001;
inline constexpr std::uint64_t kPeer = 0x5001;
inline constexpr std::uint64_t kEnsemble = 0x6001;
inline constexpr std::uint64_t kTrial = 0x7001;
inline constexpr std::uint64_t kLabels = 0x8001;
}  // namespace streams

// Beta(a, b) draw via the ratio of two gamma variates.
double sample_beta(double a, double b, Rng& rng);

}  // namespace churnlab
