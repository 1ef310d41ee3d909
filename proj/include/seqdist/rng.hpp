#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace seqdist {

/// Identifies the generator and the substream derivation. Bump the suffix
/// whenever either changes; recorded outputs are only replayable within one
/// scheme version.
inline constexpr std::string_view kRngScheme = "mt19937_64+splitmix64/v1";

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for substream `stream` of trial `trial` under `master`. Distinct
/// (trial, stream) pairs give statistically independent engines.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream);

Engine make_engine(std::uint64_t master, std::uint64_t trial, std::uint64_t stream);

/// Uniform double in [0, 1) built from the top 53 bits. Unlike
/// std::uniform_real_distribution this is bit-identical across standard libraries.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection on the top bits.
std::uint64_t uniform_below(Engine& eng, std::uint64_t bound);

}  // namespace seqdist
