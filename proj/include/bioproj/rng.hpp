#pragma once

#include <cstdint>
#include <random>

namespace bioproj {

// SplitMix64 output function; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive an independent stream seed from a root seed and a path of keys
/// (row index, trial index, stream tag, ...). The result depends only on the
/// values, never on which thread asks for it.
template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Keys... keys) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(keys) + 0x632be59bd9b4e019ULL))), ...);
  return h;
}

using Engine = std::mt19937_64;

template <typename... Keys>
Engine make_engine(std::uint64_t seed, Keys... keys) {
  return Engine(derive_seed(seed, keys...));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(Engine& eng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(eng);
}

// Stream tags keep unrelated consumers of one root seed apart.
namespace stream {
inline constexpr std::uint64_t kMatrix = 0x4d41545249580001ULL;
inline constexpr std::uint64_t kNoise = 0x4e4f495345000002ULL;
inline constexpr std::uint64_t kSplit = 0x53504c4954000003ULL;
inline constexpr std::uint64_t kTrain = 0x545241494e000004ULL;
inline constexpr std::uint64_t kSynth = 0x53594e5448000005ULL;
inline constexpr std::uint64_t kTrial = 0x545249414c000006ULL;
inline constexpr std::uint64_t kVector = 0x564543544f520007ULL;
}  // namespace stream

}  // namespace bioproj
