#pragma once

#include <cstdint>

namespace lsgan {

/// Identity string recorded in run logs and checkpoints so a log always names
/// the generator that produced it.
inline constexpr const char* kRngAlgorithm = "pcg32+box-muller";

/// PCG-XSH-RR 64/32. 64-bit state, 63-bit stream selector; distinct stream
/// ids give statistically independent sequences for the same seed.
struct Pcg32 {
  std::uint64_t state = 0;
  std::uint64_t inc = 1;

  Pcg32() = default;
  Pcg32(std::uint64_t seed, std::uint64_t stream_id) {
    inc = (stream_id << 1u) | 1u;
    state = 0;
    next_u32();
    state += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state;
    state = old * 6364136223846793005ULL + inc;
    auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  /// Uniform in the open interval (0, 1); never returns 0 (safe under log).
  double uniform01() {
    constexpr double inv = 1.0 / 4294967296.0;
    return (static_cast<double>(next_u32()) + 0.5) * inv;
  }

  /// Uniform in [-1, 1].
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  /// Uniform integer in [0, n).
  std::uint32_t below(std::uint32_t n) {
    // Lemire-style rejection keeps the draw unbiased.
    std::uint64_t threshold = (-static_cast<std::uint64_t>(n)) % n;
    for (;;) {
      std::uint64_t r = next_u32();
      std::uint64_t product = r * n;
      if ((product & 0xFFFFFFFFu) >= threshold) {
        return static_cast<std::uint32_t>(product >> 32);
      }
    }
  }
};

/// Stream ids, one per purpose, so e.g. data and latent draws never share a
/// sequence and adding draws to one stream cannot shift the other.
enum class StreamPurpose : std::uint64_t {
  data = 1,
  latent = 2,
  weights = 3,
  eval = 4,
  divergence = 5,
};

inline Pcg32 make_stream(std::uint64_t seed, StreamPurpose purpose) {
  return Pcg32(seed, static_cast<std::uint64_t>(purpose));
}

/// splitmix64 of (seed, salt): derives decorrelated sub-seeds, e.g. one per
/// network, from a single run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + salt * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Standard-normal variates via Box-Muller; caches the second variate of each
/// pair. The cache is part of the stream state for checkpointing.
struct BoxMuller {
  bool has_spare = false;
  double spare = 0.0;

  double next(Pcg32& rng);
  void reset() {
    has_spare = false;
    spare = 0.0;
  }
};

}  // namespace lsgan
