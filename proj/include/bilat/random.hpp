#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "bilat/config_model.hpp"

namespace bilat {

/// SplitMix64 finaliser; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Seed for substream `stream` of a run seeded with `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// mt19937_64 plus distribution transforms written out here, so that draws are
/// bit-identical across standard library implementations (std::*_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(substream_seed(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, n); n > 0. Rejection sampling, no modulo bias.
  std::size_t index(std::size_t n);
  /// Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-distributed rotation in SO(M).
Matrix random_rotation(std::size_t dim, Rng& rng);

}  // namespace bilat
