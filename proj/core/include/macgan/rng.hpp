#pragma once

#include <array>
#include <cstdint>

#include "macgan/matrix.hpp"

namespace macgan {

/// Seeded pseudo-random generator that replays bit-exactly on every platform.
///
/// Core generator is xoshiro256** (Blackman & Vigna). The 256-bit state is
/// filled from the 64-bit seed by four successive SplitMix64 outputs.
/// uniform() takes the top 53 bits of a draw and scales by 2^-53, giving a
/// value in [0, 1). normal() is the Box-Muller transform on two uniforms
/// (u1 mapped to (0, 1]); the second variate of each pair is cached and
/// returned by the next call.
///
/// The integer stream and uniform() are fully portable. normal() is portable
/// to the extent that std::log / std::sqrt / std::cos / std::sin are
/// correctly rounded by the platform libm.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  /// Independent generator keyed by (seed, stream). Forking does not advance
  /// this generator.
  Rng fork(std::uint64_t stream) const noexcept;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 step; exposed for seeding derived streams.
std::uint64_t splitmix64(std::uint64_t& x) noexcept;

Matrix random_normal(std::size_t rows, std::size_t cols, Rng& rng, double stddev = 1.0);
Matrix random_uniform(std::size_t rows, std::size_t cols, Rng& rng, double lo, double hi);

}  // namespace macgan
