#pragma once

#include <cstdint>
#include <random>

namespace spgarch {

/**
 * @brief Seedable random stream owned by exactly one chain or replication.
 *
 * Wraps a 64-bit Mersenne Twister. Streams for parallel work are derived
 * from a master seed with derive_seed(), never by sharing an engine.
 */
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1).
  double uniform() { return unit_(engine_); }

  /// Uniform on (0, 1]; safe to take the log of.
  double uniform_pos() { return 1.0 - unit_(engine_); }

  double normal() { return normal_(engine_); }

  double chi_square(double dof) {
    std::gamma_distribution<double> gamma(0.5 * dof, 2.0);
    return gamma(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/**
 * Seed for the `index`-th child stream of `master`.
 *
 * Rule: mix64(master + (index + 1) * 0x9E3779B97F4A7C15). Distinct indices give
 * statistically independent Mersenne Twister seeds; the rule is part of the
 * reproducibility contract for study replications and pilot runs.
 */
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace spgarch
