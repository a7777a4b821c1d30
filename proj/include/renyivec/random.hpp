#pragma once

#include <random>

#include "renyivec/core.hpp"

// Seeded, platform-independent samplers. Gaussians are produced by Box-Muller
// over raw mt19937_64 output rather than std::normal_distribution, whose
// sequence is implementation-defined; identical seeds give identical states
// on every platform.

namespace renyivec {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Independent stream for a trial index; results do not depend on how
  /// trials are distributed across workers.
  static Rng substream(std::uint64_t seed, std::uint64_t index);

  double uniform01();  // in (0,1]
  double gaussian();
  Complex cgaussian();  // standard complex Gaussian (unit-variance parts)
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0;
};

/// Normalized Gram matrix G G^dagger / tr of a square complex Gaussian G.
DensityMatrix random_density_matrix(Rng& rng, const std::vector<std::int64_t>& dims);

/// Dirichlet(1,...,1) pmf over the full product alphabet.
ClassicalState random_classical_state(Rng& rng, const std::vector<std::int64_t>& alphabet_sizes);

/// Dense-support random pure state, normalized.
SparsePureState random_pure_state(Rng& rng, const std::vector<std::uint64_t>& dims);

}  // namespace renyivec
