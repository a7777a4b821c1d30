#pragma once

#include "renyivec/core.hpp"

// Renyi entropies, Schatten norms, and full entropy vectors, in bits.

namespace renyivec {

/// Compensated (Neumaier) sum; terms are sorted ascending first so the
/// 1e-10 identities survive spectra with many distinct values.
double compensated_sum(std::vector<double> terms);

/// S_alpha of a spectrum in bits. alpha=1 never reaches the finite formula.
double renyi_entropy(const WeightedSpectrum& spec, RenyiOrder order);

/// Schatten alpha-norm, defined for finite alpha > 1 and infinity.
/// S_alpha = (alpha/(1-alpha)) * log2 of this norm.
double schatten_norm(const WeightedSpectrum& spec, RenyiOrder order);

/// Map from every nonempty subset of parties to its marginal entropy (bits).
struct EntropyVector {
  int n = 0;
  RenyiOrder order = RenyiOrder::one();
  std::vector<double> entries;  // indexed by bitmask; entry 0 unused

  EntropyVector() = default;
  EntropyVector(int n_, RenyiOrder order_);

  double at(SubsetMask I) const;
  double at_bits(std::uint32_t bits) const;
  void set(SubsetMask I, double value);

  /// Largest |a-b| over all nonempty subsets.
  double sup_diff(const EntropyVector& other) const;
};

EntropyVector entropy_vector(const ClassicalState& state, RenyiOrder order);
EntropyVector entropy_vector(const SparsePureState& psi, RenyiOrder order);
EntropyVector entropy_vector(const DensityMatrix& rho, RenyiOrder order);

/// Re-indexes a component vector onto a larger party set: entry for logical
/// subset I is the component entry on the parties mapped into I.
/// party_map[p-1] is the logical party carrying component party p; entries of
/// party_map outside 1..n_logical (e.g. an environment party) are dropped.
EntropyVector embed_entropy_vector(const EntropyVector& component,
                                   const std::vector<int>& party_map, int n_logical);

}  // namespace renyivec
