#pragma once

#include <optional>

#include "renyivec/entropy.hpp"

// Achievability constructions: classical and quantum spike states, dilution
// distributions, upset mixtures, purification, and tensor assembly of full
// target vectors. Every construction comes in two tiers: an explicit state
// (when it fits the enumeration budget) and a symbolic descriptor carrying
// closed-form marginal spectra, so entropies remain computable at alphabet
// sizes far beyond anything enumerable.

namespace renyivec {

// ---------------------------------------------------------------------------
// Upset combinatorics

/// Family of subsets closed under taking supersets, with its minimal
/// antichain of generators.
struct Upset {
  int n = 0;
  std::vector<std::uint32_t> members;  // ascending bitmask order
  std::vector<std::uint32_t> minimal;  // antichain generating the family

  bool contains(std::uint32_t bits) const;
};

/// Union of the up-sets of the generators; redundant generators are removed.
Upset upward_closure(int n, const std::vector<SubsetMask>& generators);

/// 0/1 vector over nonempty subsets, 1 iff the subset is a member.
EntropyVector indicator_vector(const Upset& u);

// ---------------------------------------------------------------------------
// Descriptors

enum class ConstructionKind {
  SpikeClassical,
  SpikeQuantumLt1,
  DilutionGt1,
  SpikeQuantumGt1,
  UpsetLt1,
  UpsetGt1,
  Purification,
  TensorComposite,
};

std::string kind_name(ConstructionKind kind);

/// Symbolic record of a construction; carries enough parameters to evaluate
/// every marginal spectrum in closed form.
struct ConstructionDescriptor {
  ConstructionKind kind{};
  int n = 0;                     // party count of the underlying classical system
  RenyiOrder alpha = RenyiOrder::one();  // order the construction was built for
  double s_bits = 0.0;           // target entropy in bits
  std::vector<std::int64_t> M;   // alphabet sizes (meaning depends on kind)
  std::uint32_t subset_bits = 0; // target subset I for spike kinds
  std::vector<std::uint32_t> generators;  // minimal antichain for upset kinds
  std::vector<double> t_list;    // spike weight t, or one t_J per generator
  WeightedSpectrum R;            // seed distribution for dilution / gt1 spike
  std::vector<ConstructionDescriptor> components;       // composite / purification
  std::vector<std::vector<int>> component_party_maps;   // composite: party -> logical

  double t() const { return t_list.empty() ? 0.0 : t_list[0]; }
};

/// Party count of the state the descriptor describes (n, or n+1 for the
/// purified quantum kinds).
int total_parties(const ConstructionDescriptor& desc);

struct ConstructionResult {
  ConstructionDescriptor descriptor;
  std::optional<ClassicalState> classical;
  std::optional<SparsePureState> pure;
};

// ---------------------------------------------------------------------------
// Builders (alpha < 1)

/// Smallest integer alphabet product for which the spike weight t stays <= 1.
std::int64_t min_alphabet_size(double s_bits, double alpha, int n);

/// Classical spike: probability 1-t on the all-zero tuple and t spread
/// uniformly over the all-nonzero tuples; marginal spectra are
/// {(1-t, 1), (t/M_I, M_I)}.
ConstructionResult spike_classical(int n, double s_bits, double alpha,
                                   std::vector<std::int64_t> M,
                                   bool build_state = true);

/// Pure state on n+1 parties whose reduction targets s on subset I of [n].
/// Parties in I hold rows, parties outside hold columns of an [M]^{k x l}
/// label grid; covers the purification cases |I|=1 and I=[n] as well.
ConstructionResult spike_quantum_lt1(int n, SubsetMask I, double s_bits,
                                     double alpha, std::int64_t M,
                                     bool build_state = true);

// ---------------------------------------------------------------------------
// Builders (alpha > 1)

/// Classical dilution: one uniformly chosen party carries a sample of R, the
/// others read 0. The joint entropy is log2(n) + H_alpha(R) exactly while
/// every strict marginal stays below (alpha/(alpha-1)) log2 n.
ConstructionResult dilution_classical_gt1(int n, RenyiOrder order,
                                          const WeightedSpectrum& R,
                                          bool build_state = true);

/// Direct sum of |I||I^c| pair blocks on n+1 parties; I is a subset of
/// [n+1]. Requires H_alpha(R) = s within 1e-9.
ConstructionResult spike_quantum_gt1(int n, SubsetMask I, double s_bits,
                                     RenyiOrder order, const WeightedSpectrum& R,
                                     bool build_state = true);

/// Two-atom distribution {p, (1-p)/(M-1) x (M-1)} with H_order = s_bits,
/// solved by bisection; M defaults to the smallest alphabet that can reach s.
WeightedSpectrum two_atom_distribution(double s_bits, RenyiOrder order,
                                       std::int64_t M = 0);

// ---------------------------------------------------------------------------
// Upset constructions

/// Thm-7-style mixture of per-generator spikes on disjoint alphabet sectors
/// (alpha < 1). Generators are normalized through upward_closure.
ConstructionResult upset_classical_lt1(int n, const std::vector<SubsetMask>& generators,
                                       double s_bits, double alpha,
                                       std::vector<std::int64_t> M,
                                       bool build_state = true);

/// Thm-8-style half diagonal / half product-of-dilutions state (alpha > 1).
/// M is derived as the smallest integer with s <= 1 + log2 M.
ConstructionResult upset_classical_gt1(int n, const std::vector<SubsetMask>& generators,
                                       double s_bits, RenyiOrder order,
                                       bool build_state = true);

/// Off-upset cap (alpha/(alpha-1)) log2(2 n^k) from the Thm-8 construction.
double upset_gt1_bound(int n, int k, RenyiOrder order);

// ---------------------------------------------------------------------------
// Purification and tensor assembly

/// Copy-basis purification: party n+1 has one dimension per support atom and
/// amplitudes are square roots of the probabilities.
SparsePureState purify_classical(const ClassicalState& state);

/// Descriptor wrapper whose marginals follow the inner classical kind on
/// subsets of [n] and its complement rule otherwise.
ConstructionResult purification(const ConstructionResult& inner);

/// Tensor assembly: one spike per nonzero coordinate of the target, on
/// disjoint party copies re-aggregated to n logical parties (purifiers are
/// collected into one environment party).
ConstructionResult target_vector_state(const EntropyVector& target, RenyiOrder order,
                                       std::int64_t M, bool build_state = true);

// ---------------------------------------------------------------------------
// Analytic tier

/// Closed-form marginal spectrum; defined for every kind except
/// TensorComposite. The subset ranges over total_parties(desc).
WeightedSpectrum analytic_marginal_spectrum(const ConstructionDescriptor& desc,
                                            SubsetMask I);

/// Marginal entropy at any order (not just the construction order).
double analytic_marginal_entropy(const ConstructionDescriptor& desc, SubsetMask I,
                                 RenyiOrder order);

/// Full entropy vector over total_parties(desc) without state enumeration.
/// For TensorComposite the vector spans the n logical parties.
EntropyVector analytic_entropy_vector(const ConstructionDescriptor& desc,
                                      RenyiOrder order);

EntropyVector analytic_entropy_vector(const ConstructionDescriptor& desc);

/// Thm-7 limit value (1/(1-a)) log2(|L|^{1-a} + 2^{s(1-a)} #{J in L: J <= I})
/// at the construction order; the M -> infinity limit of the exact marginals.
double upset_lt1_limit_entropy(const ConstructionDescriptor& desc, SubsetMask I);
EntropyVector upset_lt1_limit_vector(const ConstructionDescriptor& desc);

}  // namespace renyivec
