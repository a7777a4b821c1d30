#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Core state representations for multipartite Renyi-entropy computations:
// subsets of parties, eigenvalue spectra, classical pmfs, sparse pure states,
// dense density matrices, and the reduction operations connecting them.

namespace renyivec {

using Complex = std::complex<double>;

// Tolerances shared across the library. Spectrum merging and the zero cutoff
// are chosen so eigensolver noise never splits a true multiplet at the
// dimensions this library handles.
inline constexpr double kMergeRelTol = 1e-9;
inline constexpr double kZeroEigCutoff = 1e-12;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kUnitMassTol = 1e-9;
inline constexpr double kHermitianTol = 1e-9;

// Budget caps. Larger requests must go through the analytic descriptor tier.
inline constexpr std::int64_t kMaxDenseDim = 4096;
inline constexpr std::int64_t kMaxGramSide = 4096;
inline constexpr std::int64_t kMaxClassicalAtoms = 1'000'000;
inline constexpr std::int64_t kMaxPureAmplitudes = 100'000;

/// Thrown when an explicit-state request exceeds the enumeration budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Subsets of parties

/// Nonempty subset of parties {1..n}, bit i-1 <=> party i.
struct SubsetMask {
  std::uint32_t bits = 0;
  int n = 0;

  SubsetMask() = default;
  SubsetMask(std::uint32_t bits_, int n_);

  int popcount() const;
  bool empty() const { return bits == 0; }
  bool is_full() const;
  bool contains(int party) const;  // 1-based
  bool subset_of(const SubsetMask& other) const;
  SubsetMask complement() const;
  std::vector<int> parties() const;  // ascending, 1-based

  /// Comma-free ascending party digits, e.g. "13" for {1,3}. Requires n <= 9.
  std::string str() const;

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
};

SubsetMask parse_subset(const std::string& text, int n);

/// All 2^n-1 nonempty subsets in ascending bitmask order.
std::vector<SubsetMask> subset_enumerate(int n);

/// Nonempty subsets ordered by (size, bitmask); the order used in JSON/CSV.
std::vector<SubsetMask> subsets_by_size(int n);

// ---------------------------------------------------------------------------
// Renyi order

/// Entropy order: 0, 1, infinity, or a finite alpha > 0, alpha != 1.
/// The singular orders are tagged so alpha=1 never reaches the finite formula.
class RenyiOrder {
 public:
  enum class Tag { Zero, One, Infinity, Finite };

  static RenyiOrder zero() { return RenyiOrder(Tag::Zero, 0.0); }
  static RenyiOrder one() { return RenyiOrder(Tag::One, 1.0); }
  static RenyiOrder infinity() { return RenyiOrder(Tag::Infinity, 0.0); }
  static RenyiOrder finite(double alpha);

  /// Accepts "0", "1", "inf"/"infinity", or a positive decimal.
  static RenyiOrder parse(const std::string& text);

  Tag tag() const { return tag_; }
  bool is_finite() const { return tag_ == Tag::Finite; }
  double alpha() const;  // only valid for Finite

  /// True for Finite alpha>1 and Infinity.
  bool above_one() const;
  /// True for Finite alpha<1.
  bool below_one() const;

  std::string str() const;  // "0", "1", "inf", or the decimal value

  friend bool operator==(const RenyiOrder&, const RenyiOrder&) = default;

 private:
  RenyiOrder(Tag tag, double alpha) : tag_(tag), alpha_(alpha) {}
  Tag tag_ = Tag::One;
  double alpha_ = 1.0;
};

// ---------------------------------------------------------------------------
// Spectra

/// Multiset of eigenvalues/probabilities as (value, multiplicity) pairs,
/// sorted by descending value, values pairwise distinct after merging.
/// Multiplicities are integral counts stored as doubles so the analytic tier
/// can carry counts like M^c beyond 2^63 (exact for power-of-two alphabets).
struct WeightedSpectrum {
  struct Atom {
    double value = 0.0;
    double multiplicity = 0.0;
  };
  std::vector<Atom> atoms;

  double total_mass() const;   // sum value * multiplicity
  double total_count() const;  // sum multiplicity
  double max_value() const;
  /// Multiplicity of the largest value (after merging).
  double top_multiplicity() const;
  bool is_pure(double tol = kMergeRelTol) const;
};

/// Clamps tiny negatives, drops values below the zero cutoff, merges equal
/// values at relative tolerance kMergeRelTol, and checks unit mass.
/// Negative values below -kPsdTol are rejected.
WeightedSpectrum make_spectrum(std::vector<WeightedSpectrum::Atom> raw);

/// Assembly for closed-form spectra: merges only (near-)identical values and
/// keeps arbitrarily small ones, which may carry enormous multiplicities.
WeightedSpectrum exact_spectrum(std::vector<WeightedSpectrum::Atom> raw);

WeightedSpectrum spectrum_from_probabilities(const std::vector<double>& probs);

// ---------------------------------------------------------------------------
// States

/// Sparse pmf over a labeled product alphabet; alphabet_sizes[i] is the
/// number of symbols of party i+1, labels are 0-based.
struct ClassicalState {
  int n = 0;
  std::vector<std::int64_t> alphabet_sizes;
  // sorted by key; keys are full index tuples
  std::vector<std::pair<std::vector<std::uint32_t>, double>> atoms;

  void validate() const;
  WeightedSpectrum spectrum() const;
};

ClassicalState make_classical_state(
    int n, std::vector<std::int64_t> alphabet_sizes,
    std::map<std::vector<std::uint32_t>, double> atoms);

/// Tensor product on disjoint party sets (left parties first).
ClassicalState tensor_classical(const ClassicalState& a, const ClassicalState& b);

/// Sparse amplitude list over a labeled product basis. Labels are stored per
/// party (never flattened) so party dimensions like 1+M^l cannot overflow.
struct SparsePureState {
  int n = 0;
  std::vector<std::uint64_t> dims;
  std::vector<std::pair<std::vector<std::uint64_t>, Complex>> amplitudes;

  void validate() const;
  double norm_sq() const;
};

SparsePureState make_pure_state(
    int n, std::vector<std::uint64_t> dims,
    std::map<std::vector<std::uint64_t>, Complex> amplitudes);

/// Dense Hermitian PSD unit-trace matrix over a party-labeled tensor basis;
/// party 1 is the most significant factor. Total dimension <= kMaxDenseDim.
struct DensityMatrix {
  std::vector<std::int64_t> dims;
  Eigen::MatrixXcd mat;

  int n() const { return static_cast<int>(dims.size()); }
  std::int64_t total_dim() const;
  void validate() const;
};

std::int64_t checked_total_dim(const std::vector<std::int64_t>& dims);

DensityMatrix density_from_classical(const ClassicalState& state);
DensityMatrix density_from_pure(const SparsePureState& psi);

// ---------------------------------------------------------------------------
// Reductions

/// Marginal pmf on the parties in I (ascending order kept).
ClassicalState marginalize_classical(const ClassicalState& state, SubsetMask I);

/// Partial trace over the complement of I.
DensityMatrix partial_trace_dense(const DensityMatrix& rho, SubsetMask I);

/// Spectrum of rho_J for a pure state via the Gram matrix of the coefficient
/// matrix grouped by (J-labels, J^c-labels). Never materializes the full
/// Hilbert space; cost polynomial in the number of nonzero amplitudes.
WeightedSpectrum reduced_spectrum_pure(const SparsePureState& psi, SubsetMask J);

/// Eigendecomposition of a dense state, merged into multiplicity pairs.
WeightedSpectrum spectrum_dense(const DensityMatrix& rho);

}  // namespace renyivec
