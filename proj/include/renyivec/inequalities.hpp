#pragma once

#include <optional>
#include <variant>

#include "renyivec/constructions.hpp"

// Inequality checkers and searchers: non-negativity/monotonicity, the von
// Neumann SSA and weak-monotonicity pair, the strengthened Audenaert bound
// with equality classification, random search for subadditivity violations,
// and convergence sweeps over alphabet schedules.

namespace renyivec {

// Declared satisfactions use 1e-9, declared violations 1e-6: asymmetric so
// numerical noise never manufactures a counterexample.
inline constexpr double kSlackTol = 1e-9;
inline constexpr double kViolationTol = 1e-6;

// ---------------------------------------------------------------------------
// Monotonicity / non-negativity

struct MonotonicityReport {
  // pairs (I, J) with I strictly inside J but S(I) > S(J) + 1e-9
  std::vector<std::pair<std::uint32_t, std::uint32_t>> violations;
  std::vector<std::uint32_t> negative_entries;  // entries below -1e-9

  bool pass() const { return violations.empty() && negative_entries.empty(); }
};

MonotonicityReport check_monotonicity(const EntropyVector& ev);

// ---------------------------------------------------------------------------
// von Neumann SSA / weak monotonicity (n = 3, order 1)

struct VnSlack {
  std::string name;  // e.g. "ssa(13|2)" or "wm(1,2|3)"
  double slack = 0;
};

struct VnReport {
  std::vector<VnSlack> slacks;
  double min_slack = 0;

  bool pass() const { return min_slack >= -kSlackTol; }
};

VnReport check_vn_inequalities(const EntropyVector& ev);

// ---------------------------------------------------------------------------
// Audenaert+ bound

struct AudenaertReport {
  RenyiOrder alpha = RenyiOrder::infinity();
  double norm_a = 0, norm_b = 0, norm_ab = 0;
  double lhs = 0;           // ||rho_A|| + ||rho_B||
  double m_alpha = 0;       // feasibility threshold for kappa
  double kappa_star = 0;    // max(M_alpha, sqrt(norm_ab))
  double bound_plus = 0;    // kappa* + norm_ab / kappa*
  double bound_classic = 0; // 1 + norm_ab
  double mult_a = 0, mult_b = 0;  // top-eigenvalue multiplicities used for M_inf
  bool rho_a_pure = false, rho_b_pure = false, rho_ab_pure = false;
  bool lhs_equals_classic = false;

  /// g(kappa) = kappa + norm_ab / kappa, valid for kappa >= m_alpha.
  double bound_at(double kappa) const { return kappa + norm_ab / kappa; }
};

AudenaertReport audenaert_report(const DensityMatrix& rho_ab, RenyiOrder order);

// ---------------------------------------------------------------------------
// Subadditivity violation search

struct ViolationWitness {
  std::variant<DensityMatrix, ClassicalState> state;
  std::uint32_t subset_a = 1, subset_b = 2;  // the violating pair
  double lhs = 0;    // S(AB)
  double rhs = 0;    // S(A) + S(B)
  double slack = 0;  // rhs - lhs, negative for reported witnesses
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::pair<int, int> dims;
  std::string sampler;  // "quantum" or "classical"
};

/// Samples random bipartite states (alternating Gram-random density matrices
/// and Dirichlet pmfs) until S(AB) > S(A) + S(B) + 1e-6; deterministic in the
/// seed and independent of any trial-level parallelism.
std::optional<ViolationWitness> find_subadditivity_violation(RenyiOrder order,
                                                             std::int64_t trials,
                                                             std::uint64_t seed,
                                                             std::pair<int, int> dims);

// ---------------------------------------------------------------------------
// Convergence sweeps

struct SweepRow {
  std::int64_t M = 0;
  EntropyVector achieved;
  double sup_error = 0;
};

/// One row per schedule entry: tensor-assembled spike composite for the
/// target, evaluated through the analytic tier.
std::vector<SweepRow> convergence_sweep(const EntropyVector& target, RenyiOrder order,
                                        const std::vector<std::int64_t>& schedule);

/// Dilution route for targets s * delta_[n] at alpha > 1; the error column
/// exhibits the constant floor of the additive-constant theorems.
std::vector<SweepRow> convergence_sweep_dilution(double s_bits, int n, RenyiOrder order,
                                                 const std::vector<std::int64_t>& schedule);

}  // namespace renyivec
