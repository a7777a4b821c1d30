#include "renyivec/inequalities.hpp"

#include <cmath>

#include "renyivec/random.hpp"

namespace renyivec {

MonotonicityReport check_monotonicity(const EntropyVector& ev) {
  MonotonicityReport out;
  const std::uint32_t full = (1u << ev.n) - 1;
  for (std::uint32_t J = 1; J <= full; ++J) {
    if (ev.entries[J] < -kSlackTol) out.negative_entries.push_back(J);
    // strict nonempty submasks of J
    for (std::uint32_t I = (J - 1) & J; I != 0; I = (I - 1) & J)
      if (ev.entries[I] > ev.entries[J] + kSlackTol) out.violations.emplace_back(I, J);
  }
  std::sort(out.violations.begin(), out.violations.end(),
            [](const auto& a, const auto& b) {
              return a.second != b.second ? a.second < b.second : a.first < b.first;
            });
  return out;
}

VnReport check_vn_inequalities(const EntropyVector& ev) {
  if (ev.n != 3)
    throw std::invalid_argument("SSA/weak-monotonicity checks are defined for n = 3");
  if (ev.order.tag() != RenyiOrder::Tag::One)
    throw std::invalid_argument("SSA/weak-monotonicity checks need an order-1 vector");

  auto at = [&](std::uint32_t bits) { return ev.entries[bits]; };
  const std::uint32_t full = 0b111;
  VnReport out;
  for (int b = 1; b <= 3; ++b) {
    const std::uint32_t mb = 1u << (b - 1);
    // the two parties other than b, smallest first
    std::uint32_t m1 = 0, m2 = 0;
    for (int p = 1; p <= 3; ++p) {
      if (p == b) continue;
      (m1 ? m2 : m1) = 1u << (p - 1);
    }
    // SSA: S(AB) + S(BC) >= S(ABC) + S(B), with B the middle party
    const double ssa = at(m1 | mb) + at(m2 | mb) - at(full) - at(mb);
    out.slacks.push_back({"ssa(mid=" + SubsetMask(mb, 3).str() + ")", ssa});
    // WM: S(AC) + S(BC) >= S(A) + S(B), with C the shared party
    const double wm = at(m1 | mb) + at(m2 | mb) - at(m1) - at(m2);
    out.slacks.push_back({"wm(shared=" + SubsetMask(mb, 3).str() + ")", wm});
  }
  out.min_slack = out.slacks.front().slack;
  for (const auto& s : out.slacks) out.min_slack = std::min(out.min_slack, s.slack);
  return out;
}

AudenaertReport audenaert_report(const DensityMatrix& rho_ab, RenyiOrder order) {
  if (rho_ab.n() != 2)
    throw std::invalid_argument("the Audenaert bound applies to bipartite states");
  if (!order.above_one())
    throw std::invalid_argument("the Audenaert bound needs alpha > 1 (or infinity)");

  const auto spec_ab = spectrum_dense(rho_ab);
  const auto spec_a = spectrum_dense(partial_trace_dense(rho_ab, SubsetMask(0b01, 2)));
  const auto spec_b = spectrum_dense(partial_trace_dense(rho_ab, SubsetMask(0b10, 2)));

  AudenaertReport out;
  out.alpha = order;
  out.norm_a = schatten_norm(spec_a, order);
  out.norm_b = schatten_norm(spec_b, order);
  out.norm_ab = schatten_norm(spec_ab, order);
  out.lhs = out.norm_a + out.norm_b;
  out.mult_a = spec_a.top_multiplicity();
  out.mult_b = spec_b.top_multiplicity();

  if (order.tag() == RenyiOrder::Tag::Infinity) {
    out.m_alpha = std::max(1.0 / out.mult_a, 1.0 / out.mult_b);
  } else {
    const double a = order.alpha();
    out.m_alpha = std::max(std::pow(spec_a.max_value() / out.norm_a, a - 1.0),
                           std::pow(spec_b.max_value() / out.norm_b, a - 1.0));
  }
  out.kappa_star = std::max(out.m_alpha, std::sqrt(out.norm_ab));
  out.bound_plus = out.bound_at(out.kappa_star);
  out.bound_classic = 1.0 + out.norm_ab;
  out.rho_a_pure = spec_a.max_value() >= 1.0 - kSlackTol;
  out.rho_b_pure = spec_b.max_value() >= 1.0 - kSlackTol;
  out.rho_ab_pure = spec_ab.max_value() >= 1.0 - kSlackTol;
  out.lhs_equals_classic = std::abs(out.lhs - out.bound_classic) <= kSlackTol;
  return out;
}

namespace {

struct SampledEntropies {
  double s_ab, s_a, s_b;
};

SampledEntropies entropies_of(const DensityMatrix& rho, RenyiOrder order) {
  return {renyi_entropy(spectrum_dense(rho), order),
          renyi_entropy(spectrum_dense(partial_trace_dense(rho, SubsetMask(0b01, 2))), order),
          renyi_entropy(spectrum_dense(partial_trace_dense(rho, SubsetMask(0b10, 2))), order)};
}

SampledEntropies entropies_of(const ClassicalState& st, RenyiOrder order) {
  return {renyi_entropy(st.spectrum(), order),
          renyi_entropy(marginalize_classical(st, SubsetMask(0b01, 2)).spectrum(), order),
          renyi_entropy(marginalize_classical(st, SubsetMask(0b10, 2)).spectrum(), order)};
}

}  // namespace

std::optional<ViolationWitness> find_subadditivity_violation(RenyiOrder order,
                                                             std::int64_t trials,
                                                             std::uint64_t seed,
                                                             std::pair<int, int> dims) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (order.tag() == RenyiOrder::Tag::Zero)
    throw std::invalid_argument("subadditivity of the rank is out of scope");
  const std::vector<std::int64_t> d = {dims.first, dims.second};

  for (std::int64_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    const bool quantum = trial % 2 == 0;
    SampledEntropies s{};
    std::variant<DensityMatrix, ClassicalState> state;
    if (quantum) {
      auto rho = random_density_matrix(rng, d);
      s = entropies_of(rho, order);
      state = std::move(rho);
    } else {
      auto pmf = random_classical_state(rng, d);
      s = entropies_of(pmf, order);
      state = std::move(pmf);
    }
    if (s.s_ab > s.s_a + s.s_b + kViolationTol) {
      ViolationWitness w;
      w.state = std::move(state);
      w.lhs = s.s_ab;
      w.rhs = s.s_a + s.s_b;
      w.slack = w.rhs - w.lhs;
      w.trial = static_cast<std::uint64_t>(trial);
      w.seed = seed;
      w.dims = dims;
      w.sampler = quantum ? "quantum" : "classical";
      return w;
    }
  }
  return std::nullopt;
}

std::vector<SweepRow> convergence_sweep(const EntropyVector& target, RenyiOrder order,
                                        const std::vector<std::int64_t>& schedule) {
  if (schedule.empty()) throw std::invalid_argument("empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("schedule must be strictly increasing");

  std::vector<SweepRow> rows;
  rows.reserve(schedule.size());
  for (std::int64_t m : schedule) {
    auto r = target_vector_state(target, order, m, /*build_state=*/false);
    SweepRow row;
    row.M = m;
    row.achieved = analytic_entropy_vector(r.descriptor, order);
    row.sup_error = row.achieved.sup_diff(target);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> convergence_sweep_dilution(double s_bits, int n, RenyiOrder order,
                                                 const std::vector<std::int64_t>& schedule) {
  if (schedule.empty()) throw std::invalid_argument("empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("schedule must be strictly increasing");

  EntropyVector target(n, order);
  target.entries[(1u << n) - 1] = s_bits;
  std::vector<SweepRow> rows;
  for (std::int64_t m : schedule) {
    auto R = two_atom_distribution(s_bits, order, m);
    auto r = dilution_classical_gt1(n, order, R, /*build_state=*/false);
    SweepRow row;
    row.M = m;
    row.achieved = analytic_entropy_vector(r.descriptor, order);
    row.sup_error = row.achieved.sup_diff(target);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace renyivec
