// Acceptance suite: one check per criterion, each at its stated tolerance,
// one PASS/FAIL line per criterion. Returns the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyivec/cli.hpp"
#include "renyivec/io.hpp"
#include "renyivec/random.hpp"

using namespace renyivec;

namespace {

struct Checker {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void expect_le(double value, double bound, const std::string& what) {
    if (!(value <= bound)) {
      std::ostringstream ss;
      ss << what << ": " << value << " > " << bound;
      failures.push_back(ss.str());
    }
  }
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SparsePureState ghz_state() {
  std::map<std::vector<std::uint64_t>, Complex> amps;
  amps[{0, 0, 0}] = std::sqrt(0.5);
  amps[{1, 1, 1}] = std::sqrt(0.5);
  return make_pure_state(3, {2, 2, 2}, std::move(amps));
}

SparsePureState bell_state() {
  std::map<std::vector<std::uint64_t>, Complex> amps;
  amps[{0, 0}] = std::sqrt(0.5);
  amps[{1, 1}] = std::sqrt(0.5);
  return make_pure_state(2, {2, 2}, std::move(amps));
}

// ---------------------------------------------------------------------------

void criterion1_spike_limit(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  auto r = spike_classical(2, 3.0, 0.5, {1 << 20, 1 << 20}, /*build_state=*/false);
  auto ev = analytic_entropy_vector(r.descriptor);
  c.expect_le(std::abs(ev.at(parse_subset("12", 2)) - 3.0), 0.01, "|S(12) - 3|");
  c.expect_le(ev.at(parse_subset("1", 2)), 0.01, "S(1)");
  c.expect_le(ev.at(parse_subset("2", 2)), 0.01, "S(2)");
  c.expect_le(elapsed_s(start), 1.0, "runtime (s)");
}

void criterion2_explicit_analytic(Checker& c) {
  auto r = spike_classical(2, 2.0, 0.5, {3, 3});
  const std::vector<RenyiOrder> orders = {RenyiOrder::finite(0.3), RenyiOrder::finite(0.5),
                                          RenyiOrder::finite(0.9), RenyiOrder::finite(2),
                                          RenyiOrder::infinity()};
  for (const auto& order : orders) {
    auto enumerated = entropy_vector(*r.classical, order);
    auto analytic = analytic_entropy_vector(r.descriptor, order);
    c.expect_le(enumerated.sup_diff(analytic), 1e-12,
                "sup |enumerated - analytic| at alpha " + order.str());
  }
}

void criterion3_prop2_oracle(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  auto r = spike_quantum_lt1(3, parse_subset("12", 3), 1.0, 0.5, 2);
  const auto& psi = *r.pure;
  std::uint64_t dim = 1;
  for (auto d : psi.dims) dim *= d;
  c.expect(dim == 625, "dense oracle dimension is 625");

  const auto rho = density_from_pure(psi);
  const auto order = RenyiOrder::finite(0.5);
  for (const auto& J : subset_enumerate(4)) {
    const double sparse = renyi_entropy(reduced_spectrum_pure(psi, J), order);
    const double dense =
        renyi_entropy(spectrum_dense(partial_trace_dense(rho, J)), order);
    c.expect_le(std::abs(sparse - dense), 1e-10,
                "sparse vs dense entropy on subset " + J.str());
  }

  const double t = r.descriptor.t();
  const double closed_form =
      2.0 * std::log2(std::sqrt(1.0 - t) + std::exp2(0.5) - 1.0);
  const double s_target =
      renyi_entropy(reduced_spectrum_pure(psi, parse_subset("12", 4)), order);
  c.expect_le(std::abs(s_target - closed_form), 1e-9, "S(I) vs closed form");
  c.expect_le(std::abs(s_target - 0.98884), 5e-3, "S(I) near the quoted 0.98884");
  c.expect_le(elapsed_s(start), 10.0, "runtime (s)");
}

void criterion4_dilution_exact(Checker& c) {
  auto R = two_atom_distribution(2.0, RenyiOrder::finite(2));  // uniform on [4]
  for (int n : {2, 3}) {
    for (const auto& order : {RenyiOrder::finite(2), RenyiOrder::infinity()}) {
      auto r = dilution_classical_gt1(n, order, R);
      auto ev = entropy_vector(*r.classical, order);
      const double h_r = renyi_entropy(R, order);
      const double joint = ev.at(SubsetMask((1u << n) - 1, n));
      c.expect_le(std::abs(joint - (std::log2(n) + h_r)), 1e-12,
                  "S([n]) vs log2 n + H(R), n=" + std::to_string(n) + " alpha " +
                      order.str());
      const double cap = order.tag() == RenyiOrder::Tag::Infinity
                             ? std::log2(static_cast<double>(n))
                             : order.alpha() / (order.alpha() - 1.0) * std::log2(n);
      for (const auto& I : subset_enumerate(n)) {
        if (I.is_full()) continue;
        c.expect_le(ev.at(I), cap + 1e-12,
                    "marginal " + I.str() + " exceeds C, n=" + std::to_string(n));
      }
    }
  }
}

void criterion5_prop5_exact(Checker& c) {
  const double s = 2.0;
  auto R = two_atom_distribution(s, RenyiOrder::finite(2));
  auto r = spike_quantum_gt1(3, parse_subset("12", 4), s, RenyiOrder::finite(2), R);
  auto ev = entropy_vector(*r.pure, RenyiOrder::finite(2));
  c.expect_le(std::abs(ev.at(parse_subset("12", 4)) - 4.0), 1e-12, "|S(I) - 4.0|");
  for (const auto& J : subset_enumerate(4)) {
    if (J.bits == parse_subset("12", 4).bits) continue;
    c.expect_le(ev.at(J), 4.0 + 1e-12, "subset " + J.str() + " above 4.0 bits");
  }
}

void criterion6_audenaert_suite(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<RenyiOrder> orders = {RenyiOrder::finite(1.5), RenyiOrder::finite(2),
                                          RenyiOrder::finite(3), RenyiOrder::infinity()};
  const std::vector<std::pair<int, int>> dim_grid = {{2, 2}, {2, 3}, {3, 3},
                                                     {2, 4}, {3, 4}, {4, 4}};
  int chain_failures = 0, false_equalities = 0;
  for (int i = 0; i < 10000; ++i) {
    Rng rng = Rng::substream(2024, i);
    const auto [da, db] = dim_grid[i % dim_grid.size()];
    const auto rho = random_density_matrix(rng, {da, db});
    for (const auto& order : orders) {
      const auto rep = audenaert_report(rho, order);
      if (rep.lhs > rep.bound_plus + 1e-9 || rep.bound_plus > rep.bound_classic + 1e-9)
        ++chain_failures;
      if (rep.lhs_equals_classic && !(rep.rho_a_pure || rep.rho_b_pure))
        ++false_equalities;
    }
  }
  c.expect(chain_failures == 0,
           std::to_string(chain_failures) + " chain violations beyond 1e-9");
  c.expect(false_equalities == 0,
           std::to_string(false_equalities) + " equalities without a pure marginal");

  // maximally mixed two qubits at alpha = 2: the strengthened bound is tight
  DensityMatrix mm;
  mm.dims = {2, 2};
  mm.mat = 0.25 * Eigen::MatrixXcd::Identity(4, 4);
  const auto rep = audenaert_report(mm, RenyiOrder::finite(2));
  c.expect_le(rep.bound_plus - rep.lhs, 1e-12, "bound_plus - lhs on I/4");
  c.expect_le(std::abs((rep.bound_classic - rep.lhs) - (1.5 - std::sqrt(2.0))), 1e-12,
              "bound_classic - lhs vs 1.5 - sqrt(2)");

  // equality occurs exactly on states with a pure marginal
  for (int i = 0; i < 50; ++i) {
    Rng rng = Rng::substream(77, i);
    const auto b = random_density_matrix(rng, {3});
    DensityMatrix prod;
    prod.dims = {2, 3};
    prod.mat = Eigen::MatrixXcd::Zero(6, 6);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) prod.mat(k, l) = b.mat(k, l);  // |0><0| x rho_B
    const auto pure_rep = audenaert_report(prod, RenyiOrder::finite(2));
    c.expect(pure_rep.rho_a_pure && pure_rep.lhs_equals_classic,
             "pure-marginal state must saturate the classic bound");
  }
  const auto bell_rep =
      audenaert_report(density_from_pure(bell_state()), RenyiOrder::finite(2));
  c.expect(!bell_rep.lhs_equals_classic,
           "Bell state (pure joint, mixed marginals) must stay strict");
  c.expect_le(elapsed_s(start), 60.0, "runtime (s)");
}

void criterion7_monotonicity_dichotomy(Checker& c) {
  std::vector<std::pair<std::string, ConstructionResult>> suite;
  suite.emplace_back("spike n=2", spike_classical(2, 2.0, 0.5, {2, 2}));
  suite.emplace_back("spike n=3", spike_classical(3, 2.0, 0.3, {3, 3, 3}));
  suite.emplace_back("dilution n=2",
                     dilution_classical_gt1(
                         2, RenyiOrder::finite(2),
                         two_atom_distribution(2.0, RenyiOrder::finite(2))));
  suite.emplace_back("dilution n=3",
                     dilution_classical_gt1(
                         3, RenyiOrder::finite(1.5),
                         two_atom_distribution(1.7, RenyiOrder::finite(1.5))));
  suite.emplace_back("upset lt1",
                     upset_classical_lt1(3, {parse_subset("1", 3), parse_subset("23", 3)},
                                         2.0, 0.5, {8, 4, 4}));
  suite.emplace_back("upset gt1",
                     upset_classical_gt1(3, {parse_subset("1", 3), parse_subset("23", 3)},
                                         3.0, RenyiOrder::finite(2)));
  suite.emplace_back("upset gt1 inf",
                     upset_classical_gt1(3, {parse_subset("12", 3)}, 3.0,
                                         RenyiOrder::infinity()));
  for (const auto& [name, r] : suite) {
    const auto ev = entropy_vector(*r.classical, r.descriptor.alpha);
    const auto rep = check_monotonicity(ev);
    c.expect(rep.pass(), name + " violates monotonicity");
  }

  const auto bell = check_monotonicity(entropy_vector(bell_state(), RenyiOrder::finite(2)));
  c.expect(bell.violations.size() == 2,
           "Bell state: expected exactly 2 violating pairs, got " +
               std::to_string(bell.violations.size()));
}

void criterion8_ssa(Checker& c) {
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    Rng rng = Rng::substream(321, i);
    const auto rho = random_density_matrix(rng, {2, 2, 2});
    const auto rep = check_vn_inequalities(entropy_vector(rho, RenyiOrder::one()));
    if (rep.min_slack < -1e-9) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " random states with slack below -1e-9");

  const auto ghz = check_vn_inequalities(entropy_vector(ghz_state(), RenyiOrder::one()));
  for (const auto& s : ghz.slacks)
    if (s.name.rfind("ssa", 0) == 0)
      c.expect_le(std::abs(s.slack - 1.0), 1e-9, "GHZ slack " + s.name + " vs 1");
}

void criterion9_witness_cli(Checker& c) {
  std::ostringstream out, err;
  int status = cli::run({"witness", "--property", "subadditivity", "--alpha", "2",
                         "--trials", "10000", "--seed", "7", "--dims", "2,2"},
                        out, err);
  c.expect(status == 0, "witness run failed: " + err.str());
  auto doc = nlohmann::json::parse(out.str());
  c.expect(doc["found"] == true, "no subadditivity witness found at alpha 2");
  if (doc["found"] == true) {
    const double lhs = doc["witness"]["lhs"].get<double>();
    const double rhs = doc["witness"]["rhs"].get<double>();
    c.expect(lhs > rhs + 1e-6, "witness margin below 1e-6");
  }

  std::ostringstream out1, err1;
  status = cli::run({"witness", "--property", "subadditivity", "--alpha", "1",
                     "--trials", "10000", "--seed", "7", "--dims", "2,2"},
                    out1, err1);
  c.expect(status == 0, "alpha=1 witness run failed");
  c.expect(nlohmann::json::parse(out1.str())["found"] == false,
           "a witness appeared at alpha 1");
}

void criterion10_upsets(Checker& c) {
  const std::vector<SubsetMask> gens = {parse_subset("1", 3), parse_subset("23", 3)};
  const auto upset = upward_closure(3, gens);

  // alpha = 0.5, s = 4: finite-M analytic entropies vs the limit formula at
  // min M_i = 2^16
  auto r = upset_classical_lt1(3, gens, 4.0, 0.5, {1 << 16, 1 << 18, 1 << 18},
                               /*build_state=*/false);
  const auto finite_m = analytic_entropy_vector(r.descriptor);
  const auto limit = upset_lt1_limit_vector(r.descriptor);
  c.expect_le(finite_m.sup_diff(limit), 0.02, "finite-M vs limit at min M = 2^16");
  for (const auto& I : subset_enumerate(3)) {
    if (upset.contains(I.bits)) {
      c.expect(finite_m.at(I) >= 4.0 - 1e-9,
               "H(P_" + I.str() + ") below s inside the upset");
    } else {
      c.expect_le(std::abs(upset_lt1_limit_entropy(r.descriptor, I) - 1.0), 1e-12,
                  "off-upset limit vs log2|L| = 1 on " + I.str());
    }
  }
  // uniform-M schedule converges to the limit from above
  double prev = 1e300;
  for (int p = 8; p <= 20; p += 2) {
    auto row = upset_classical_lt1(3, gens, 4.0, 0.5,
                                   {std::int64_t{1} << p, std::int64_t{1} << p,
                                    std::int64_t{1} << p},
                                   false);
    const double err = analytic_entropy_vector(row.descriptor).sup_diff(limit);
    c.expect(err < prev, "error not decreasing at M = 2^" + std::to_string(p));
    prev = err;
  }

  // alpha = 2: Thm-8 bounds by explicit enumeration at M = 4 (s = 3)
  auto r2 = upset_classical_gt1(3, gens, 3.0, RenyiOrder::finite(2));
  c.expect(r2.descriptor.M[0] == 4, "derived M is 4");
  const double cap = upset_gt1_bound(3, 2, RenyiOrder::finite(2));
  const auto ev2 = entropy_vector(*r2.classical, RenyiOrder::finite(2));
  for (const auto& I : subset_enumerate(3)) {
    if (upset.contains(I.bits)) {
      c.expect(ev2.at(I) >= 3.0 - 1e-9, "H(Q_" + I.str() + ") below s");
      c.expect_le(ev2.at(I), 3.0 + cap + 1e-9, "H(Q_" + I.str() + ") above s + C");
    } else {
      c.expect_le(ev2.at(I), cap + 1e-9, "H(Q_" + I.str() + ") above C");
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Checker&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "spike limit at M = 2^20 (analytic tier)", criterion1_spike_limit},
      {2, "explicit vs analytic agreement at M = (3,3)", criterion2_explicit_analytic},
      {3, "4-party spike vs 625-dim dense oracle", criterion3_prop2_oracle},
      {4, "dilution joint entropy exact, marginals capped", criterion4_dilution_exact},
      {5, "pair-block state: S(I) = 4 exactly, rest <= 4", criterion5_prop5_exact},
      {6, "Audenaert chain on 10^4 random states", criterion6_audenaert_suite},
      {7, "monotonicity dichotomy (classical pass, Bell fails twice)",
       criterion7_monotonicity_dichotomy},
      {8, "SSA and weak monotonicity at order 1", criterion8_ssa},
      {9, "subadditivity witness via the CLI", criterion9_witness_cli},
      {10, "upset constructions: limit formula and Thm-8 bounds", criterion10_upsets},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      checker.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = elapsed_s(start);
    if (checker.failures.empty()) {
      std::printf("[PASS] criterion %2d: %s (%.2f s)\n", criterion.id, criterion.name,
                  secs);
    } else {
      ++failed;
      std::printf("[FAIL] criterion %2d: %s (%.2f s)\n", criterion.id, criterion.name,
                  secs);
      for (const auto& f : checker.failures) std::printf("       - %s\n", f.c_str());
    }
  }
  if (failed == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failed);
  return failed;
}
