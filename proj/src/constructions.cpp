#include "renyivec/constructions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

namespace renyivec {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void require_alpha_lt1(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("this construction requires alpha in (0,1)");
}

void require_order_gt1(RenyiOrder order) {
  if (!order.above_one())
    throw std::invalid_argument("this construction requires alpha > 1 (or infinity)");
}

double checked_product(const std::vector<std::int64_t>& M) {
  double prod = 1;
  for (auto m : M) {
    if (m < 1) throw std::invalid_argument("alphabet sizes must be positive");
    prod *= static_cast<double>(m);
  }
  return prod;
}

double log2_product(const std::vector<std::int64_t>& M, std::uint32_t bits) {
  double s = 0;
  for (std::size_t i = 0; i < M.size(); ++i)
    if ((bits >> i) & 1u) s += std::log2(static_cast<double>(M[i]));
  return s;
}

double product_masked(const std::vector<std::int64_t>& M, std::uint32_t bits) {
  double prod = 1;
  for (std::size_t i = 0; i < M.size(); ++i)
    if ((bits >> i) & 1u) prod *= static_cast<double>(M[i]);
  return prod;
}

/// Spike weight solving t^alpha * M^(1-alpha) = 2^(s(1-alpha)) - minus_one,
/// evaluated in log space so huge alphabets keep full precision.
double spike_t(double s_bits, double alpha, double log2_m_product, bool minus_one) {
  const double x = s_bits * (1.0 - alpha) * kLn2;
  const double target = minus_one ? std::expm1(x) : std::exp(x);
  if (!(target > 0)) throw std::invalid_argument("target entropy must be positive");
  const double log2_t =
      (std::log2(target) - (1.0 - alpha) * log2_m_product) / alpha;
  const double t = std::exp2(log2_t);
  // snap the t=1 boundary so roundoff cannot leave a spurious all-zero atom
  if (std::abs(t - 1.0) <= 1e-12) return 1.0;
  return t;
}

void expand_distribution(const WeightedSpectrum& R, std::vector<double>* out) {
  for (const auto& atom : R.atoms) {
    const double m = atom.multiplicity;
    if (std::abs(m - std::round(m)) > 1e-9 || m < 1)
      throw std::invalid_argument("distribution multiplicities must be integral");
    if (out->size() + static_cast<std::size_t>(m) >
        static_cast<std::size_t>(kMaxClassicalAtoms))
      throw BudgetError("distribution support exceeds the enumeration budget");
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(std::round(m)); ++i)
      out->push_back(atom.value);
  }
}

std::vector<WeightedSpectrum::Atom> convolve(
    const std::vector<WeightedSpectrum::Atom>& a,
    const std::vector<WeightedSpectrum::Atom>& b) {
  std::vector<WeightedSpectrum::Atom> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b)
      out.push_back({x.value * y.value, x.multiplicity * y.multiplicity});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Upsets

bool Upset::contains(std::uint32_t bits) const {
  return std::binary_search(members.begin(), members.end(), bits);
}

Upset upward_closure(int n, const std::vector<SubsetMask>& generators) {
  if (generators.empty())
    throw std::invalid_argument("upset needs at least one generator");
  for (const auto& g : generators) {
    if (g.n != n) throw std::invalid_argument("generator party count mismatch");
    if (g.empty()) throw std::invalid_argument("generators must be nonempty subsets");
  }
  Upset out;
  out.n = n;
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits)
    for (const auto& g : generators)
      if ((g.bits & ~bits) == 0) {
        out.members.push_back(bits);
        break;
      }
  // minimal members form the antichain of generators with redundancy removed
  for (std::uint32_t m : out.members) {
    bool minimal = true;
    for (std::uint32_t other : out.members)
      if (other != m && (other & ~m) == 0) {
        minimal = false;
        break;
      }
    if (minimal) out.minimal.push_back(m);
  }
  return out;
}

EntropyVector indicator_vector(const Upset& u) {
  EntropyVector out(u.n, RenyiOrder::one());
  for (std::uint32_t bits : u.members) out.entries[bits] = 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Descriptor plumbing

std::string kind_name(ConstructionKind kind) {
  switch (kind) {
    case ConstructionKind::SpikeClassical: return "spike_classical";
    case ConstructionKind::SpikeQuantumLt1: return "spike_quantum_lt1";
    case ConstructionKind::DilutionGt1: return "dilution_gt1";
    case ConstructionKind::SpikeQuantumGt1: return "spike_quantum_gt1";
    case ConstructionKind::UpsetLt1: return "upset_lt1";
    case ConstructionKind::UpsetGt1: return "upset_gt1";
    case ConstructionKind::Purification: return "purification";
    case ConstructionKind::TensorComposite: return "tensor_composite";
  }
  return "?";
}

int total_parties(const ConstructionDescriptor& desc) {
  switch (desc.kind) {
    case ConstructionKind::SpikeQuantumLt1:
    case ConstructionKind::SpikeQuantumGt1:
      return desc.n + 1;
    case ConstructionKind::Purification:
      return total_parties(desc.components.at(0)) + 1;
    default:
      return desc.n;
  }
}

// ---------------------------------------------------------------------------
// alpha < 1 spikes

std::int64_t min_alphabet_size(double s_bits, double alpha, int n) {
  require_alpha_lt1(alpha);
  if (n < 1) throw std::invalid_argument("empty system: party count must be >= 1");
  if (!(s_bits > 0)) throw std::invalid_argument("target entropy must be positive");
  const double x = std::expm1(s_bits * (1.0 - alpha) * kLn2);  // 2^{s(1-a)} - 1
  const double raw = std::pow(x, 1.0 / (1.0 - alpha));
  if (raw > 4.6e18) throw std::invalid_argument("minimal alphabet exceeds int64 range");
  auto feasible = [&](std::int64_t m) {
    return std::pow(static_cast<double>(m), 1.0 - alpha) >= x * (1.0 - 1e-12);
  };
  std::int64_t m = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw - 1e-9)));
  while (!feasible(m)) ++m;
  while (m > 1 && feasible(m - 1)) --m;
  return m;
}

ConstructionResult spike_classical(int n, double s_bits, double alpha,
                                   std::vector<std::int64_t> M, bool build_state) {
  require_alpha_lt1(alpha);
  if (n < 1) throw std::invalid_argument("empty system: party count must be >= 1");
  if (static_cast<int>(M.size()) != n)
    throw std::invalid_argument("need one alphabet size per party");
  const double log2_m = log2_product(M, (1u << n) - 1);
  const double t = spike_t(s_bits, alpha, log2_m, /*minus_one=*/true);
  if (t > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "alphabet product " + std::to_string(static_cast<long long>(checked_product(M))) +
        " too small for " + std::to_string(s_bits) + " bits at alpha " +
        std::to_string(alpha) + "; min_alphabet_size = " +
        std::to_string(min_alphabet_size(s_bits, alpha, n)));
  }

  ConstructionResult out;
  out.descriptor.kind = ConstructionKind::SpikeClassical;
  out.descriptor.n = n;
  out.descriptor.alpha = RenyiOrder::finite(alpha);
  out.descriptor.s_bits = s_bits;
  out.descriptor.M = M;
  out.descriptor.subset_bits = (1u << n) - 1;
  out.descriptor.t_list = {std::min(t, 1.0)};

  if (build_state) {
    const double prod = checked_product(M);
    if (prod + 1 > static_cast<double>(kMaxClassicalAtoms))
      throw BudgetError("spike support exceeds the enumeration budget");
    std::map<std::vector<std::uint32_t>, double> atoms;
    atoms[std::vector<std::uint32_t>(n, 0)] = 1.0 - t;
    std::vector<std::uint32_t> idx(n, 1);
    const double p = t / prod;
    while (true) {
      atoms[idx] = p;
      int i = n - 1;
      while (i >= 0 && idx[i] == static_cast<std::uint32_t>(M[i])) {
        idx[i] = 1;
        --i;
      }
      if (i < 0) break;
      ++idx[i];
    }
    std::vector<std::int64_t> sizes;
    for (auto m : M) sizes.push_back(m + 1);
    out.classical = make_classical_state(n, sizes, std::move(atoms));
  }
  return out;
}

ConstructionResult spike_quantum_lt1(int n, SubsetMask I, double s_bits, double alpha,
                                     std::int64_t M, bool build_state) {
  require_alpha_lt1(alpha);
  if (I.n != n || I.empty())
    throw std::invalid_argument("target subset must be a nonempty subset of [n]");
  if (M < 2) throw std::invalid_argument("spike_quantum_lt1 requires M >= 2");
  const int k = I.popcount();
  const int l = n + 1 - k;
  const double log2_m_grid = static_cast<double>(k) * l * std::log2(static_cast<double>(M));
  const double t = spike_t(s_bits, alpha, log2_m_grid, /*minus_one=*/true);
  if (t > 1.0 + 1e-12)
    throw std::invalid_argument(
        "M^(k*l) too small for the target; need M^" + std::to_string(k * l) +
        " >= " + std::to_string(min_alphabet_size(s_bits, alpha, n)));

  ConstructionResult out;
  out.descriptor.kind = ConstructionKind::SpikeQuantumLt1;
  out.descriptor.n = n;
  out.descriptor.alpha = RenyiOrder::finite(alpha);
  out.descriptor.s_bits = s_bits;
  out.descriptor.M = {M};
  out.descriptor.subset_bits = I.bits;
  out.descriptor.t_list = {std::min(t, 1.0)};

  if (build_state) {
    const double n_amp = std::pow(static_cast<double>(M), k * l);
    if (n_amp + 1 > static_cast<double>(kMaxPureAmplitudes))
      throw BudgetError("spike amplitude count exceeds the budget; use the analytic tier");
    const std::uint64_t grid_cells = static_cast<std::uint64_t>(k) * l;
    const std::uint64_t n_grid = static_cast<std::uint64_t>(n_amp);

    // rows of the label grid belong to parties in I, columns to the rest
    const SubsetMask ext(I.bits, n + 1);
    const auto rows = ext.parties();
    const auto cols = SubsetMask(~ext.bits & ((1u << (n + 1)) - 1), n + 1).parties();

    std::vector<std::uint64_t> dims(n + 1, 0);
    std::uint64_t dim_row = 1, dim_col = 1;
    for (int j = 0; j < l; ++j) dim_row *= static_cast<std::uint64_t>(M);
    for (int i = 0; i < k; ++i) dim_col *= static_cast<std::uint64_t>(M);
    for (int p : rows) dims[p - 1] = 1 + dim_row;
    for (int p : cols) dims[p - 1] = 1 + dim_col;

    std::map<std::vector<std::uint64_t>, Complex> amps;
    amps[std::vector<std::uint64_t>(n + 1, 0)] = std::sqrt(1.0 - t);
    const double a = std::sqrt(t / n_amp);
    std::vector<std::uint64_t> cell(grid_cells, 0);  // digit (i*l + j), base M
    std::vector<std::uint64_t> idx(n + 1, 0);
    for (std::uint64_t flat = 0; flat < n_grid; ++flat) {
      std::uint64_t rem = flat;
      for (std::uint64_t c = 0; c < grid_cells; ++c) {
        cell[c] = rem % M;
        rem /= M;
      }
      for (int i = 0; i < k; ++i) {
        std::uint64_t label = 0;
        for (int j = l - 1; j >= 0; --j) label = label * M + cell[i * l + j];
        idx[rows[i] - 1] = 1 + label;
      }
      for (int j = 0; j < l; ++j) {
        std::uint64_t label = 0;
        for (int i = k - 1; i >= 0; --i) label = label * M + cell[i * l + j];
        idx[cols[j] - 1] = 1 + label;
      }
      amps[idx] = a;
    }
    out.pure = make_pure_state(n + 1, dims, std::move(amps));
  }
  return out;
}

// ---------------------------------------------------------------------------
// alpha > 1 constructions

ConstructionResult dilution_classical_gt1(int n, RenyiOrder order,
                                          const WeightedSpectrum& R, bool build_state) {
  require_order_gt1(order);
  if (n < 2) throw std::invalid_argument("dilution requires n >= 2");
  if (std::abs(R.total_mass() - 1.0) > kUnitMassTol)
    throw std::invalid_argument("R must be a probability distribution");

  ConstructionResult out;
  out.descriptor.kind = ConstructionKind::DilutionGt1;
  out.descriptor.n = n;
  out.descriptor.alpha = order;
  out.descriptor.R = R;
  out.descriptor.s_bits = renyi_entropy(R, order);
  out.descriptor.subset_bits = (1u << n) - 1;

  std::vector<double> symbols;
  expand_distribution(R, &symbols);
  const std::int64_t m = static_cast<std::int64_t>(symbols.size());
  out.descriptor.M = {m};

  if (build_state) {
    if (static_cast<double>(n) * m > static_cast<double>(kMaxClassicalAtoms))
      throw BudgetError("dilution support exceeds the enumeration budget");
    std::map<std::vector<std::uint32_t>, double> atoms;
    for (int i = 0; i < n; ++i)
      for (std::int64_t x = 0; x < m; ++x) {
        std::vector<std::uint32_t> idx(n, 0);
        idx[i] = static_cast<std::uint32_t>(1 + x);
        atoms[idx] = symbols[x] / n;
      }
    out.classical = make_classical_state(
        n, std::vector<std::int64_t>(n, m + 1), std::move(atoms));
  }
  return out;
}

ConstructionResult spike_quantum_gt1(int n, SubsetMask I, double s_bits,
                                     RenyiOrder order, const WeightedSpectrum& R,
                                     bool build_state) {
  require_order_gt1(order);
  if (I.n != n + 1 || I.empty() || I.is_full())
    throw std::invalid_argument(
        "target subset must be a nonempty proper subset of [n+1]");
  if (std::abs(renyi_entropy(R, order) - s_bits) > 1e-9)
    throw std::invalid_argument("H_alpha(R) does not match the requested s");

  const int k = I.popcount();
  const int l = n + 1 - k;
  ConstructionResult out;
  out.descriptor.kind = ConstructionKind::SpikeQuantumGt1;
  out.descriptor.n = n;
  out.descriptor.alpha = order;
  out.descriptor.s_bits = s_bits;
  out.descriptor.subset_bits = I.bits;
  out.descriptor.R = R;

  std::vector<double> symbols;
  expand_distribution(R, &symbols);
  const std::uint64_t m = symbols.size();
  out.descriptor.M = {static_cast<std::int64_t>(m)};

  if (build_state) {
    const std::uint64_t blocks = static_cast<std::uint64_t>(k) * l;
    if (blocks * m > static_cast<std::uint64_t>(kMaxPureAmplitudes))
      throw BudgetError("block amplitude count exceeds the budget");
    const auto rows = I.parties();
    const auto cols = I.complement().parties();

    // party p's local space is a direct sum over blocks: an M-dimensional
    // sector when p is an endpoint of the block, a 1-dimensional tag otherwise
    std::vector<std::uint64_t> dims(n + 1, 0);
    std::vector<std::vector<std::uint64_t>> offset(blocks,
                                                   std::vector<std::uint64_t>(n + 1, 0));
    {
      std::vector<std::uint64_t> cursor(n + 1, 0);
      std::uint64_t b = 0;
      for (int i : rows)
        for (int j : cols) {
          for (int p = 1; p <= n + 1; ++p) {
            offset[b][p - 1] = cursor[p - 1];
            cursor[p - 1] += (p == i || p == j) ? m : 1;
          }
          ++b;
        }
      for (int p = 1; p <= n + 1; ++p) dims[p - 1] = cursor[p - 1];
    }

    std::map<std::vector<std::uint64_t>, Complex> amps;
    std::uint64_t b = 0;
    for (int i : rows)
      for (int j : cols) {
        for (std::uint64_t x = 0; x < m; ++x) {
          std::vector<std::uint64_t> idx(n + 1);
          for (int p = 1; p <= n + 1; ++p)
            idx[p - 1] = offset[b][p - 1] + ((p == i || p == j) ? x : 0);
          amps[idx] = std::sqrt(symbols[x] / static_cast<double>(blocks));
        }
        ++b;
      }
    out.pure = make_pure_state(n + 1, dims, std::move(amps));
  }
  return out;
}

WeightedSpectrum two_atom_distribution(double s_bits, RenyiOrder order, std::int64_t M) {
  if (s_bits < 0) throw std::invalid_argument("target entropy must be nonnegative");
  if (s_bits == 0) return WeightedSpectrum{{{1.0, 1.0}}};
  std::int64_t m_min =
      static_cast<std::int64_t>(std::ceil(std::exp2(s_bits) - 1e-9));
  if (std::log2(static_cast<double>(m_min)) < s_bits - 1e-12) ++m_min;
  const std::int64_t m = std::max(M, m_min);
  if (m > kMaxClassicalAtoms)
    throw BudgetError("distribution alphabet exceeds the enumeration budget");

  if (std::abs(std::log2(static_cast<double>(m)) - s_bits) <= 1e-12)
    return exact_spectrum({{1.0 / m, static_cast<double>(m)}});

  auto dist = [&](double p) {
    std::vector<WeightedSpectrum::Atom> atoms{{p, 1.0}};
    if (m > 1) atoms.push_back({(1.0 - p) / (m - 1), static_cast<double>(m - 1)});
    return exact_spectrum(std::move(atoms));
  };
  if (order.tag() == RenyiOrder::Tag::Infinity) {
    const double p = std::exp2(-s_bits);
    return dist(p);
  }
  double lo = 1.0 / m, hi = 1.0 - 1e-15;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (renyi_entropy(dist(mid), order) >= s_bits)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-17) break;
  }
  auto R = dist(lo);
  if (std::abs(renyi_entropy(R, order) - s_bits) > 1e-9)
    throw std::runtime_error("two-atom bisection failed to reach the target entropy");
  return R;
}

// ---------------------------------------------------------------------------
// Upset constructions

ConstructionResult upset_classical_lt1(int n, const std::vector<SubsetMask>& generators,
                                       double s_bits, double alpha,
                                       std::vector<std::int64_t> M, bool build_state) {
  require_alpha_lt1(alpha);
  if (static_cast<int>(M.size()) != n)
    throw std::invalid_argument("need one alphabet size per party");
  const Upset upset = upward_closure(n, generators);
  const double big_l = static_cast<double>(upset.minimal.size());
  const double s_prime = s_bits + alpha / (1.0 - alpha) * std::log2(big_l);

  ConstructionResult out;
  out.descriptor.kind = ConstructionKind::UpsetLt1;
  out.descriptor.n = n;
  out.descriptor.alpha = RenyiOrder::finite(alpha);
  out.descriptor.s_bits = s_bits;
  out.descriptor.M = M;
  out.descriptor.generators = upset.minimal;

  for (std::uint32_t g : upset.minimal) {
    const double t = spike_t(s_prime, alpha, log2_product(M, g), /*minus_one=*/false);
    if (t > 1.0 + 1e-12)
      throw std::invalid_argument("alphabet product over generator " +
                                  SubsetMask(g, n).str() + " must be at least 2^" +
                                  std::to_string(s_prime) + " to keep t <= 1");
    out.descriptor.t_list.push_back(std::min(t, 1.0));
  }

  if (build_state) {
    double support = 0;
    for (std::uint32_t g : upset.minimal) support += 1 + product_masked(M, g);
    if (support > static_cast<double>(kMaxClassicalAtoms))
      throw BudgetError("upset support exceeds the enumeration budget");

    // per-party alphabets are disjoint unions of one sector per generator
    const std::size_t big_ln = upset.minimal.size();
    std::vector<std::vector<std::uint32_t>> sector_base(
        big_ln, std::vector<std::uint32_t>(n, 0));
    std::vector<std::int64_t> sizes(n, 0);
    for (std::size_t j = 0; j < big_ln; ++j)
      for (int i = 0; i < n; ++i) {
        sector_base[j][i] = static_cast<std::uint32_t>(sizes[i]);
        sizes[i] += ((upset.minimal[j] >> i) & 1u) ? M[i] + 1 : 1;
      }

    std::map<std::vector<std::uint32_t>, double> atoms;
    for (std::size_t j = 0; j < big_ln; ++j) {
      const std::uint32_t g = upset.minimal[j];
      const double t = out.descriptor.t_list[j];
      const double mj = product_masked(M, g);
      std::vector<int> members;
      for (int i = 0; i < n; ++i)
        if ((g >> i) & 1u) members.push_back(i);

      std::vector<std::uint32_t> idx(n);
      for (int i = 0; i < n; ++i) idx[i] = sector_base[j][i];
      atoms[idx] = (1.0 - t) / big_l;  // all-zero tuple of this sector

      std::vector<std::uint32_t> digit(members.size(), 1);
      while (true) {
        for (std::size_t d = 0; d < members.size(); ++d)
          idx[members[d]] = sector_base[j][members[d]] + digit[d];
        atoms[idx] = t / (mj * big_l);
        int d = static_cast<int>(members.size()) - 1;
        while (d >= 0 && digit[d] == static_cast<std::uint32_t>(M[members[d]])) {
          digit[d] = 1;
          --d;
        }
        if (d < 0) break;
        ++digit[d];
      }
    }
    out.classical = make_classical_state(n, sizes, std::move(atoms));
  }
  return out;
}

double upset_gt1_bound(int n, int k, RenyiOrder order) {
  const double log_arg = std::log2(2.0 * std::pow(static_cast<double>(n), k));
  if (order.tag() == RenyiOrder::Tag::Infinity) return log_arg;
  const double a = order.alpha();
  return a / (a - 1.0) * log_arg;
}

ConstructionResult upset_classical_gt1(int n, const std::vector<SubsetMask>& generators,
                                       double s_bits, RenyiOrder order,
                                       bool build_state) {
  require_order_gt1(order);
  if (!(s_bits > 0)) throw std::invalid_argument("target entropy must be positive");
  const Upset upset = upward_closure(n, generators);

  // smallest M with s <= 1 + log2 M
  std::int64_t m = static_cast<std::int64_t>(std::ceil(std::exp2(s_bits - 1.0) - 1e-9));
  m = std::max<std::int64_t>(m, 1);
  while (s_bits > 1.0 + std::log2(static_cast<double>(m)) + 1e-12) ++m;

  ConstructionResult out;
  out.descriptor.kind = ConstructionKind::UpsetGt1;
  out.descriptor.n = n;
  out.descriptor.alpha = order;
  out.descriptor.s_bits = s_bits;
  out.descriptor.M = {m};
  out.descriptor.generators = upset.minimal;

  if (build_state) {
    double support = static_cast<double>(m);
    double block_prob = 0.5;
    for (std::uint32_t g : upset.minimal) {
      const int gsz = SubsetMask(g, n).popcount();
      support *= 1;  // diagonal part accounted below
      block_prob /= static_cast<double>(gsz) * m;
    }
    double prod_support = 1;
    for (std::uint32_t g : upset.minimal)
      prod_support *= static_cast<double>(SubsetMask(g, n).popcount()) * m;
    support = static_cast<double>(m) + prod_support;
    if (support > static_cast<double>(kMaxClassicalAtoms))
      throw BudgetError("upset support exceeds the enumeration budget");

    // party alphabet: [m] diagonal sector, then the product sector flattened
    // as one digit in {0..m} per generator containing the party
    const std::size_t k = upset.minimal.size();
    std::vector<std::int64_t> sizes(n);
    for (int i = 0; i < n; ++i) {
      double prod = 1;
      for (std::uint32_t g : upset.minimal)
        if ((g >> i) & 1u) prod *= static_cast<double>(m + 1);
      if (prod > 1e15) throw BudgetError("party alphabet exceeds the budget");
      sizes[i] = m + static_cast<std::int64_t>(prod);
    }

    std::map<std::vector<std::uint32_t>, double> atoms;
    for (std::int64_t x = 0; x < m; ++x) {
      std::vector<std::uint32_t> idx(n, static_cast<std::uint32_t>(x));
      atoms[idx] = 0.5 / static_cast<double>(m);
    }

    // product sector: one dilution atom (carrier party, value) per generator
    std::vector<std::pair<int, std::int64_t>> choice(k);  // (party index, value)
    std::vector<std::vector<int>> gen_parties(k);
    for (std::size_t j = 0; j < k; ++j)
      gen_parties[j] = SubsetMask(upset.minimal[j], n).parties();
    auto emit = [&]() {
      std::vector<std::uint32_t> idx(n);
      for (int i = 0; i < n; ++i) {
        std::uint64_t digit = 0;
        for (std::size_t j = 0; j < k; ++j)
          if ((upset.minimal[j] >> i) & 1u) {
            const std::uint64_t v =
                (choice[j].first == i) ? static_cast<std::uint64_t>(choice[j].second + 1)
                                       : 0;
            digit = digit * (m + 1) + v;
          }
        idx[i] = static_cast<std::uint32_t>(m + digit);
      }
      atoms[idx] = block_prob;
    };
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (j == k) {
        emit();
        return;
      }
      for (int party : gen_parties[j])
        for (std::int64_t x = 0; x < m; ++x) {
          choice[j] = {party - 1, x};
          rec(j + 1);
        }
    };
    rec(0);
    out.classical = make_classical_state(n, sizes, std::move(atoms));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Purification and tensor assembly

SparsePureState purify_classical(const ClassicalState& state) {
  state.validate();
  if (state.atoms.size() > static_cast<std::size_t>(kMaxPureAmplitudes))
    throw BudgetError("support too large to purify explicitly");
  std::vector<std::uint64_t> dims(state.alphabet_sizes.begin(), state.alphabet_sizes.end());
  dims.push_back(state.atoms.size());
  std::map<std::vector<std::uint64_t>, Complex> amps;
  std::uint64_t copy = 0;
  for (const auto& [idx, p] : state.atoms) {
    std::vector<std::uint64_t> key(idx.begin(), idx.end());
    key.push_back(copy++);
    amps[key] = std::sqrt(p);
  }
  return make_pure_state(state.n + 1, dims, std::move(amps));
}

ConstructionResult purification(const ConstructionResult& inner) {
  switch (inner.descriptor.kind) {
    case ConstructionKind::SpikeClassical:
    case ConstructionKind::DilutionGt1:
    case ConstructionKind::UpsetLt1:
    case ConstructionKind::UpsetGt1:
      break;
    default:
      throw std::invalid_argument("purification wraps classical construction kinds");
  }
  ConstructionResult out;
  out.descriptor.kind = ConstructionKind::Purification;
  out.descriptor.n = inner.descriptor.n + 1;
  out.descriptor.alpha = inner.descriptor.alpha;
  out.descriptor.s_bits = inner.descriptor.s_bits;
  out.descriptor.components = {inner.descriptor};
  if (inner.classical) out.pure = purify_classical(*inner.classical);
  return out;
}

ConstructionResult target_vector_state(const EntropyVector& target, RenyiOrder order,
                                       std::int64_t M, bool build_state) {
  if (!(order.below_one() || order.above_one()))
    throw std::invalid_argument("target assembly needs alpha in (0,1) or (1,inf]");
  const int n = target.n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    if (target.entries[mask] < -kPsdTol)
      throw std::invalid_argument("target coordinates must be nonnegative");

  ConstructionResult out;
  out.descriptor.kind = ConstructionKind::TensorComposite;
  out.descriptor.n = n;
  out.descriptor.alpha = order;
  out.descriptor.M = {M};

  std::vector<int> party_map(n + 1);
  for (int p = 1; p <= n + 1; ++p) party_map[p - 1] = p;  // env -> n+1

  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const double s = target.entries[mask];
    if (!(s > 1e-15)) continue;
    if (order.below_one()) {
      auto comp = spike_quantum_lt1(n, SubsetMask(mask, n), s, order.alpha(), M,
                                    /*build_state=*/false);
      out.descriptor.components.push_back(std::move(comp.descriptor));
    } else {
      auto R = two_atom_distribution(s, order, M);
      auto comp = spike_quantum_gt1(n, SubsetMask(mask, n + 1), s, order, R,
                                    /*build_state=*/false);
      out.descriptor.components.push_back(std::move(comp.descriptor));
    }
    out.descriptor.component_party_maps.push_back(party_map);
  }

  if (!build_state) return out;

  // explicit tier: product of the component pure states, with all purifying
  // parties aggregated into one environment party n+1
  std::vector<SparsePureState> states;
  double amp_count = 1;
  for (const auto& comp : out.descriptor.components) {
    ConstructionResult built;
    if (comp.kind == ConstructionKind::SpikeQuantumLt1)
      built = spike_quantum_lt1(n, SubsetMask(comp.subset_bits, n), comp.s_bits,
                                comp.alpha.alpha(), comp.M[0], true);
    else
      built = spike_quantum_gt1(n, SubsetMask(comp.subset_bits, n + 1), comp.s_bits,
                                comp.alpha, comp.R, true);
    amp_count *= static_cast<double>(built.pure->amplitudes.size());
    if (amp_count > static_cast<double>(kMaxPureAmplitudes))
      throw BudgetError("composite amplitude count exceeds the budget");
    states.push_back(std::move(*built.pure));
  }

  SparsePureState composite;
  composite.n = n + 1;
  composite.dims.assign(n + 1, 1);
  composite.amplitudes = {{std::vector<std::uint64_t>(n + 1, 0), Complex(1, 0)}};
  for (const auto& st : states) {
    std::vector<std::pair<std::vector<std::uint64_t>, Complex>> next;
    next.reserve(composite.amplitudes.size() * st.amplitudes.size());
    for (const auto& [ia, aa] : composite.amplitudes)
      for (const auto& [ib, ab] : st.amplitudes) {
        auto idx = ia;
        for (int p = 0; p <= n; ++p) idx[p] = idx[p] * st.dims[p] + ib[p];
        next.emplace_back(std::move(idx), aa * ab);
      }
    composite.amplitudes = std::move(next);
    for (int p = 0; p <= n; ++p) composite.dims[p] *= st.dims[p];
  }
  std::sort(composite.amplitudes.begin(), composite.amplitudes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  composite.validate();
  out.pure = std::move(composite);
  return out;
}

// ---------------------------------------------------------------------------
// Analytic tier

namespace {

WeightedSpectrum spike_like_spectrum(double t, double m_count) {
  std::vector<WeightedSpectrum::Atom> atoms;
  if (t < 1.0) atoms.push_back({1.0 - t, 1.0});
  if (t > 0.0) atoms.push_back({t / m_count, m_count});
  return exact_spectrum(std::move(atoms));
}

// Number of grid cells (i,j) with exactly one endpoint inside J, for the
// k x l pairing between I and its complement.
double split_cells(const ConstructionDescriptor& desc, SubsetMask J) {
  const int np = desc.n + 1;
  const SubsetMask I(desc.subset_bits, np);
  const int k = I.popcount();
  const int l = np - k;
  const int a = std::popcount(J.bits & I.bits);
  const int b = std::popcount(J.bits & ~I.bits & ((1u << np) - 1));
  return static_cast<double>(a) * (l - b) + static_cast<double>(k - a) * b;
}

}  // namespace

WeightedSpectrum analytic_marginal_spectrum(const ConstructionDescriptor& desc,
                                            SubsetMask I) {
  const int np = total_parties(desc);
  if (I.n != np || I.empty())
    throw std::invalid_argument("subset must be a nonempty subset of the state's parties");

  switch (desc.kind) {
    case ConstructionKind::SpikeClassical:
      return spike_like_spectrum(desc.t(), product_masked(desc.M, I.bits));

    case ConstructionKind::SpikeQuantumLt1: {
      if (I.is_full()) return WeightedSpectrum{{{1.0, 1.0}}};
      const double c = split_cells(desc, I);
      return spike_like_spectrum(desc.t(),
                                 std::pow(static_cast<double>(desc.M[0]), c));
    }

    case ConstructionKind::DilutionGt1: {
      const int m_parties = I.popcount();
      const double n = desc.n;
      std::vector<WeightedSpectrum::Atom> atoms;
      if (m_parties < desc.n)
        atoms.push_back({(n - m_parties) / n, 1.0});
      for (const auto& r : desc.R.atoms)
        atoms.push_back({r.value / n, r.multiplicity * m_parties});
      return exact_spectrum(std::move(atoms));
    }

    case ConstructionKind::SpikeQuantumGt1: {
      if (I.is_full()) return WeightedSpectrum{{{1.0, 1.0}}};
      const SubsetMask target(desc.subset_bits, np);
      const double blocks =
          static_cast<double>(target.popcount()) * (np - target.popcount());
      const double split = split_cells(desc, I);
      std::vector<WeightedSpectrum::Atom> atoms;
      if (blocks - split > 0) atoms.push_back({1.0 / blocks, blocks - split});
      if (split > 0)
        for (const auto& r : desc.R.atoms)
          atoms.push_back({r.value / blocks, r.multiplicity * split});
      return exact_spectrum(std::move(atoms));
    }

    case ConstructionKind::UpsetLt1: {
      const double big_l = static_cast<double>(desc.generators.size());
      std::vector<WeightedSpectrum::Atom> atoms;
      for (std::size_t j = 0; j < desc.generators.size(); ++j) {
        const std::uint32_t overlap = desc.generators[j] & I.bits;
        if (overlap == 0) {
          atoms.push_back({1.0 / big_l, 1.0});
          continue;
        }
        const double t = desc.t_list[j];
        const double mk = product_masked(desc.M, overlap);
        if (t < 1.0) atoms.push_back({(1.0 - t) / big_l, 1.0});
        if (t > 0.0) atoms.push_back({t / (mk * big_l), mk});
      }
      return exact_spectrum(std::move(atoms));
    }

    case ConstructionKind::UpsetGt1: {
      const double m = static_cast<double>(desc.M[0]);
      std::vector<WeightedSpectrum::Atom> product{{0.5, 1.0}};
      for (std::uint32_t g : desc.generators) {
        const std::uint32_t overlap = g & I.bits;
        if (overlap == 0) continue;
        const double gsz = SubsetMask(g, desc.n).popcount();
        const double ksz = SubsetMask(overlap, desc.n).popcount();
        std::vector<WeightedSpectrum::Atom> factor;
        if (ksz < gsz) factor.push_back({(gsz - ksz) / gsz, 1.0});
        factor.push_back({1.0 / (gsz * m), ksz * m});
        product = convolve(product, factor);
      }
      product.push_back({0.5 / m, m});  // the diagonal sector
      return exact_spectrum(std::move(product));
    }

    case ConstructionKind::Purification: {
      if (I.is_full()) return WeightedSpectrum{{{1.0, 1.0}}};
      const auto& inner = desc.components.at(0);
      const int inner_n = total_parties(inner);
      const bool has_env = I.contains(np);
      const std::uint32_t inner_bits =
          has_env ? (~I.bits & ((1u << inner_n) - 1)) : I.bits;
      return analytic_marginal_spectrum(inner, SubsetMask(inner_bits, inner_n));
    }

    case ConstructionKind::TensorComposite:
      throw std::invalid_argument(
          "composite spectra are not materialized; use analytic_marginal_entropy");
  }
  throw std::logic_error("unreachable");
}

double analytic_marginal_entropy(const ConstructionDescriptor& desc, SubsetMask I,
                                 RenyiOrder order) {
  if (desc.kind != ConstructionKind::TensorComposite)
    return renyi_entropy(analytic_marginal_spectrum(desc, I), order);

  if (I.n != desc.n || I.empty())
    throw std::invalid_argument("subset must be a nonempty subset of [n]");
  double sum = 0;
  for (std::size_t c = 0; c < desc.components.size(); ++c) {
    const auto& comp = desc.components[c];
    const auto& map = desc.component_party_maps[c];
    const int comp_n = total_parties(comp);
    std::uint32_t bits = 0;
    for (int p = 1; p <= comp_n; ++p) {
      const int lp = map.at(p - 1);
      if (lp >= 1 && lp <= desc.n && (I.bits >> (lp - 1)) & 1u) bits |= 1u << (p - 1);
    }
    if (bits != 0)
      sum += analytic_marginal_entropy(comp, SubsetMask(bits, comp_n), order);
  }
  return sum;
}

EntropyVector analytic_entropy_vector(const ConstructionDescriptor& desc,
                                      RenyiOrder order) {
  const int np =
      desc.kind == ConstructionKind::TensorComposite ? desc.n : total_parties(desc);
  EntropyVector out(np, order);
  for (const auto& I : subset_enumerate(np))
    out.set(I, analytic_marginal_entropy(desc, I, order));
  return out;
}

EntropyVector analytic_entropy_vector(const ConstructionDescriptor& desc) {
  return analytic_entropy_vector(desc, desc.alpha);
}

double upset_lt1_limit_entropy(const ConstructionDescriptor& desc, SubsetMask I) {
  if (desc.kind != ConstructionKind::UpsetLt1)
    throw std::invalid_argument("limit formula applies to the upset_lt1 kind");
  if (I.n != desc.n || I.empty())
    throw std::invalid_argument("subset must be a nonempty subset of [n]");
  const double a = desc.alpha.alpha();
  const double big_l = static_cast<double>(desc.generators.size());
  double count = 0;
  for (std::uint32_t g : desc.generators)
    if ((g & ~I.bits) == 0) count += 1;
  const double arg = std::pow(big_l, 1.0 - a) +
                     std::exp2(desc.s_bits * (1.0 - a)) * count;
  return std::log2(arg) / (1.0 - a);
}

EntropyVector upset_lt1_limit_vector(const ConstructionDescriptor& desc) {
  EntropyVector out(desc.n, desc.alpha);
  for (const auto& I : subset_enumerate(desc.n))
    out.set(I, upset_lt1_limit_entropy(desc, I));
  return out;
}

}  // namespace renyivec
