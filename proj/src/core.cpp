#include "renyivec/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <charconv>

#include <Eigen/Eigenvalues>

namespace renyivec {

// ---------------------------------------------------------------------------
// SubsetMask

SubsetMask::SubsetMask(std::uint32_t bits_, int n_) : bits(bits_), n(n_) {
  if (n_ < 1 || n_ > 30) throw std::invalid_argument("party count out of range");
  if (bits_ >= (1u << n_))
    throw std::invalid_argument("subset mask has bits outside 1.." + std::to_string(n_));
}

int SubsetMask::popcount() const { return std::popcount(bits); }

bool SubsetMask::is_full() const { return bits == (1u << n) - 1; }

bool SubsetMask::contains(int party) const {
  return party >= 1 && party <= n && (bits >> (party - 1)) & 1u;
}

bool SubsetMask::subset_of(const SubsetMask& other) const {
  return (bits & ~other.bits) == 0;
}

SubsetMask SubsetMask::complement() const {
  return SubsetMask(~bits & ((1u << n) - 1), n);
}

std::vector<int> SubsetMask::parties() const {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::string SubsetMask::str() const {
  if (n > 9)
    throw std::invalid_argument("subset strings are only defined for n <= 9");
  std::string s;
  for (int i = 1; i <= n; ++i)
    if (contains(i)) s += static_cast<char>('0' + i);
  return s;
}

SubsetMask parse_subset(const std::string& text, int n) {
  if (n < 1 || n > 9)
    throw std::invalid_argument("subset strings are only defined for 1 <= n <= 9");
  if (text.empty()) throw std::invalid_argument("empty subset string");
  std::uint32_t bits = 0;
  int prev = 0;
  for (char c : text) {
    if (c < '1' || c > '9')
      throw std::invalid_argument("bad character in subset string: " + text);
    int p = c - '0';
    if (p <= prev)
      throw std::invalid_argument("subset digits must be strictly ascending: " + text);
    if (p > n)
      throw std::invalid_argument("party " + std::string(1, c) + " exceeds n=" +
                                  std::to_string(n));
    bits |= 1u << (p - 1);
    prev = p;
  }
  return SubsetMask(bits, n);
}

std::vector<SubsetMask> subset_enumerate(int n) {
  if (n < 1) throw std::invalid_argument("empty system: party count must be >= 1");
  if (n > 20) throw std::invalid_argument("party count too large");
  std::vector<SubsetMask> out;
  out.reserve((1u << n) - 1);
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) out.emplace_back(bits, n);
  return out;
}

std::vector<SubsetMask> subsets_by_size(int n) {
  auto out = subset_enumerate(n);
  std::stable_sort(out.begin(), out.end(), [](const SubsetMask& a, const SubsetMask& b) {
    if (a.popcount() != b.popcount()) return a.popcount() < b.popcount();
    return a.bits < b.bits;
  });
  return out;
}

// ---------------------------------------------------------------------------
// RenyiOrder

RenyiOrder RenyiOrder::finite(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("finite Renyi order requires alpha > 0");
  if (alpha == 1.0) return one();
  return RenyiOrder(Tag::Finite, alpha);
}

RenyiOrder RenyiOrder::parse(const std::string& text) {
  if (text == "0") return zero();
  if (text == "1") return one();
  if (text == "inf" || text == "infinity") return infinity();
  double a = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), a);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("cannot parse Renyi order: " + text);
  if (a == 0.0) return zero();
  if (a == 1.0) return one();
  return finite(a);
}

double RenyiOrder::alpha() const {
  if (tag_ != Tag::Finite) throw std::logic_error("alpha() on non-finite order");
  return alpha_;
}

bool RenyiOrder::above_one() const {
  return tag_ == Tag::Infinity || (tag_ == Tag::Finite && alpha_ > 1.0);
}

bool RenyiOrder::below_one() const {
  return tag_ == Tag::Finite && alpha_ < 1.0;
}

std::string RenyiOrder::str() const {
  switch (tag_) {
    case Tag::Zero: return "0";
    case Tag::One: return "1";
    case Tag::Infinity: return "inf";
    case Tag::Finite: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", alpha_);
      return buf;
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// WeightedSpectrum

double WeightedSpectrum::total_mass() const {
  double s = 0;
  for (const auto& a : atoms) s += a.value * a.multiplicity;
  return s;
}

double WeightedSpectrum::total_count() const {
  double s = 0;
  for (const auto& a : atoms) s += a.multiplicity;
  return s;
}

double WeightedSpectrum::max_value() const {
  return atoms.empty() ? 0.0 : atoms.front().value;
}

double WeightedSpectrum::top_multiplicity() const {
  return atoms.empty() ? 0.0 : atoms.front().multiplicity;
}

bool WeightedSpectrum::is_pure(double tol) const {
  return atoms.size() == 1 && atoms[0].multiplicity == 1.0 &&
         std::abs(atoms[0].value - 1.0) <= tol;
}

WeightedSpectrum make_spectrum(std::vector<WeightedSpectrum::Atom> raw) {
  for (auto& a : raw) {
    if (!(a.multiplicity > 0))
      throw std::invalid_argument("spectrum multiplicity must be positive");
    if (a.value < 0) {
      if (a.value < -kPsdTol)
        throw std::invalid_argument("spectrum value below -1e-9: not PSD");
      a.value = 0;
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.value > b.value; });

  WeightedSpectrum out;
  std::size_t i = 0;
  while (i < raw.size()) {
    const double ref = raw[i].value;
    double mass = 0, count = 0;
    std::size_t j = i;
    while (j < raw.size() && ref - raw[j].value <= kMergeRelTol * ref) {
      mass += raw[j].value * raw[j].multiplicity;
      count += raw[j].multiplicity;
      ++j;
    }
    const double value = mass / count;  // multiplicity-weighted representative
    if (value >= kZeroEigCutoff) out.atoms.push_back({value, count});
    i = j;
  }
  if (out.atoms.empty()) throw std::invalid_argument("spectrum is empty");
  const double mass = out.total_mass();
  if (std::abs(mass - 1.0) > kUnitMassTol)
    throw std::invalid_argument("spectrum mass " + std::to_string(mass) +
                                " deviates from 1 beyond 1e-9");
  return out;
}

WeightedSpectrum exact_spectrum(std::vector<WeightedSpectrum::Atom> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.value > b.value; });
  WeightedSpectrum out;
  std::size_t i = 0;
  while (i < raw.size()) {
    const double ref = raw[i].value;
    double count = 0;
    std::size_t j = i;
    while (j < raw.size() && ref - raw[j].value <= 1e-12 * ref) {
      if (!(raw[j].multiplicity > 0))
        throw std::invalid_argument("spectrum multiplicity must be positive");
      count += raw[j].multiplicity;
      ++j;
    }
    if (ref > 0) out.atoms.push_back({ref, count});
    i = j;
  }
  if (out.atoms.empty()) throw std::invalid_argument("spectrum is empty");
  const double mass = out.total_mass();
  if (std::abs(mass - 1.0) > kUnitMassTol)
    throw std::invalid_argument("spectrum mass " + std::to_string(mass) +
                                " deviates from 1 beyond 1e-9");
  return out;
}

WeightedSpectrum spectrum_from_probabilities(const std::vector<double>& probs) {
  std::vector<WeightedSpectrum::Atom> raw;
  raw.reserve(probs.size());
  for (double p : probs) raw.push_back({p, 1.0});
  return make_spectrum(std::move(raw));
}

// ---------------------------------------------------------------------------
// ClassicalState

void ClassicalState::validate() const {
  if (n < 1) throw std::invalid_argument("empty system: party count must be >= 1");
  if (static_cast<int>(alphabet_sizes.size()) != n)
    throw std::invalid_argument("alphabet_sizes size mismatch");
  for (auto s : alphabet_sizes)
    if (s < 1) throw std::invalid_argument("alphabet sizes must be positive");
  double mass = 0;
  for (const auto& [idx, p] : atoms) {
    if (static_cast<int>(idx.size()) != n)
      throw std::invalid_argument("atom index arity mismatch");
    for (int i = 0; i < n; ++i)
      if (idx[i] >= static_cast<std::uint64_t>(alphabet_sizes[i]))
        throw std::invalid_argument("atom index outside its alphabet");
    if (p < -kPsdTol) throw std::invalid_argument("negative probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > kUnitMassTol)
    throw std::invalid_argument("probabilities sum to " + std::to_string(mass) +
                                ", not 1 within 1e-9");
}

WeightedSpectrum ClassicalState::spectrum() const {
  // probabilities are exact inputs, so tiny values are kept rather than
  // treated as eigensolver noise
  std::vector<WeightedSpectrum::Atom> raw;
  raw.reserve(atoms.size());
  for (const auto& [idx, p] : atoms)
    if (p > 0) raw.push_back({p, 1.0});
  return exact_spectrum(std::move(raw));
}

ClassicalState make_classical_state(
    int n, std::vector<std::int64_t> alphabet_sizes,
    std::map<std::vector<std::uint32_t>, double> atoms) {
  ClassicalState out;
  out.n = n;
  out.alphabet_sizes = std::move(alphabet_sizes);
  out.atoms.reserve(atoms.size());
  for (auto& [idx, p] : atoms)
    if (p != 0.0) out.atoms.emplace_back(idx, p);
  out.validate();
  return out;
}

ClassicalState tensor_classical(const ClassicalState& a, const ClassicalState& b) {
  if (static_cast<std::int64_t>(a.atoms.size()) * static_cast<std::int64_t>(b.atoms.size()) >
      kMaxClassicalAtoms)
    throw BudgetError("tensor product support exceeds the classical atom budget");
  ClassicalState out;
  out.n = a.n + b.n;
  out.alphabet_sizes = a.alphabet_sizes;
  out.alphabet_sizes.insert(out.alphabet_sizes.end(), b.alphabet_sizes.begin(),
                            b.alphabet_sizes.end());
  for (const auto& [ia, pa] : a.atoms)
    for (const auto& [ib, pb] : b.atoms) {
      auto idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.atoms.emplace_back(std::move(idx), pa * pb);
    }
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

// ---------------------------------------------------------------------------
// SparsePureState

double SparsePureState::norm_sq() const {
  double s = 0;
  for (const auto& [idx, a] : amplitudes) s += std::norm(a);
  return s;
}

void SparsePureState::validate() const {
  if (n < 1) throw std::invalid_argument("empty system: party count must be >= 1");
  if (static_cast<int>(dims.size()) != n)
    throw std::invalid_argument("dims size mismatch");
  for (const auto& [idx, a] : amplitudes) {
    if (static_cast<int>(idx.size()) != n)
      throw std::invalid_argument("amplitude index arity mismatch");
    for (int i = 0; i < n; ++i)
      if (idx[i] >= dims[i])
        throw std::invalid_argument("amplitude index outside its dimension");
  }
  if (std::abs(norm_sq() - 1.0) > kUnitMassTol)
    throw std::invalid_argument("pure state not normalized within 1e-9");
}

SparsePureState make_pure_state(
    int n, std::vector<std::uint64_t> dims,
    std::map<std::vector<std::uint64_t>, Complex> amplitudes) {
  SparsePureState out;
  out.n = n;
  out.dims = std::move(dims);
  out.amplitudes.reserve(amplitudes.size());
  for (auto& [idx, a] : amplitudes)
    if (a != Complex(0, 0)) out.amplitudes.emplace_back(idx, a);
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// DensityMatrix

std::int64_t checked_total_dim(const std::vector<std::int64_t>& dims) {
  std::int64_t total = 1;
  for (auto d : dims) {
    if (d < 1) throw std::invalid_argument("dimensions must be positive");
    if (total > kMaxDenseDim / d)
      throw BudgetError("total dimension exceeds the dense cap " +
                        std::to_string(kMaxDenseDim) +
                        "; use the sparse or analytic path");
    total *= d;
  }
  return total;
}

std::int64_t DensityMatrix::total_dim() const {
  std::int64_t total = 1;
  for (auto d : dims) total *= d;
  return total;
}

void DensityMatrix::validate() const {
  const std::int64_t d = checked_total_dim(dims);
  if (mat.rows() != d || mat.cols() != d)
    throw std::invalid_argument("density matrix shape does not match dims");
  if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("density matrix not Hermitian within 1e-9");
  if (std::abs(mat.trace().real() - 1.0) > kUnitMassTol)
    throw std::invalid_argument("density matrix trace not 1 within 1e-9");
}

DensityMatrix density_from_classical(const ClassicalState& state) {
  state.validate();
  std::vector<std::int64_t> dims(state.alphabet_sizes.begin(), state.alphabet_sizes.end());
  const std::int64_t d = checked_total_dim(dims);
  DensityMatrix out;
  out.dims = dims;
  out.mat = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [idx, p] : state.atoms) {
    std::int64_t flat = 0;
    for (int i = 0; i < state.n; ++i) flat = flat * dims[i] + idx[i];
    out.mat(flat, flat) += p;
  }
  return out;
}

DensityMatrix density_from_pure(const SparsePureState& psi) {
  psi.validate();
  std::vector<std::int64_t> dims;
  for (auto d : psi.dims) {
    if (d > static_cast<std::uint64_t>(kMaxDenseDim))
      throw BudgetError("party dimension exceeds the dense cap");
    dims.push_back(static_cast<std::int64_t>(d));
  }
  const std::int64_t d = checked_total_dim(dims);
  Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(d);
  for (const auto& [idx, a] : psi.amplitudes) {
    std::int64_t flat = 0;
    for (int i = 0; i < psi.n; ++i)
      flat = flat * dims[i] + static_cast<std::int64_t>(idx[i]);
    vec(flat) += a;
  }
  DensityMatrix out;
  out.dims = std::move(dims);
  out.mat = vec * vec.adjoint();
  return out;
}

// ---------------------------------------------------------------------------
// Reductions

ClassicalState marginalize_classical(const ClassicalState& state, SubsetMask I) {
  if (I.empty()) throw std::invalid_argument("marginal over the empty subset");
  if (I.n != state.n)
    throw std::invalid_argument("subset party count does not match the state");
  const auto kept = I.parties();

  std::map<std::vector<std::uint32_t>, double> acc;
  std::vector<std::uint32_t> key(kept.size());
  for (const auto& [idx, p] : state.atoms) {
    for (std::size_t k = 0; k < kept.size(); ++k) key[k] = idx[kept[k] - 1];
    acc[key] += p;
  }

  ClassicalState out;
  out.n = static_cast<int>(kept.size());
  for (int party : kept) out.alphabet_sizes.push_back(state.alphabet_sizes[party - 1]);
  out.atoms.assign(acc.begin(), acc.end());
  return out;
}

DensityMatrix partial_trace_dense(const DensityMatrix& rho, SubsetMask I) {
  if (I.empty()) throw std::invalid_argument("partial trace onto the empty subset");
  if (I.n != rho.n())
    throw std::invalid_argument("subset party count does not match dims");
  if (rho.mat.rows() != rho.total_dim() || rho.mat.cols() != rho.total_dim())
    throw std::invalid_argument("density matrix shape does not match dims");
  if (I.is_full()) return rho;

  const int n = rho.n();
  // strides with party 1 most significant
  std::vector<std::int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * rho.dims[i + 1];

  std::vector<int> kept, traced;
  for (int p = 1; p <= n; ++p) (I.contains(p) ? kept : traced).push_back(p - 1);

  std::int64_t dim_kept = 1, dim_tr = 1;
  for (int i : kept) dim_kept *= rho.dims[i];
  for (int i : traced) dim_tr *= rho.dims[i];

  auto offset_of = [&](const std::vector<int>& parts, std::int64_t flat) {
    std::int64_t off = 0;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      const std::int64_t d = rho.dims[*it];
      off += (flat % d) * stride[*it];
      flat /= d;
    }
    return off;
  };

  std::vector<std::int64_t> kept_off(dim_kept), traced_off(dim_tr);
  for (std::int64_t k = 0; k < dim_kept; ++k) kept_off[k] = offset_of(kept, k);
  for (std::int64_t e = 0; e < dim_tr; ++e) traced_off[e] = offset_of(traced, e);

  DensityMatrix out;
  for (int i : kept) out.dims.push_back(rho.dims[i]);
  out.mat = Eigen::MatrixXcd::Zero(dim_kept, dim_kept);
  for (std::int64_t r = 0; r < dim_kept; ++r)
    for (std::int64_t c = 0; c < dim_kept; ++c) {
      Complex sum = 0;
      for (std::int64_t e = 0; e < dim_tr; ++e)
        sum += rho.mat(kept_off[r] + traced_off[e], kept_off[c] + traced_off[e]);
      out.mat(r, c) = sum;
    }
  return out;
}

WeightedSpectrum reduced_spectrum_pure(const SparsePureState& psi, SubsetMask J) {
  if (J.empty()) throw std::invalid_argument("reduction onto the empty subset");
  if (J.n != psi.n)
    throw std::invalid_argument("subset party count does not match the state");
  if (std::abs(psi.norm_sq() - 1.0) > kUnitMassTol)
    throw std::invalid_argument("pure state not normalized within 1e-9");
  if (J.is_full()) return WeightedSpectrum{{{1.0, 1.0}}};

  const auto rows_p = J.parties();
  const auto cols_p = J.complement().parties();

  // group amplitudes by (J-projection, J^c-projection)
  std::map<std::vector<std::uint64_t>, std::uint32_t> row_ids, col_ids;
  std::vector<std::pair<std::uint32_t, Complex>> entries;  // (row, amp) per nnz
  std::vector<std::uint32_t> entry_col;
  std::vector<std::uint64_t> rk(rows_p.size()), ck(cols_p.size());
  for (const auto& [idx, a] : psi.amplitudes) {
    for (std::size_t i = 0; i < rows_p.size(); ++i) rk[i] = idx[rows_p[i] - 1];
    for (std::size_t i = 0; i < cols_p.size(); ++i) ck[i] = idx[cols_p[i] - 1];
    const auto r = row_ids.emplace(rk, static_cast<std::uint32_t>(row_ids.size())).first->second;
    const auto c = col_ids.emplace(ck, static_cast<std::uint32_t>(col_ids.size())).first->second;
    entries.emplace_back(r, a);
    entry_col.push_back(c);
  }

  const std::size_t nr = row_ids.size(), nc = col_ids.size();
  const bool gram_rows = nr <= nc;
  const std::size_t g = gram_rows ? nr : nc;
  if (g > static_cast<std::size_t>(kMaxGramSide))
    throw BudgetError("Gram side " + std::to_string(g) +
                      " exceeds the cap; use the analytic tier");

  // Gram matrix over the smaller side, accumulated per group of the other side
  std::vector<std::vector<std::pair<std::uint32_t, Complex>>> groups(gram_rows ? nc : nr);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto [r, a] = entries[k];
    const auto c = entry_col[k];
    if (gram_rows)
      groups[c].emplace_back(r, a);
    else
      groups[r].emplace_back(c, std::conj(a));
  }
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(g, g);
  for (const auto& grp : groups) {
    // duplicate keys within a group cannot occur: full index tuples are unique
    for (const auto& [i, ai] : grp)
      for (const auto& [j, aj] : grp) G(i, j) += ai * std::conj(aj);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(G, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed on Gram matrix");
  std::vector<WeightedSpectrum::Atom> raw;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    raw.push_back({solver.eigenvalues()(i), 1.0});
  return make_spectrum(std::move(raw));
}

WeightedSpectrum spectrum_dense(const DensityMatrix& rho) {
  if ((rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("matrix not Hermitian within 1e-9");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.mat, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed");
  std::vector<WeightedSpectrum::Atom> raw;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    raw.push_back({solver.eigenvalues()(i), 1.0});
  return make_spectrum(std::move(raw));
}

}  // namespace renyivec
