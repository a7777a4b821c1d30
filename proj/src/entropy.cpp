#include "renyivec/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace renyivec {

double compensated_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0, comp = 0.0;
  for (double x : terms) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

namespace {

double power_sum(const WeightedSpectrum& spec, double alpha) {
  std::vector<double> terms;
  terms.reserve(spec.atoms.size());
  for (const auto& a : spec.atoms)
    terms.push_back(a.multiplicity * std::pow(a.value, alpha));
  return compensated_sum(std::move(terms));
}

}  // namespace

double renyi_entropy(const WeightedSpectrum& spec, RenyiOrder order) {
  if (spec.atoms.empty()) throw std::invalid_argument("entropy of an empty spectrum");
  switch (order.tag()) {
    case RenyiOrder::Tag::Zero:
      return std::log2(spec.total_count());
    case RenyiOrder::Tag::One: {
      std::vector<double> terms;
      terms.reserve(spec.atoms.size());
      for (const auto& a : spec.atoms)
        terms.push_back(-a.multiplicity * a.value * std::log2(a.value));
      return compensated_sum(std::move(terms));
    }
    case RenyiOrder::Tag::Infinity:
      return -std::log2(spec.max_value());
    case RenyiOrder::Tag::Finite: {
      const double alpha = order.alpha();
      return std::log2(power_sum(spec, alpha)) / (1.0 - alpha);
    }
  }
  throw std::logic_error("unreachable");
}

double schatten_norm(const WeightedSpectrum& spec, RenyiOrder order) {
  if (spec.atoms.empty()) throw std::invalid_argument("norm of an empty spectrum");
  if (order.tag() == RenyiOrder::Tag::Infinity) return spec.max_value();
  if (order.is_finite() && order.alpha() > 1.0)
    return std::pow(power_sum(spec, order.alpha()), 1.0 / order.alpha());
  throw std::invalid_argument(
      "Schatten norm is only defined here for alpha > 1 or infinity");
}

EntropyVector::EntropyVector(int n_, RenyiOrder order_)
    : n(n_), order(order_), entries(std::size_t{1} << n_, 0.0) {
  if (n_ < 1 || n_ > 20) throw std::invalid_argument("party count out of range");
}

double EntropyVector::at(SubsetMask I) const {
  if (I.n != n) throw std::invalid_argument("subset party count mismatch");
  return at_bits(I.bits);
}

double EntropyVector::at_bits(std::uint32_t bits) const {
  if (bits == 0 || bits >= entries.size())
    throw std::invalid_argument("subset out of range");
  return entries[bits];
}

void EntropyVector::set(SubsetMask I, double value) {
  if (I.n != n) throw std::invalid_argument("subset party count mismatch");
  entries[I.bits] = value;
}

double EntropyVector::sup_diff(const EntropyVector& other) const {
  if (n != other.n) throw std::invalid_argument("entropy vector arity mismatch");
  double worst = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    worst = std::max(worst, std::abs(entries[i] - other.entries[i]));
  return worst;
}

EntropyVector entropy_vector(const ClassicalState& state, RenyiOrder order) {
  state.validate();
  EntropyVector out(state.n, order);
  for (const auto& I : subset_enumerate(state.n))
    out.set(I, renyi_entropy(marginalize_classical(state, I).spectrum(), order));
  return out;
}

EntropyVector entropy_vector(const SparsePureState& psi, RenyiOrder order) {
  psi.validate();
  EntropyVector out(psi.n, order);
  for (const auto& J : subset_enumerate(psi.n))
    out.set(J, renyi_entropy(reduced_spectrum_pure(psi, J), order));
  return out;
}

EntropyVector entropy_vector(const DensityMatrix& rho, RenyiOrder order) {
  rho.validate();
  EntropyVector out(rho.n(), order);
  for (const auto& I : subset_enumerate(rho.n()))
    out.set(I, renyi_entropy(spectrum_dense(partial_trace_dense(rho, I)), order));
  return out;
}

EntropyVector embed_entropy_vector(const EntropyVector& component,
                                   const std::vector<int>& party_map, int n_logical) {
  if (static_cast<int>(party_map.size()) != component.n)
    throw std::invalid_argument("party map arity mismatch");
  EntropyVector out(n_logical, component.order);
  for (std::uint32_t mask = 1; mask < (1u << n_logical); ++mask) {
    std::uint32_t comp_bits = 0;
    for (int p = 1; p <= component.n; ++p) {
      const int lp = party_map[p - 1];
      if (lp >= 1 && lp <= n_logical && (mask >> (lp - 1)) & 1u)
        comp_bits |= 1u << (p - 1);
    }
    out.entries[mask] = comp_bits == 0 ? 0.0 : component.at_bits(comp_bits);
  }
  return out;
}

}  // namespace renyivec
