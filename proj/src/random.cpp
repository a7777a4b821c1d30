#include "renyivec/random.hpp"

#include <cmath>
#include <numbers>

namespace renyivec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index + 1)));
}

double Rng::uniform01() {
  return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::cgaussian() { return Complex(gaussian(), gaussian()); }

DensityMatrix random_density_matrix(Rng& rng, const std::vector<std::int64_t>& dims) {
  const std::int64_t d = checked_total_dim(dims);
  Eigen::MatrixXcd g(d, d);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j) g(i, j) = rng.cgaussian();
  DensityMatrix out;
  out.dims = dims;
  out.mat = g * g.adjoint();
  out.mat /= out.mat.trace().real();
  return out;
}

ClassicalState random_classical_state(Rng& rng,
                                      const std::vector<std::int64_t>& alphabet_sizes) {
  const int n = static_cast<int>(alphabet_sizes.size());
  std::int64_t total = 1;
  for (auto s : alphabet_sizes) {
    if (s < 1) throw std::invalid_argument("alphabet sizes must be positive");
    if (total > kMaxClassicalAtoms / s)
      throw BudgetError("random pmf support exceeds the classical atom budget");
    total *= s;
  }
  std::vector<double> w(total);
  double sum = 0;
  for (auto& x : w) {
    x = -std::log(rng.uniform01());  // Exp(1)
    sum += x;
  }
  std::map<std::vector<std::uint32_t>, double> atoms;
  std::vector<std::uint32_t> idx(n, 0);
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      idx[i] = static_cast<std::uint32_t>(rem % alphabet_sizes[i]);
      rem /= alphabet_sizes[i];
    }
    atoms[idx] = w[flat] / sum;
  }
  return make_classical_state(n, alphabet_sizes, std::move(atoms));
}

SparsePureState random_pure_state(Rng& rng, const std::vector<std::uint64_t>& dims) {
  const int n = static_cast<int>(dims.size());
  std::uint64_t total = 1;
  for (auto d : dims) {
    if (d < 1) throw std::invalid_argument("dimensions must be positive");
    if (total > static_cast<std::uint64_t>(kMaxPureAmplitudes) / d)
      throw BudgetError("random pure state exceeds the amplitude budget");
    total *= d;
  }
  std::vector<Complex> amp(total);
  double norm = 0;
  for (auto& a : amp) {
    a = rng.cgaussian();
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  std::map<std::vector<std::uint64_t>, Complex> atoms;
  std::vector<std::uint64_t> idx(n, 0);
  for (std::uint64_t flat = 0; flat < total; ++flat) {
    std::uint64_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      idx[i] = rem % dims[i];
      rem /= dims[i];
    }
    atoms[idx] = amp[flat] / norm;
  }
  return make_pure_state(n, dims, std::move(atoms));
}

}  // namespace renyivec
