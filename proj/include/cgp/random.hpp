#pragma once

#include <cstdint>
#include <random>

#include "cgp/numerics.hpp"

namespace cgp {

// Seedable, splittable random stream. Identical seeds give bit-identical draws.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Independent child stream; advances this stream.
  Rng split();

  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  // Gamma with unit rate.
  double gamma(double shape);
  double beta(double a, double b);
  double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform integer on [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

Vector sample_mvn(const Vector& mean, const Cholesky& cov, Rng& rng);

// Wishart(nu, V) by the Bartlett decomposition; E[W] = nu V.
Matrix sample_wishart(double nu, const Matrix& v, Rng& rng);

// Inverse-Wishart(nu, S) with E[Sigma] = S / (nu - d - 1).
Matrix sample_inverse_wishart(double nu, const Matrix& s, Rng& rng);

}  // namespace cgp
