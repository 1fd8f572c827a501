#include "cgp/random.hpp"

#include <array>
#include <cmath>

namespace cgp {

namespace {

std::seed_seq make_seq(std::uint64_t seed) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// log of a unit-rate Gamma(shape) draw, safe for tiny shapes
double log_gamma_variate(Rng& rng, double shape) {
  if (shape >= 1.0) return std::log(rng.gamma(shape));
  return std::log(rng.gamma(shape + 1.0)) + std::log(rng.uniform()) / shape;
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  auto seq = make_seq(seed);
  engine_.seed(seq);
}

Rng Rng::split() {
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto v = engine_();
    words[2 * i] = static_cast<std::uint32_t>(v);
    words[2 * i + 1] = static_cast<std::uint32_t>(v >> 32);
  }
  Rng child(0);
  std::seed_seq seq(words.begin(), words.end());
  child.engine_.seed(seq);
  return child;
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  // polar method; no cached second value so a draw depends only on the engine state
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0 && s < 1) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double Rng::gamma(double shape) {
  if (!(shape > 0)) throw std::domain_error("gamma: shape must be positive");
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

double Rng::beta(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw std::domain_error("beta: shapes must be positive");
  if (a >= 1 && b >= 1) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }
  const double lx = log_gamma_variate(*this, a);
  const double ly = log_gamma_variate(*this, b);
  return 1.0 / (1.0 + std::exp(ly - lx));
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

Vector sample_mvn(const Vector& mean, const Cholesky& cov, Rng& rng) {
  Vector z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mean + cov.lower() * z;
}

Matrix sample_wishart(double nu, const Matrix& v, Rng& rng) {
  const auto d = v.rows();
  if (!(nu > static_cast<double>(d) - 1)) throw std::domain_error("wishart: nu must exceed d - 1");
  const Matrix l = cholesky(v);
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(nu - static_cast<double>(i)));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  const Matrix la = l * a;
  Matrix w = la * la.transpose();
  return 0.5 * (w + w.transpose());
}

Matrix sample_inverse_wishart(double nu, const Matrix& s, Rng& rng) {
  const Matrix w = sample_wishart(nu, Cholesky(s).inverse(), rng);
  Matrix sigma = Cholesky(0.5 * (w + w.transpose())).inverse();
  return 0.5 * (sigma + sigma.transpose());
}

}  // namespace cgp
