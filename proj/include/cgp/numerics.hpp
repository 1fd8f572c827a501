#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cgp {

class Rng;

// Log of a nonnegative quantity; -inf encodes zero.
using LogValue = double;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class NotPositiveDefinite : public std::domain_error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : std::domain_error("matrix not positive definite at pivot " + std::to_string(pivot)),
        pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

double log_gamma(double x);

// log (a)_b = log Gamma(a+b) - log Gamma(a); exactly 0 for b == 0.
LogValue log_pochhammer(double a, double b);

LogValue log_sum_exp(std::span<const LogValue> terms);

LogValue log_binomial(int n, int k);

// log of Binomial(n, p) mass at j, valid at p = 0 and p = 1.
LogValue log_binomial_pmf(int n, int j, double p);

std::size_t categorical_from_log_weights(std::span<const LogValue> w, Rng& rng);

// Lower factor L with L L^T = M.
Matrix cholesky(const Matrix& m);

// Throws std::invalid_argument unless square and symmetric to 1e-12 relative.
void check_symmetric(const Matrix& m);

double mvt_log_density(const Vector& y, double df, const Vector& loc, const Matrix& scale);

// Cached factorization for repeated Gaussian / Student-t evaluations.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& m);
  std::size_t dim() const { return static_cast<std::size_t>(l_.rows()); }
  const Matrix& lower() const { return l_; }
  double log_det() const { return log_det_; }
  // (x - mu)^T M^{-1} (x - mu)
  double mahalanobis(const Vector& x, const Vector& mu) const;
  Matrix inverse() const;

 private:
  Matrix l_;
  double log_det_ = 0.0;
};

double mvn_log_density(const Vector& y, const Vector& mean, const Cholesky& cov);
double mvt_log_density(const Vector& y, double df, const Vector& loc, const Cholesky& scale);

}  // namespace cgp
