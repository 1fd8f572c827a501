#include "cgp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "cgp/random.hpp"

namespace cgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Stirling-series remainder of log Gamma for x >= 10.
double stirling_correction(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12 + r2 * (-1.0 / 360 + r2 * (1.0 / 1260 + r2 * (-1.0 / 1680 + r2 * (1.0 / 1188 +
         r2 * (-691.0 / 360360 + r2 * (1.0 / 156 + r2 * (-3617.0 / 122400))))))));
}

bool is_small_integer(double b) { return b > 0 && b <= 16 && b == std::floor(b); }

}  // namespace

double log_gamma(double x) {
  if (!(x > 0)) throw std::domain_error("log_gamma: argument must be positive");
  return boost::math::lgamma(x);
}

LogValue log_pochhammer(double a, double b) {
  if (!(a > 0)) throw std::domain_error("log_pochhammer: a must be positive");
  if (!(a + b > 0)) throw std::domain_error("log_pochhammer: a + b must be positive");
  if (b == 0) return 0.0;
  if (is_small_integer(b) && a < 1e15) {
    double prod = 1.0;
    for (int i = 0; i < static_cast<int>(b); ++i) prod *= a + i;
    return std::log(prod);
  }
  if (a >= 10 && a + b >= 10) {
    // difference of Stirling expansions, arranged to avoid cancellation for b << a
    return (a - 0.5) * std::log1p(b / a) + b * std::log(a + b) - b + stirling_correction(a + b) -
           stirling_correction(a);
  }
  return log_gamma(a + b) - log_gamma(a);
}

LogValue log_sum_exp(std::span<const LogValue> terms) {
  if (terms.empty()) throw std::invalid_argument("log_sum_exp: empty list");
  const double mx = *std::max_element(terms.begin(), terms.end());
  if (mx == kNegInf || std::isinf(mx)) return mx;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

LogValue log_binomial(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("log_binomial: k out of range");
  if (k > n - k) k = n - k;
  if (k == 0) return 0.0;
  return log_pochhammer(n - k + 1.0, k) - log_gamma(k + 1.0);
}

LogValue log_binomial_pmf(int n, int j, double p) {
  if (j < 0 || j > n) return kNegInf;
  if (p <= 0) return j == 0 ? 0.0 : kNegInf;
  if (p >= 1) return j == n ? 0.0 : kNegInf;
  return log_binomial(n, j) + j * std::log(p) + (n - j) * std::log1p(-p);
}

std::size_t categorical_from_log_weights(std::span<const LogValue> w, Rng& rng) {
  if (w.empty()) throw std::invalid_argument("categorical: empty weights");
  const double total = log_sum_exp(w);
  if (!std::isfinite(total)) throw std::domain_error("categorical: all weights zero");
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == kNegInf) continue;
    last = i;
    cum += std::exp(w[i] - total);
    if (u < cum) return i;
  }
  return last;
}

void check_symmetric(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix must be square and non-empty");
  const double scale = m.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) throw std::invalid_argument("matrix not symmetric");
}

Matrix cholesky(const Matrix& m) {
  check_symmetric(m);
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  for (Eigen::Index k = 1; k <= m.rows(); ++k) {
    Eigen::LLT<Matrix> sub(m.topLeftCorner(k, k));
    if (sub.info() != Eigen::Success) throw NotPositiveDefinite(static_cast<std::size_t>(k - 1));
  }
  throw NotPositiveDefinite(static_cast<std::size_t>(m.rows() - 1));
}

Cholesky::Cholesky(const Matrix& m) : l_(cholesky(m)) {
  for (Eigen::Index i = 0; i < l_.rows(); ++i) log_det_ += 2.0 * std::log(l_(i, i));
}

double Cholesky::mahalanobis(const Vector& x, const Vector& mu) const {
  if (x.size() != l_.rows() || mu.size() != l_.rows()) throw std::invalid_argument("dimension mismatch");
  const Vector z = l_.triangularView<Eigen::Lower>().solve(x - mu);
  return z.squaredNorm();
}

Matrix Cholesky::inverse() const {
  const auto d = l_.rows();
  Matrix linv = l_.triangularView<Eigen::Lower>().solve(Matrix::Identity(d, d));
  return linv.transpose() * linv;
}

double mvn_log_density(const Vector& y, const Vector& mean, const Cholesky& cov) {
  const double d = static_cast<double>(cov.dim());
  return -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * cov.log_det() - 0.5 * cov.mahalanobis(y, mean);
}

double mvt_log_density(const Vector& y, double df, const Vector& loc, const Cholesky& scale) {
  if (!(df > 0)) throw std::domain_error("mvt_log_density: df must be positive");
  const double d = static_cast<double>(scale.dim());
  const double q = scale.mahalanobis(y, loc);
  return log_pochhammer(0.5 * df, 0.5 * d) - 0.5 * d * std::log(df * std::numbers::pi) -
         0.5 * scale.log_det() - 0.5 * (df + d) * std::log1p(q / df);
}

double mvt_log_density(const Vector& y, double df, const Vector& loc, const Matrix& scale) {
  return mvt_log_density(y, df, loc, Cholesky(scale));
}

}  // namespace cgp
