#include "cgp/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace cgp {

LabeledSequence gen_discrete_scenario(double theta, double sigma, double beta, int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_sequence(CgpParams(GibbsFamily::pitman_yor(sigma, theta), beta), n, rng);
}

void SyntheticMixtureConfig::validate() const {
  if (d < 1 || m < 1 || s < 0 || !(c > 0)) throw std::invalid_argument("synthetic mixture: need d >= 1, m >= 1, s >= 0, c > 0");
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0) || x < 0) throw std::domain_error("regularized_gamma_p: need a > 0, x >= 0");
  return boost::math::gamma_p(a, x);
}

double chi2_quantile(int d, double q) {
  if (d < 1) throw std::invalid_argument("chi2_quantile: d must be >= 1");
  if (!(q > 0 && q < 1)) throw std::invalid_argument("chi2_quantile: q must lie in (0, 1)");
  const double a = 0.5 * d;
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * d);
  while (regularized_gamma_p(a, 0.5 * hi) < q) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_gamma_p(a, 0.5 * mid) < q)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double outlier_radius(int d) { return 3.0 * std::sqrt(chi2_quantile(d, 0.9)); }

std::size_t sample_truncated_outlier(int d, double radius, Rng& rng, Vector& out) {
  out.resize(d);
  for (std::size_t tries = 1;; ++tries) {
    for (int j = 0; j < d; ++j) out(j) = 3.0 * rng.normal();
    if (out.norm() > radius) return tries;
  }
}

SyntheticMixture gen_mixture_with_outliers(const SyntheticMixtureConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SyntheticMixture out;
  out.data.resize(cfg.m + cfg.s, cfg.d);
  out.outlier.assign(static_cast<std::size_t>(cfg.m + cfg.s), 0);
  for (int i = 0; i < cfg.m; ++i) {
    const double centre = rng.uniform() < 0.5 ? -3.0 : 3.0;
    for (int j = 0; j < cfg.d; ++j) out.data(i, j) = centre + rng.normal();
  }
  Vector y;
  const double radius = outlier_radius(cfg.d);
  for (int i = cfg.m; i < cfg.m + cfg.s; ++i) {
    out.proposals += sample_truncated_outlier(cfg.d, radius, rng, y);
    out.data.row(i) = cfg.c * y.transpose();
    out.outlier[i] = 1;
  }
  return out;
}

}  // namespace cgp
