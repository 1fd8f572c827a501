#include "cgp/gibbs.hpp"

#include <cmath>
#include <stdexcept>

namespace cgp {

GibbsFamily GibbsFamily::pitman_yor(double sigma, double theta) {
  if (!(sigma >= 0 && sigma < 1)) throw std::invalid_argument("Pitman-Yor: sigma must lie in [0, 1)");
  if (!(theta > -sigma)) throw std::invalid_argument("Pitman-Yor: theta must exceed -sigma");
  return GibbsFamily(FamilyKind::PitmanYor, sigma, theta);
}

GibbsFamily GibbsFamily::dirichlet(double theta) {
  if (!(theta > 0)) throw std::invalid_argument("Dirichlet: theta must be positive");
  return GibbsFamily(FamilyKind::Dirichlet, 0.0, theta);
}

LogValue GibbsFamily::log_v(int n, int k) const {
  if (n == 0 && k == 0) return 0.0;
  if (n < 1 || k < 1 || k > n) throw std::out_of_range("log_V: need 1 <= k <= n");
  const double denom = log_pochhammer(theta_ + 1.0, n - 1.0);
  if (sigma_ == 0.0) {
    // theta may be 0 only when sigma > 0, so log theta is finite here
    return (k - 1) * std::log(theta_) - denom;
  }
  double num = 0.0;
  if (k <= 64) {
    for (int i = 1; i < k; ++i) num += std::log(theta_ + i * sigma_);
  } else if (theta_ > 0) {
    num = (k - 1) * std::log(sigma_) + log_pochhammer(theta_ / sigma_ + 1.0, k - 1.0);
  } else {
    // theta in (-sigma, 0]: shift out the first factor so the Pochhammer base stays positive
    num = std::log(theta_ + sigma_) + (k - 2) * std::log(sigma_) +
          log_pochhammer(theta_ / sigma_ + 2.0, k - 2.0);
  }
  return num - denom;
}

RecurrenceReport check_recurrence(const std::function<LogValue(int, int)>& log_v, double sigma, int n_max,
                                  double tol) {
  if (n_max < 1) throw std::invalid_argument("check_recurrence: n_max must be >= 1");
  RecurrenceReport rep;
  for (int n = 1; n <= n_max; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double lhs = log_v(n, k);
      // compare on the scale of V_{n,k} to stay in range for large n
      const double rhs = (n - sigma * k) * std::exp(log_v(n + 1, k) - lhs) + std::exp(log_v(n + 1, k + 1) - lhs);
      const double dev = std::abs(rhs - 1.0);
      if (!(dev <= rep.worst)) {
        rep.worst = dev;
        rep.n = n;
        rep.k = k;
      }
    }
  }
  rep.ok = rep.worst <= tol;
  return rep;
}

RecurrenceReport check_recurrence(const GibbsFamily& family, int n_max, double tol) {
  return check_recurrence([&family](int n, int k) { return family.log_v(n, k); }, family.sigma(), n_max, tol);
}

}  // namespace cgp
