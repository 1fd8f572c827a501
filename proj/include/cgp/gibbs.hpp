#pragma once

#include <functional>

#include "cgp/numerics.hpp"

namespace cgp {

enum class FamilyKind { PitmanYor, Dirichlet };

// Gibbs-type weight sequence V_{n,k}. Dirichlet(theta) behaves as PitmanYor(0, theta).
class GibbsFamily {
 public:
  static GibbsFamily pitman_yor(double sigma, double theta);
  static GibbsFamily dirichlet(double theta);

  FamilyKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double theta() const { return theta_; }

  // log V_{n,k}; V_{0,0} = V_{1,1} = 1.
  LogValue log_v(int n, int k) const;

 private:
  GibbsFamily(FamilyKind kind, double sigma, double theta) : kind_(kind), sigma_(sigma), theta_(theta) {}
  FamilyKind kind_;
  double sigma_;
  double theta_;
};

inline LogValue log_V(const GibbsFamily& f, int n, int k) { return f.log_v(n, k); }

struct RecurrenceReport {
  bool ok = true;
  double worst = 0.0;  // largest relative deviation seen
  int n = 0;           // location of the worst deviation
  int k = 0;
};

// Checks V_{n,k} = (n - sigma k) V_{n+1,k} + V_{n+1,k+1} for 1 <= k <= n <= n_max.
RecurrenceReport check_recurrence(const GibbsFamily& family, int n_max, double tol);
RecurrenceReport check_recurrence(const std::function<LogValue(int, int)>& log_v, double sigma, int n_max,
                                  double tol);

}  // namespace cgp
