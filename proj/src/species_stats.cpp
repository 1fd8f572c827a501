#include "cgp/species_stats.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPrune = 60.0;  // drop weights below max * e^-60

class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

void require_positive_theta(const CgpParams& p) {
  if (!(p.theta() > 0)) throw std::domain_error("species statistics need theta > 0");
}

struct Weighted {
  int index;
  double weight;
};

// Binomial(m, 1 - beta) masses above the pruning floor.
std::vector<Weighted> contaminant_weights(int m, double beta) {
  std::vector<double> lw(static_cast<std::size_t>(m) + 1);
  for (int l = 0; l <= m; ++l) lw[l] = log_binomial_pmf(m, l, 1.0 - beta);
  const double mx = *std::max_element(lw.begin(), lw.end());
  std::vector<Weighted> out;
  for (int l = 0; l <= m; ++l)
    if (lw[l] > mx - kPrune) out.push_back({l, std::exp(lw[l])});
  return out;
}

std::vector<Weighted> mbar_weights(const SampleSummary& s, const CgpParams& p) {
  const auto post = mbar_posterior(s.n, s.k, s.m1, p);
  const double mx = *std::max_element(post.begin(), post.end());
  std::vector<Weighted> out;
  for (int i = 0; i < static_cast<int>(post.size()); ++i)
    if (post[i] > 0 && std::log(post[i]) > std::log(mx) - kPrune) out.push_back({i, post[i]});
  return out;
}

// E[B^j (beta B + 1 - beta)^N] for B ~ Beta(a, b), through the moments (a)_q / (a + b)_q.
double beta_moment(double a, double b, double beta, int N, int j) {
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(N) + 1);
  for (int q = 0; q <= N; ++q) {
    const double lp = log_binomial_pmf(N, q, beta);
    if (lp == kNegInf) continue;
    terms.push_back(lp + log_pochhammer(a, q + j) - log_pochhammer(a + b, q + j));
  }
  return std::exp(log_sum_exp(terms));
}

// theta * sum_{i < N} 1 / (a + i), the sigma = 0 limit of (theta / sigma) ((a + sigma)_N / (a)_N - 1)
std::vector<double> harmonic_prefix(double a, int n) {
  std::vector<double> h(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) h[i + 1] = h[i] + 1.0 / (a + i);
  return h;
}

// Expected new clusters among N draws from the non-contaminant part after n' of them in k' clusters.
double new_cluster_growth(double theta, double sigma, double kk, double a, int N) {
  if (N == 0) return 0.0;
  return (kk + theta / sigma) * std::expm1(log_pochhammer(a + sigma, N) - log_pochhammer(a, N));
}

}  // namespace

double expected_kn(const CgpParams& p, int n) {
  require_positive_theta(p);
  if (n < 1) throw std::invalid_argument("expected_kn: n must be >= 1");
  const double theta = p.theta();
  const double sigma = p.sigma();
  std::vector<double> h;
  if (sigma == 0) h = harmonic_prefix(theta, n);
  KahanSum acc;
  for (const auto& [l, w] : contaminant_weights(n, p.beta)) {
    const int N = n - l;
    const double g = sigma == 0 ? theta * h[N] : new_cluster_growth(theta, sigma, 0.0, theta, N);
    acc.add(w * (g + l));
  }
#ifndef NDEBUG
  if (sigma >= 0.05 && n <= 2000) {
    const double alt = expected_kn_beta_form(p, n);
    assert(std::abs(alt - acc.value()) <= 1e-8 * acc.value());
  }
#endif
  return acc.value();
}

double expected_kn_beta_form(const CgpParams& p, int n) {
  require_positive_theta(p);
  const double theta = p.theta();
  const double sigma = p.sigma();
  const double beta = p.beta;
  if (!(sigma > 0)) throw std::domain_error("Beta representation needs sigma > 0");
  if (n < 1) throw std::invalid_argument("expected_kn: n must be >= 1");
  const double a = theta + sigma;
  const double b = 1.0 - sigma;
  return theta / sigma * beta_moment(a, b, beta, n, 0) + n * beta / sigma * beta_moment(a, b, beta, n - 1, 1) -
         theta / sigma + n * (1.0 - beta);
}

double expected_mnr(const CgpParams& p, int n, int r) {
  require_positive_theta(p);
  if (r < 1 || r > n) throw std::invalid_argument("expected_mnr: need 1 <= r <= n");
  const double theta = p.theta();
  const double sigma = p.sigma();
  const double head = log_pochhammer(1.0 - sigma, r - 1.0);
  KahanSum acc;
  if (r == 1) acc.add(n * (1.0 - p.beta));
  for (const auto& [l, w] : contaminant_weights(n, p.beta)) {
    const int N = n - l;
    if (N < r) continue;
    const double lt = log_binomial(N, r) + head + log_pochhammer(theta + sigma, N - r) -
                      log_pochhammer(theta + 1.0, N - 1.0);
    acc.add(w * std::exp(lt));
  }
  return acc.value();
}

double expected_mnr_beta_form(const CgpParams& p, int n, int r) {
  require_positive_theta(p);
  if (r < 1 || r > n) throw std::invalid_argument("expected_mnr: need 1 <= r <= n");
  const double theta = p.theta();
  const double sigma = p.sigma();
  const double lead = log_pochhammer(1.0 - sigma, r - 1.0) - log_pochhammer(theta + 1.0, r - 1.0) +
                      log_binomial(n, r) + r * std::log(p.beta);
  const double body = std::exp(lead) * beta_moment(theta + sigma, r - sigma, p.beta, n - r, 0);
  return (r == 1 ? n * (1.0 - p.beta) : 0.0) + body;
}

double posterior_expected_nm1(const SampleSummary& s, const CgpParams& p, int m) {
  require_positive_theta(p);
  if (m < 1) throw std::invalid_argument("posterior_expected_nm1: m must be >= 1");
  const double theta = p.theta();
  const double sigma = p.sigma();
  const auto inner = contaminant_weights(m, p.beta);
  KahanSum acc;
  for (const auto& [mb, wm] : mbar_weights(s, p)) {
    const double a = theta + (s.n - mb);
    const double base_new = theta + (s.k - mb) * sigma;
    for (const auto& [l, wl] : inner) {
      const int M = m - l;
      double bracket = l;
      if (M > 0)
        bracket += M * base_new * std::exp(log_pochhammer(a + sigma, M - 1.0) - log_pochhammer(a, M));
      acc.add(wm * wl * bracket);
    }
  }
  return acc.value();
}

double posterior_expected_nmr(const SampleSummary& s, const CgpParams& p, int m, int r) {
  require_positive_theta(p);
  if (r < 2) throw std::invalid_argument("posterior_expected_nmr: r must be >= 2");
  if (m < 1) throw std::invalid_argument("posterior_expected_nmr: m must be >= 1");
  if (m < r) return 0.0;
  const double theta = p.theta();
  const double sigma = p.sigma();
  const double head = log_pochhammer(1.0 - sigma, r - 1.0);
  const auto inner = contaminant_weights(m, p.beta);
  KahanSum acc;
  for (const auto& [mb, wm] : mbar_weights(s, p)) {
    const double a = theta + (s.n - mb);
    const double lbase = std::log(theta + sigma * (s.k - mb));
    for (const auto& [l, wl] : inner) {
      const int M = m - l;
      if (M < r) continue;
      const double lt = log_binomial(M, r) + head + lbase + log_pochhammer(a + sigma, M - r) - log_pochhammer(a, M);
      acc.add(wm * wl * std::exp(lt));
    }
  }
  return acc.value();
}

double posterior_expected_km(const SampleSummary& s, const CgpParams& p, int m) {
  require_positive_theta(p);
  if (m < 1) throw std::invalid_argument("posterior_expected_km: m must be >= 1");
  const double theta = p.theta();
  const double sigma = p.sigma();
  const auto inner = contaminant_weights(m, p.beta);
  KahanSum acc;
  for (const auto& [mb, wm] : mbar_weights(s, p)) {
    const double a = theta + (s.n - mb);
    const double kk = s.k - mb;
    std::vector<double> h;
    if (sigma == 0) h = harmonic_prefix(a, m);
    for (const auto& [l, wl] : inner) {
      const int M = m - l;
      const double g = sigma == 0 ? theta * h[M] : new_cluster_growth(theta, sigma, kk, a, M);
      acc.add(wm * wl * (g + l));
    }
  }
  return acc.value();
}

SpeciesStatistics species_statistics(const FrequencyVector& fv, const CgpParams& p, int m, int r) {
  SpeciesStatistics st;
  st.r = r;
  st.expected_kn = expected_kn(p, fv.n());
  st.expected_mn1 = expected_mnr(p, fv.n(), 1);
  st.expected_mnr = r <= fv.n() ? expected_mnr(p, fv.n(), r) : 0.0;
  st.posterior_expected_km = posterior_expected_km(fv, p, m);
  st.posterior_expected_nm1 = posterior_expected_nm1(fv, p, m);
  st.posterior_expected_nmr = posterior_expected_nmr(fv, p, m, r);
  return st;
}

}  // namespace cgp
