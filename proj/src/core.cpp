#include "cgp/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace cgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_counts(int n, int k, int m1) {
  if (n == 0 && k == 0 && m1 == 0) return;
  if (k < 1 || m1 < 0 || m1 > k || n < m1 + 2 * (k - m1) || (m1 == k && n != k))
    throw std::invalid_argument("inconsistent counts (n, k, m1)");
}

// probability_of_new only needs m1 <= k <= n; the sum over M is evaluated formally with V_{n,0} = 0
void check_counts_loose(int n, int k, int m1) {
  if (n == 0 && k == 0 && m1 == 0) return;
  if (k < 1 || m1 < 0 || m1 > k || k > n) throw std::invalid_argument("inconsistent counts (n, k, m1)");
}

double log1m(double beta) { return beta < 1.0 ? std::log1p(-beta) : kNegInf; }

LogValue log_cluster_product(const FrequencyVector& fv, double sigma) {
  LogValue s = 0.0;
  for (int f : fv.freqs())
    if (f >= 2) s += log_pochhammer(1.0 - sigma, f - 1.0);
  return s;
}

// The three expectations over M ~ Binom(m1, 1 - beta) behind the marginal predictive.
struct MarginalRatios {
  double new_mass = 1.0;
  double singleton_each = 0.0;
  double cluster_factor = 0.0;  // times (n_i - sigma)
};

MarginalRatios marginal_ratios(int n, int k, int m1, const CgpParams& p) {
  MarginalRatios r;
  if (n == 0) return r;
  const auto& f = p.family;
  std::vector<double> a0, anew, acl, asg;
  for (int M = 0; M <= m1; ++M) {
    const double lp = log_binomial_pmf(m1, M, 1.0 - p.beta);
    if (lp == kNegInf) continue;
    if (k - M >= 1 || n == M) a0.push_back(lp + f.log_v(n - M, k - M));
    anew.push_back(lp + f.log_v(n - M + 1, k - M + 1));
    if (k - M >= 1) acl.push_back(lp + f.log_v(n - M + 1, k - M));
    if (M < m1) asg.push_back(lp + std::log(static_cast<double>(m1 - M)) + f.log_v(n - M + 1, k - M));
  }
  const double e0 = log_sum_exp(a0);
  r.new_mass = (1.0 - p.beta) + p.beta * std::exp(log_sum_exp(anew) - e0);
  if (!asg.empty()) r.singleton_each = p.beta * (1.0 - p.sigma()) * std::exp(log_sum_exp(asg) - e0) / m1;
  if (!acl.empty()) r.cluster_factor = p.beta * std::exp(log_sum_exp(acl) - e0);
  return r;
}

}  // namespace

CgpParams::CgpParams(GibbsFamily f, double b, bool same)
    : family(f), beta(b), same_source(same) {
  if (!(beta > 0 && beta <= 1)) throw std::invalid_argument("beta must lie in (0, 1]");
}

FrequencyVector::FrequencyVector(std::vector<int> freqs) : freqs_(std::move(freqs)) {
  if (freqs_.empty()) throw std::invalid_argument("frequency vector must be non-empty");
  for (int f : freqs_) {
    if (f < 1) throw std::invalid_argument("frequencies must be positive");
    n_ += f;
    if (f == 1) ++m1_;
  }
  std::sort(freqs_.begin(), freqs_.end());
}

FrequencyVector FrequencyVector::incremented(std::size_t i) const {
  auto f = freqs_;
  ++f.at(i);
  return FrequencyVector(std::move(f));
}

FrequencyVector FrequencyVector::with_new_block() const {
  auto f = freqs_;
  f.push_back(1);
  return FrequencyVector(std::move(f));
}

bool operator==(const FrequencyVector& a, const FrequencyVector& b) { return a.freqs_ == b.freqs_; }

int LatentSingletonState::mbar() const {
  return static_cast<int>(std::count(J.begin(), J.end(), 0));
}

int LabeledSequence::contaminant_count() const {
  return static_cast<int>(std::count(contaminant.begin(), contaminant.end(), std::uint8_t{1}));
}

FrequencyVector LabeledSequence::frequencies() const {
  std::unordered_map<int, std::size_t> slot;
  std::vector<int> counts;
  for (int l : labels) {
    auto [it, fresh] = slot.try_emplace(l, counts.size());
    if (fresh) counts.push_back(0);
    ++counts[it->second];
  }
  return FrequencyVector(std::move(counts));
}

LogValue gibbs_eppf_log(const FrequencyVector& fv, const GibbsFamily& family) {
  return family.log_v(fv.n(), fv.k()) + log_cluster_product(fv, family.sigma());
}

std::vector<LogValue> mbar_log_weights(int n, int k, int m1, const CgpParams& p) {
  check_counts(n, k, m1);
  std::vector<LogValue> w(static_cast<std::size_t>(m1) + 1, kNegInf);
  const double lb = std::log(p.beta);
  const double l1b = log1m(p.beta);
  for (int mb = 0; mb <= m1; ++mb) {
    if (mb > 0 && p.beta >= 1.0) break;
    w[mb] = log_binomial(m1, mb) + (n - mb) * lb + (mb > 0 ? mb * l1b : 0.0) + p.family.log_v(n - mb, k - mb);
  }
  return w;
}

std::vector<double> mbar_posterior(int n, int k, int m1, const CgpParams& p) {
  auto w = mbar_log_weights(n, k, m1, p);
  const double z = log_sum_exp(w);
  for (auto& x : w) x = std::exp(x - z);
  return w;
}

std::vector<double> mbar_posterior(const FrequencyVector& fv, const CgpParams& p) {
  return mbar_posterior(fv.n(), fv.k(), fv.m1(), p);
}

LogValue eppf_log(const FrequencyVector& fv, const CgpParams& p) {
  if (p.beta >= 1.0) return gibbs_eppf_log(fv, p.family);
  return log_sum_exp(mbar_log_weights(fv.n(), fv.k(), fv.m1(), p)) + log_cluster_product(fv, p.sigma());
}

LogValue eppf_log_py_closed_form(const FrequencyVector& fv, const CgpParams& p) {
  const double sigma = p.sigma();
  const double theta = p.theta();
  if (!(theta > 0)) throw std::domain_error("closed-form EPPF needs theta > 0");
  const int n = fv.n();
  const int k = fv.k();
  const double lb = std::log(p.beta);
  const double l1b = log1m(p.beta);
  std::vector<LogValue> terms;
  for (int mb = 0; mb <= fv.m1(); ++mb) {
    if (mb > 0 && p.beta >= 1.0) break;
    const int kk = k - mb;
    const int nn = n - mb;
    const double head = sigma > 0 ? kk * std::log(sigma) + log_pochhammer(theta / sigma, kk) : kk * std::log(theta);
    terms.push_back(log_binomial(fv.m1(), mb) + nn * lb + (mb > 0 ? mb * l1b : 0.0) + head -
                    log_pochhammer(theta, nn));
  }
  return log_sum_exp(terms) + log_cluster_product(fv, sigma);
}

ConditionalPredictive predictive_conditional(const FrequencyVector& fv, const LatentSingletonState& J,
                                             const CgpParams& p) {
  if (static_cast<int>(J.J.size()) != fv.m1()) throw std::invalid_argument("J length must equal m1");
  for (int j : J.J)
    if (j != 0 && j != 1) throw std::invalid_argument("J entries must be 0 or 1");
  const double sigma = p.sigma();
  const double theta = p.theta();
  const int mb = J.mbar();
  const double nn = fv.n() - mb;
  const double kk = fv.k() - mb;
  ConditionalPredictive out;
  out.contaminant_new = 1.0 - p.beta;
  out.existing.resize(static_cast<std::size_t>(fv.k()), 0.0);
  if (nn == 0) {
    out.base_new = p.beta;
    return out;
  }
  const double denom = theta + nn;
  out.base_new = p.beta * (theta + kk * sigma) / denom;
  for (int i = 0; i < fv.k(); ++i) {
    if (i < fv.m1())
      out.existing[i] = J.J[i] == 1 ? p.beta * (1.0 - sigma) / denom : 0.0;
    else
      out.existing[i] = p.beta * (fv[i] - sigma) / denom;
  }
  return out;
}

MarginalPredictive predictive_marginal(const FrequencyVector& fv, const CgpParams& p) {
  if (!p.same_source) throw std::invalid_argument("marginal predictive requires P0 == Q0");
  const auto r = marginal_ratios(fv.n(), fv.k(), fv.m1(), p);
  MarginalPredictive out;
  out.new_value = r.new_mass;
  out.existing.reserve(static_cast<std::size_t>(fv.k()));
  for (int f : fv.freqs())
    out.existing.push_back(f == 1 ? r.singleton_each : r.cluster_factor * (f - p.sigma()));
  return out;
}

double probability_of_new(int n, int k, int m1, const CgpParams& p) {
  check_counts_loose(n, k, m1);
  return marginal_ratios(n, k, m1, p).new_mass;
}

LabeledSequence sample_sequence(const CgpParams& p, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_sequence: n must be >= 1");
  const double sigma = p.sigma();
  const double theta = p.theta();
  LabeledSequence seq;
  seq.labels.reserve(n);
  seq.contaminant.reserve(n);
  std::vector<int> table_size;
  std::vector<int> table_label;
  std::vector<int> seat;  // table of each non-contaminant customer
  int next_label = 0;
  for (int t = 0; t < n; ++t) {
    if (p.beta < 1.0 && rng.uniform() >= p.beta) {
      seq.labels.push_back(next_label++);
      seq.contaminant.push_back(1);
      continue;
    }
    const double served = static_cast<double>(seat.size());
    const double tables = static_cast<double>(table_size.size());
    int j = -1;
    if (served > 0 && rng.uniform() * (theta + served) >= theta + tables * sigma) {
      // existing table with probability proportional to size - sigma
      for (;;) {
        const int c = seat[rng.index(seat.size())];
        if (rng.uniform() * table_size[c] < table_size[c] - sigma) {
          j = c;
          break;
        }
      }
    }
    if (j < 0) {
      j = static_cast<int>(table_size.size());
      table_size.push_back(0);
      table_label.push_back(next_label++);
    }
    ++table_size[j];
    seat.push_back(j);
    seq.labels.push_back(table_label[j]);
    seq.contaminant.push_back(0);
  }
  return seq;
}

LabeledSequence urn_sample_sequence(double alpha, double theta, double sigma, int n, Rng& rng) {
  if (!(alpha > 0) || !(theta > 0) || !(sigma >= 0 && sigma < 1))
    throw std::invalid_argument("urn: need alpha > 0, theta > 0, sigma in [0, 1)");
  if (n < 1) throw std::invalid_argument("urn: n must be >= 1");
  LabeledSequence seq;
  std::vector<int> solid_size;
  std::vector<int> solid_label;
  std::vector<int> seat;
  int strip = 0;
  int next_label = 0;
  for (int t = 0; t < n; ++t) {
    const double u = rng.uniform() * (alpha + theta + t);
    const double solid_new = theta + static_cast<double>(solid_size.size()) * sigma;
    if (u < strip + alpha) {
      ++strip;
      seq.labels.push_back(next_label++);
      seq.contaminant.push_back(1);
      continue;
    }
    int j = -1;
    if (u >= strip + alpha + solid_new && !seat.empty()) {
      for (;;) {
        const int c = seat[rng.index(seat.size())];
        if (rng.uniform() * solid_size[c] < solid_size[c] - sigma) {
          j = c;
          break;
        }
      }
    }
    if (j < 0) {
      j = static_cast<int>(solid_size.size());
      solid_size.push_back(0);
      solid_label.push_back(next_label++);
    }
    ++solid_size[j];
    seat.push_back(j);
    seq.labels.push_back(solid_label[j]);
    seq.contaminant.push_back(0);
  }
  return seq;
}

EppfRatios eppf_ratio(const FrequencyVector& a, const FrequencyVector& b, const CgpParams& p) {
  if (a.n() != b.n() || a.k() != b.k()) throw std::invalid_argument("eppf_ratio: compositions must share n and k");
  return {std::exp(eppf_log(a, p) - eppf_log(b, p)),
          std::exp(gibbs_eppf_log(a, p.family) - gibbs_eppf_log(b, p.family))};
}

PriorMoments prior_covariance(double qA, double qB, double qAB, const CgpParams& p) {
  const double eps = 1e-12;
  if (qA < 0 || qA > 1 || qB < 0 || qB > 1 || qAB < 0 || qAB > std::min(qA, qB) + eps ||
      qA + qB - qAB > 1 + eps)
    throw std::invalid_argument("prior_covariance: inconsistent measure values");
  const double v21 = std::exp(p.family.log_v(2, 1) - p.family.log_v(1, 1));
  return {qA, qB, p.beta * p.beta * (1.0 - p.sigma()) * v21 * (qAB - qA * qB)};
}

}  // namespace cgp
