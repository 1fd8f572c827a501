#pragma once

#include <cstdint>
#include <vector>

#include "cgp/gibbs.hpp"
#include "cgp/random.hpp"

namespace cgp {

// Contaminated Gibbs-type prior beta * q + (1 - beta) * P0.
struct CgpParams {
  CgpParams(GibbsFamily family, double beta, bool same_source = true);

  GibbsFamily family;
  double beta;
  bool same_source;  // P0 == Q0

  double sigma() const { return family.sigma(); }
  double theta() const { return family.theta(); }
};

// Block sizes of a partition, stored in increasing order (singletons first).
class FrequencyVector {
 public:
  explicit FrequencyVector(std::vector<int> freqs);

  const std::vector<int>& freqs() const { return freqs_; }
  int n() const { return n_; }
  int k() const { return static_cast<int>(freqs_.size()); }
  int m1() const { return m1_; }
  int operator[](std::size_t i) const { return freqs_[i]; }

  FrequencyVector incremented(std::size_t i) const;
  FrequencyVector with_new_block() const;

  friend bool operator==(const FrequencyVector& a, const FrequencyVector& b);

 private:
  std::vector<int> freqs_;
  int n_ = 0;
  int m1_ = 0;
};

// J_i = 0 marks singleton i (in FrequencyVector order) as structural.
struct LatentSingletonState {
  std::vector<int> J;
  int mbar() const;
};

struct LabeledSequence {
  std::vector<int> labels;
  std::vector<std::uint8_t> contaminant;

  std::size_t size() const { return labels.size(); }
  int contaminant_count() const;
  FrequencyVector frequencies() const;
};

LogValue gibbs_eppf_log(const FrequencyVector& fv, const GibbsFamily& family);
LogValue eppf_log(const FrequencyVector& fv, const CgpParams& p);
// Pitman-Yor closed form through sigma^{k'} (theta/sigma)_{k'} / (theta)_{n'}; needs theta > 0.
LogValue eppf_log_py_closed_form(const FrequencyVector& fv, const CgpParams& p);

// Unnormalized log P(mbar | n, k, m1) over mbar = 0..m1; -inf where impossible.
std::vector<LogValue> mbar_log_weights(int n, int k, int m1, const CgpParams& p);
std::vector<double> mbar_posterior(int n, int k, int m1, const CgpParams& p);
std::vector<double> mbar_posterior(const FrequencyVector& fv, const CgpParams& p);

struct ConditionalPredictive {
  double contaminant_new = 0.0;
  double base_new = 0.0;
  std::vector<double> existing;  // FrequencyVector order
};

ConditionalPredictive predictive_conditional(const FrequencyVector& fv, const LatentSingletonState& J,
                                             const CgpParams& p);

struct MarginalPredictive {
  double new_value = 0.0;
  std::vector<double> existing;  // FrequencyVector order
};

MarginalPredictive predictive_marginal(const FrequencyVector& fv, const CgpParams& p);

double probability_of_new(int n, int k, int m1, const CgpParams& p);

LabeledSequence sample_sequence(const CgpParams& p, int n, Rng& rng);

// Urn with beta integrated out under Beta(theta, alpha); strip balls are flagged as contaminants.
LabeledSequence urn_sample_sequence(double alpha, double theta, double sigma, int n, Rng& rng);

struct EppfRatios {
  double contaminated = 1.0;
  double gibbs = 1.0;
};

EppfRatios eppf_ratio(const FrequencyVector& a, const FrequencyVector& b, const CgpParams& p);

struct PriorMoments {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double covariance = 0.0;
};

// Moments of (p(A), p(B)) when P0 == Q0, from qA = Q0(A), qB = Q0(B), qAB = Q0(A and B).
PriorMoments prior_covariance(double qA, double qB, double qAB, const CgpParams& p);

}  // namespace cgp
