#pragma once

#include <cstdint>
#include <vector>

#include "cgp/core.hpp"
#include "cgp/numerics.hpp"

namespace cgp {

LabeledSequence gen_discrete_scenario(double theta, double sigma, double beta, int n, std::uint64_t seed);

struct SyntheticMixtureConfig {
  int d = 2;
  int m = 90;   // inliers
  int s = 10;   // outliers
  double c = 1.0;
  std::uint64_t seed = 1;
  void validate() const;
};

struct SyntheticMixture {
  Matrix data;                         // (m + s) x d, outliers last
  std::vector<std::uint8_t> outlier;   // ground truth
  std::size_t proposals = 0;           // rejection-sampler proposals spent on outliers
};

SyntheticMixture gen_mixture_with_outliers(const SyntheticMixtureConfig& cfg);

// 3 sqrt(chi2_d(0.9))
double outlier_radius(int d);

// Outlier draw: N(0, 9I) conditioned on norm > radius; returns proposals used.
std::size_t sample_truncated_outlier(int d, double radius, Rng& rng, Vector& out);

double regularized_gamma_p(double a, double x);
double chi2_quantile(int d, double q);

}  // namespace cgp
