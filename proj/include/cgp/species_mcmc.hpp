#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cgp/core.hpp"

namespace cgp {

struct GammaPrior {
  double shape = 2.0;
  double rate = 0.02;
};

// Beta(1, 1) is the uniform prior.
struct BetaPrior {
  double a = 1.0;
  double b = 1.0;
};

struct SpeciesFitConfig {
  int iterations = 15000;
  int burn_in = 5000;
  int thin = 10;
  GammaPrior prior_theta;
  BetaPrior prior_sigma;
  BetaPrior prior_beta;
  double proposal_sd_psi = 0.5;     // logit(sigma) scale
  double proposal_sd_lambda = 0.5;  // log(theta) scale
  bool adapt = true;
  bool pure_py = false;             // beta pinned to 1
  std::uint64_t seed = 1;
  // Parameters held at a value instead of sampled.
  std::optional<double> fix_sigma;
  std::optional<double> fix_theta;
  std::optional<double> fix_beta;

  void validate() const;
  int kept() const { return (iterations - burn_in) / thin; }
};

// Mixture chains share the sampler settings.
using MixtureFitConfig = SpeciesFitConfig;

// What the hyperparameter updates read from a composition.
struct SpeciesData {
  int n = 0;
  int k = 0;
  int m1 = 0;
  std::vector<std::pair<int, int>> repeated;  // (block size >= 2, multiplicity)

  static SpeciesData of(const FrequencyVector& fv);
  static SpeciesData of_sizes(const std::vector<int>& sizes);
};

struct SpeciesState {
  double sigma = 0.5;
  double theta = 1.0;
  double beta = 1.0;
  int mbar = 0;
};

// Log full conditionals up to constants, on the natural scale.
double log_target_sigma(double sigma, const SpeciesState& s, const SpeciesData& d, const BetaPrior& prior);
double log_target_theta(double theta, const SpeciesState& s, const SpeciesData& d, const GammaPrior& prior);

// Random-walk Metropolis on logit(sigma) / log(theta); return the accept flag.
bool update_sigma(SpeciesState& s, const SpeciesData& d, Rng& rng, const SpeciesFitConfig& cfg, double sd);
bool update_theta(SpeciesState& s, const SpeciesData& d, Rng& rng, const SpeciesFitConfig& cfg, double sd);
void update_beta(SpeciesState& s, const SpeciesData& d, Rng& rng, const BetaPrior& prior);
void update_mbar(SpeciesState& s, const SpeciesData& d, Rng& rng);

// Robbins-Monro tuning of a log proposal scale towards acceptance 0.44.
class AdaptiveScale {
 public:
  explicit AdaptiveScale(double sd) : log_sd_(std::log(sd)) {}
  double sd() const { return std::exp(log_sd_); }
  void update(bool accepted, int iteration);

 private:
  double log_sd_;
};

struct SpeciesTrace {
  std::vector<double> sigma;
  std::vector<double> theta;
  std::vector<double> beta;
  std::vector<int> mbar;
  double acc_sigma = 0.0;
  double acc_theta = 0.0;
  std::uint64_t seed = 0;
  SpeciesFitConfig config;
};

SpeciesTrace run_chain(const FrequencyVector& fv, const SpeciesFitConfig& cfg, Rng& rng);
SpeciesTrace run_chain(const FrequencyVector& fv, const SpeciesFitConfig& cfg);

}  // namespace cgp
