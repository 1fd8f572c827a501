#include "cgp/species_mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace cgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_v_py(double sigma, double theta, int n, int k) {
  return GibbsFamily::pitman_yor(sigma, theta).log_v(n, k);
}

double log_beta_density(double x, const BetaPrior& p) {
  return (p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void SpeciesFitConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) throw std::invalid_argument("burn_in must lie in [0, iterations)");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (kept() < 1) throw std::invalid_argument("configuration keeps no iterations");
  if (!(proposal_sd_psi > 0) || !(proposal_sd_lambda > 0)) throw std::invalid_argument("proposal sds must be positive");
  if (!(prior_theta.shape > 0) || !(prior_theta.rate > 0)) throw std::invalid_argument("theta prior must have positive shape and rate");
  if (!(prior_sigma.a > 0) || !(prior_sigma.b > 0) || !(prior_beta.a > 0) || !(prior_beta.b > 0))
    throw std::invalid_argument("Beta prior parameters must be positive");
  if (fix_sigma && !(*fix_sigma >= 0 && *fix_sigma < 1)) throw std::invalid_argument("fixed sigma must lie in [0, 1)");
  if (fix_theta && !(*fix_theta > 0)) throw std::invalid_argument("fixed theta must be positive");
  if (fix_beta && !(*fix_beta > 0 && *fix_beta <= 1)) throw std::invalid_argument("fixed beta must lie in (0, 1]");
}

SpeciesData SpeciesData::of_sizes(const std::vector<int>& sizes) {
  SpeciesData d;
  std::map<int, int> mult;
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("block sizes must be positive");
    d.n += s;
    ++d.k;
    if (s == 1)
      ++d.m1;
    else
      ++mult[s];
  }
  d.repeated.assign(mult.begin(), mult.end());
  return d;
}

SpeciesData SpeciesData::of(const FrequencyVector& fv) { return of_sizes(fv.freqs()); }

double log_target_sigma(double sigma, const SpeciesState& s, const SpeciesData& d, const BetaPrior& prior) {
  if (!(sigma > 0 && sigma < 1)) return kNegInf;
  double lt = log_beta_density(sigma, prior) + log_v_py(sigma, s.theta, d.n - s.mbar, d.k - s.mbar);
  for (const auto& [size, mult] : d.repeated) lt += mult * log_pochhammer(1.0 - sigma, size - 1.0);
  return lt;
}

double log_target_theta(double theta, const SpeciesState& s, const SpeciesData& d, const GammaPrior& prior) {
  if (!(theta > 0)) return kNegInf;
  return (prior.shape - 1.0) * std::log(theta) - prior.rate * theta +
         log_v_py(s.sigma, theta, d.n - s.mbar, d.k - s.mbar);
}

bool update_sigma(SpeciesState& s, const SpeciesData& d, Rng& rng, const SpeciesFitConfig& cfg, double sd) {
  const double psi = std::log(s.sigma) - std::log1p(-s.sigma);
  const double prop = logistic(psi + sd * rng.normal());
  if (!(prop > 0 && prop < 1)) return false;
  // Jacobian of the logit map: sigma (1 - sigma)
  const double cur = log_target_sigma(s.sigma, s, d, cfg.prior_sigma) + std::log(s.sigma) + std::log1p(-s.sigma);
  const double nxt = log_target_sigma(prop, s, d, cfg.prior_sigma) + std::log(prop) + std::log1p(-prop);
  if (!std::isfinite(nxt)) return false;
  if (std::log(rng.uniform()) < nxt - cur) {
    s.sigma = prop;
    return true;
  }
  return false;
}

bool update_theta(SpeciesState& s, const SpeciesData& d, Rng& rng, const SpeciesFitConfig& cfg, double sd) {
  const double prop = s.theta * std::exp(sd * rng.normal());
  if (!(prop > 0) || !std::isfinite(prop)) return false;
  const double cur = log_target_theta(s.theta, s, d, cfg.prior_theta) + std::log(s.theta);
  const double nxt = log_target_theta(prop, s, d, cfg.prior_theta) + std::log(prop);
  if (!std::isfinite(nxt)) return false;
  if (std::log(rng.uniform()) < nxt - cur) {
    s.theta = prop;
    return true;
  }
  return false;
}

void update_beta(SpeciesState& s, const SpeciesData& d, Rng& rng, const BetaPrior& prior) {
  s.beta = rng.beta(prior.a + d.n - s.mbar, prior.b + s.mbar);
}

void update_mbar(SpeciesState& s, const SpeciesData& d, Rng& rng) {
  if (d.m1 == 0 || s.beta >= 1.0) {
    s.mbar = 0;
    return;
  }
  const CgpParams p(GibbsFamily::pitman_yor(s.sigma, s.theta), s.beta);
  const auto w = mbar_log_weights(d.n, d.k, d.m1, p);
  s.mbar = static_cast<int>(categorical_from_log_weights(w, rng));
}

void AdaptiveScale::update(bool accepted, int iteration) {
  log_sd_ += std::pow(static_cast<double>(iteration), -0.6) * ((accepted ? 1.0 : 0.0) - 0.44);
  log_sd_ = std::clamp(log_sd_, std::log(1e-4), std::log(50.0));
}

SpeciesTrace run_chain(const FrequencyVector& fv, const SpeciesFitConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto data = SpeciesData::of(fv);
  SpeciesState s;
  s.sigma = cfg.fix_sigma.value_or(0.5);
  s.theta = cfg.fix_theta.value_or(1.0);
  if (cfg.pure_py) {
    s.beta = 1.0;
    s.mbar = 0;
  } else {
    s.beta = cfg.fix_beta.value_or((data.n - 0.5 * data.m1) / data.n);
    s.mbar = s.beta < 1.0 ? static_cast<int>(rng.index(static_cast<std::size_t>(data.m1) + 1)) : 0;
  }
  SpeciesTrace tr;
  tr.seed = cfg.seed;
  tr.config = cfg;
  const auto kept = static_cast<std::size_t>(cfg.kept());
  tr.sigma.reserve(kept);
  tr.theta.reserve(kept);
  tr.beta.reserve(kept);
  tr.mbar.reserve(kept);
  AdaptiveScale sd_sigma(cfg.proposal_sd_psi);
  AdaptiveScale sd_theta(cfg.proposal_sd_lambda);
  long acc_sigma = 0;
  long acc_theta = 0;
  for (int t = 0; t < cfg.iterations; ++t) {
    const bool burning = t < cfg.burn_in;
    if (!cfg.fix_sigma) {
      const bool a = update_sigma(s, data, rng, cfg, sd_sigma.sd());
      if (burning && cfg.adapt) sd_sigma.update(a, t + 1);
      if (!burning && a) ++acc_sigma;
    }
    if (!cfg.fix_theta) {
      const bool a = update_theta(s, data, rng, cfg, sd_theta.sd());
      if (burning && cfg.adapt) sd_theta.update(a, t + 1);
      if (!burning && a) ++acc_theta;
    }
    if (!cfg.pure_py) {
      if (!cfg.fix_beta) update_beta(s, data, rng, cfg.prior_beta);
      update_mbar(s, data, rng);
    }
    if (!burning && (t - cfg.burn_in + 1) % cfg.thin == 0) {
      tr.sigma.push_back(s.sigma);
      tr.theta.push_back(s.theta);
      tr.beta.push_back(s.beta);
      tr.mbar.push_back(s.mbar);
    }
  }
  const double post = cfg.iterations - cfg.burn_in;
  tr.acc_sigma = acc_sigma / post;
  tr.acc_theta = acc_theta / post;
  return tr;
}

SpeciesTrace run_chain(const FrequencyVector& fv, const SpeciesFitConfig& cfg) {
  Rng rng(cfg.seed);
  return run_chain(fv, cfg, rng);
}

}  // namespace cgp
