#pragma once

#include <optional>
#include <span>

namespace cgp {

// N / (1 + 2 sum rho_t), Geyer initial positive sequence. Can exceed N for antithetic chains.
double ess(std::span<const double> chain);

// Mean of the first frac_a versus the last frac_b of the chain, spectral-density standard errors.
double geweke_z(std::span<const double> chain, double frac_a = 0.1, double frac_b = 0.5);

// Spectral density at frequency zero (modified Daniell smoothing of the periodogram).
double spectral_density_zero(std::span<const double> x);

struct ChainSummary {
  double mean = 0.0;
  double sd = 0.0;
  std::optional<double> ess;  // capped at N
  std::optional<double> geweke_z;
  bool degenerate = false;  // constant chain
};

ChainSummary summarize(std::span<const double> chain);

}  // namespace cgp
