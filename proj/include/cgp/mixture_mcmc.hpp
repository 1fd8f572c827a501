#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgp/numerics.hpp"
#include "cgp/random.hpp"
#include "cgp/species_mcmc.hpp"

namespace cgp {

// Normal-Inverse-Wishart: Sigma ~ IW(nu, S), mu | Sigma ~ N(mu0, Sigma / kappa).
struct NiwParams {
  Vector mu;
  double kappa = 1.0;
  double nu = 3.0;
  Matrix scale;

  int dim() const { return static_cast<int>(mu.size()); }
  void validate() const;
};

// Student-t predictive of one observation under a NIW prior.
class StudentT {
 public:
  explicit StudentT(const NiwParams& niw);
  double log_density(const Vector& y) const;
  double df() const { return df_; }
  const Vector& loc() const { return loc_; }

 private:
  double df_;
  Vector loc_;
  Cholesky scale_;
};

double niw_marginal_log(const Vector& y, const NiwParams& niw);
NiwParams niw_posterior(const NiwParams& niw, std::span<const Vector> ys);

struct ClusterParams {
  ClusterParams(Vector mean, const Matrix& cov) : mean(std::move(mean)), cov(cov), chol(cov) {}
  Vector mean;
  Matrix cov;
  Cholesky chol;
};

// Draw (mu, Sigma) from a NIW distribution.
ClusterParams sample_niw(const NiwParams& niw, Rng& rng);

// Allocation 0 is the contaminant component; clusters are 1..k with params clusters[j - 1].
struct MixtureState {
  std::vector<int> alloc;
  std::vector<int> sizes;
  std::vector<ClusterParams> clusters;
  double sigma = 0.5;
  double theta = 1.0;
  double beta = 0.95;

  int k() const { return static_cast<int>(clusters.size()); }
  int contaminants() const;
  // Throws std::logic_error if labels, sizes and clusters disagree.
  void check() const;
  // Relabel clusters by first appearance.
  void compact();
};

// Data with the constant Student-t log densities under both NIW measures.
class MixtureData {
 public:
  MixtureData(const Matrix& data, const NiwParams& base, const NiwParams& contaminant);
  std::size_t n() const { return rows_.size(); }
  int dim() const { return dim_; }
  const Vector& row(std::size_t i) const { return rows_[i]; }
  std::span<const Vector> rows() const { return rows_; }
  double log_t_base(std::size_t i) const { return log_t0_[i]; }
  double log_t_contaminant(std::size_t i) const { return log_t1_[i]; }
  const NiwParams& base() const { return base_; }
  const NiwParams& contaminant() const { return contaminant_; }

 private:
  int dim_;
  std::vector<Vector> rows_;
  std::vector<double> log_t0_;
  std::vector<double> log_t1_;
  NiwParams base_;
  NiwParams contaminant_;
};

// Log weights for observation i, which must already be out of the counts:
// [contaminant, cluster 1, ..., cluster k, new cluster].
std::vector<LogValue> allocation_log_weights(const MixtureState& s, std::size_t i, const MixtureData& data);

// Removes i, draws its label, and discards a cluster left empty. Returns the new label.
int allocation_step(MixtureState& s, std::size_t i, const MixtureData& data, Rng& rng);

void update_cluster_params(MixtureState& s, const MixtureData& data, Rng& rng);

SpeciesData mixture_species_data(const MixtureState& s);

struct HyperMoves {
  bool sigma = false;
  bool theta = false;
};

HyperMoves update_mixture_hyperparams(MixtureState& s, Rng& rng, const MixtureFitConfig& cfg, double sd_sigma,
                                      double sd_theta);

struct MixtureTrace {
  std::vector<std::vector<int>> allocations;
  std::vector<double> sigma;
  std::vector<double> theta;
  std::vector<double> beta;
  std::vector<int> k;
  double acc_sigma = 0.0;
  double acc_theta = 0.0;
  std::uint64_t seed = 0;
  MixtureFitConfig config;
};

MixtureState initial_mixture_state(const MixtureData& data, const MixtureFitConfig& cfg, Rng& rng);

// One sweep: allocations, cluster parameters, hyperparameters.
HyperMoves mixture_sweep(MixtureState& s, const MixtureData& data, Rng& rng, const MixtureFitConfig& cfg,
                         double sd_sigma, double sd_theta);

MixtureTrace run_mixture_chain(const Matrix& data, const MixtureFitConfig& cfg, const NiwParams& base,
                               const NiwParams& contaminant, Rng& rng);
MixtureTrace run_mixture_chain(const Matrix& data, const MixtureFitConfig& cfg, const NiwParams& base,
                               const NiwParams& contaminant);

}  // namespace cgp
