#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "cgp/mixture_mcmc.hpp"
#include "cgp/species_mcmc.hpp"
#include "cgp/species_stats.hpp"

namespace cgp::cli {

// Bad flags, configs or input files: exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateSpeciesOptions {
  double theta = 25.0;
  double sigma = 0.4;
  double beta = 0.9;
  int n = 10000;
  std::uint64_t seed = 1;
  std::string out;
};

struct FitSpeciesOptions {
  std::string data;
  int iters = 15000;
  int burnin = 5000;
  int thin = 10;
  std::uint64_t seed = 1;
  bool pure_py = false;
  bool adapt = true;
  std::string out;  // prefix: <out>.trace.json, <out>.summary.json
};

struct PredictSpeciesOptions {
  std::string trace;
  std::string data;
  int m = 0;
  std::vector<int> r = {2};
  int max_draws = 0;  // 0: every kept draw
  std::string out;
};

struct CrossvalOptions {
  std::string data;
  double frac = 0.8;
  int reps = 10;
  std::uint64_t seed = 1;
  int iters = 15000;
  int burnin = 5000;
  int thin = 10;
  int max_draws = 0;
  int threads = 0;  // 0: hardware concurrency
  std::string out;  // <out>.replicates.csv, <out>.mse.json
};

struct FitMixtureOptions {
  std::string data;
  std::string config;
  std::uint64_t seed = 1;
  bool pure_py = false;
  std::string out;  // <out>.trace.json, .allocations.csv, .partition.csv, .summary.json
};

struct DiagnoseOptions {
  std::string trace;
  std::string out;  // empty: stdout
};

struct SimulateMixtureOptions {
  int d = 2;
  int m = 90;
  int s = 10;
  double c = 1.0;
  std::uint64_t seed = 1;
  std::string out;
};

void simulate_species(const SimulateSpeciesOptions& o);
void fit_species(const FitSpeciesOptions& o);
void predict_species(const PredictSpeciesOptions& o);
void crossval_species(const CrossvalOptions& o);
void fit_mixture(const FitMixtureOptions& o);
void diagnose(const DiagnoseOptions& o);
void simulate_mixture(const SimulateMixtureOptions& o);

// Mean/sd/ess/geweke_z per monitored parameter of a trace.
nlohmann::json diagnostics_json(const nlohmann::json& trace);

// Posterior-averaged species statistics over kept draws.
struct Prediction {
  double km = 0.0;
  double nm1 = 0.0;
  std::map<int, double> nmr;
  std::size_t draws = 0;
};
Prediction predict(const SpeciesTrace& trace, const FrequencyVector& fv, int m, const std::vector<int>& r,
                   int max_draws);

// Mixture run settings read from a key = value file.
struct MixtureRunConfig {
  MixtureFitConfig fit;
  NiwParams base;
  NiwParams contaminant;
};
MixtureRunConfig mixture_config(const std::map<std::string, std::string>& kv, const Matrix& data);

// Parses argv and runs a subcommand. Returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace cgp::cli
