#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cgp/core.hpp"
#include "cgp/diagnostics.hpp"
#include "cgp/io.hpp"
#include "cgp/mixture_mcmc.hpp"
#include "cgp/partition.hpp"
#include "cgp/species_mcmc.hpp"
#include "cgp/species_stats.hpp"
#include "cgp/synthetic.hpp"

namespace py = pybind11;
using namespace cgp;

namespace {

CgpParams params(double sigma, double theta, double beta) {
  return CgpParams(GibbsFamily::pitman_yor(sigma, theta), beta);
}

NiwParams niw(const Vector& mu, double kappa, double nu, const Matrix& scale) {
  NiwParams p;
  p.mu = mu;
  p.kappa = kappa;
  p.nu = nu;
  p.scale = scale;
  p.validate();
  return p;
}

SpeciesFitConfig fit_config(int iterations, int burn_in, int thin, bool pure_py, bool adapt, std::uint64_t seed) {
  SpeciesFitConfig cfg;
  cfg.iterations = iterations;
  cfg.burn_in = burn_in;
  cfg.thin = thin;
  cfg.pure_py = pure_py;
  cfg.adapt = adapt;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Contaminated Gibbs-type priors";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def(
      "eppf_log",
      [](const std::vector<int>& freqs, double sigma, double theta, double beta) {
        return eppf_log(FrequencyVector(freqs), params(sigma, theta, beta));
      },
      py::arg("freqs"), py::arg("sigma"), py::arg("theta"), py::arg("beta"));

  m.def(
      "predictive",
      [](const std::vector<int>& freqs, double sigma, double theta, double beta) {
        const auto w = predictive_marginal(FrequencyVector(freqs), params(sigma, theta, beta));
        return py::make_tuple(w.new_value, w.existing);
      },
      py::arg("freqs"), py::arg("sigma"), py::arg("theta"), py::arg("beta"),
      "(probability of a new value, weights of the existing blocks)");

  m.def(
      "probability_of_new",
      [](int n, int k, int m1, double sigma, double theta, double beta) {
        return probability_of_new(n, k, m1, params(sigma, theta, beta));
      },
      py::arg("n"), py::arg("k"), py::arg("m1"), py::arg("sigma"), py::arg("theta"), py::arg("beta"));

  m.def(
      "mbar_posterior",
      [](const std::vector<int>& freqs, double sigma, double theta, double beta) {
        return mbar_posterior(FrequencyVector(freqs), params(sigma, theta, beta));
      },
      py::arg("freqs"), py::arg("sigma"), py::arg("theta"), py::arg("beta"));

  m.def(
      "prior_covariance",
      [](double qa, double qb, double qab, double sigma, double theta, double beta) {
        return prior_covariance(qa, qb, qab, params(sigma, theta, beta)).covariance;
      },
      py::arg("qa"), py::arg("qb"), py::arg("qab"), py::arg("sigma"), py::arg("theta"), py::arg("beta"));

  m.def(
      "expected_kn",
      [](int n, double sigma, double theta, double beta) { return expected_kn(params(sigma, theta, beta), n); },
      py::arg("n"), py::arg("sigma"), py::arg("theta"), py::arg("beta"));

  m.def(
      "expected_mnr",
      [](int n, int r, double sigma, double theta, double beta) {
        return expected_mnr(params(sigma, theta, beta), n, r);
      },
      py::arg("n"), py::arg("r"), py::arg("sigma"), py::arg("theta"), py::arg("beta"));

  m.def(
      "species_statistics",
      [](const std::vector<int>& freqs, int m, int r, double sigma, double theta, double beta) {
        const auto s = species_statistics(FrequencyVector(freqs), params(sigma, theta, beta), m, r);
        py::dict d;
        d["expected_kn"] = s.expected_kn;
        d["expected_mn1"] = s.expected_mn1;
        d["expected_mnr"] = s.expected_mnr;
        d["posterior_expected_km"] = s.posterior_expected_km;
        d["posterior_expected_nm1"] = s.posterior_expected_nm1;
        d["posterior_expected_nmr"] = s.posterior_expected_nmr;
        return d;
      },
      py::arg("freqs"), py::arg("m"), py::arg("r") = 2, py::arg("sigma"), py::arg("theta"), py::arg("beta"));

  m.def(
      "sample_sequence",
      [](int n, double sigma, double theta, double beta, std::uint64_t seed) {
        Rng rng(seed);
        const auto s = sample_sequence(params(sigma, theta, beta), n, rng);
        return py::make_tuple(s.labels, std::vector<bool>(s.contaminant.begin(), s.contaminant.end()));
      },
      py::arg("n"), py::arg("sigma"), py::arg("theta"), py::arg("beta"), py::arg("seed") = 1,
      "(labels, contaminant flags)");

  m.def(
      "gen_discrete_scenario",
      [](double theta, double sigma, double beta, int n, std::uint64_t seed) {
        const auto s = gen_discrete_scenario(theta, sigma, beta, n, seed);
        return py::make_tuple(s.labels, std::vector<bool>(s.contaminant.begin(), s.contaminant.end()));
      },
      py::arg("theta"), py::arg("sigma"), py::arg("beta"), py::arg("n"), py::arg("seed") = 1);

  m.def(
      "gen_mixture_with_outliers",
      [](int d, int inliers, int outliers, double c, std::uint64_t seed) {
        SyntheticMixtureConfig cfg;
        cfg.d = d;
        cfg.m = inliers;
        cfg.s = outliers;
        cfg.c = c;
        cfg.seed = seed;
        cfg.validate();
        const auto g = gen_mixture_with_outliers(cfg);
        return py::make_tuple(g.data, std::vector<bool>(g.outlier.begin(), g.outlier.end()));
      },
      py::arg("d") = 2, py::arg("m") = 90, py::arg("s") = 10, py::arg("c") = 1.0, py::arg("seed") = 1);

  m.def(
      "fit_species",
      [](const std::vector<int>& freqs, int iterations, int burn_in, int thin, bool pure_py, bool adapt,
         std::uint64_t seed) {
        const auto cfg = fit_config(iterations, burn_in, thin, pure_py, adapt, seed);
        SpeciesTrace t;
        {
          py::gil_scoped_release release;
          t = run_chain(FrequencyVector(freqs), cfg);
        }
        py::dict d;
        d["sigma"] = t.sigma;
        d["theta"] = t.theta;
        d["beta"] = t.beta;
        d["mbar"] = t.mbar;
        d["acc_sigma"] = t.acc_sigma;
        d["acc_theta"] = t.acc_theta;
        return d;
      },
      py::arg("freqs"), py::arg("iterations") = 15000, py::arg("burn_in") = 5000, py::arg("thin") = 10,
      py::arg("pure_py") = false, py::arg("adapt") = true, py::arg("seed") = 1);

  m.def(
      "fit_mixture",
      [](const Matrix& data, const Vector& mu, double kappa0, double kappa1, double nu, const Matrix& scale,
         int iterations, int burn_in, int thin, bool pure_py, std::uint64_t seed) {
        const auto cfg = fit_config(iterations, burn_in, thin, pure_py, true, seed);
        const auto base = niw(mu, kappa0, nu, scale);
        const auto cont = niw(mu, kappa1, nu, scale);
        MixtureTrace t;
        {
          py::gil_scoped_release release;
          t = run_mixture_chain(data, cfg, base, cont);
        }
        py::dict d;
        d["allocations"] = t.allocations;
        d["sigma"] = t.sigma;
        d["theta"] = t.theta;
        d["beta"] = t.beta;
        d["k"] = t.k;
        return d;
      },
      py::arg("data"), py::arg("mu"), py::arg("kappa0"), py::arg("kappa1"), py::arg("nu"), py::arg("scale"),
      py::arg("iterations") = 15000, py::arg("burn_in") = 5000, py::arg("thin") = 10, py::arg("pure_py") = false,
      py::arg("seed") = 1, "allocations use 0 for contaminants");

  m.def(
      "vi_distance",
      [](const std::vector<int>& a, const std::vector<int>& b) { return vi_distance(Partition{a}, Partition{b}); },
      py::arg("a"), py::arg("b"));

  m.def(
      "vi_point_estimate",
      [](const std::vector<std::vector<int>>& samples) {
        std::vector<Partition> parts;
        parts.reserve(samples.size());
        for (const auto& s : samples) parts.push_back(Partition{s});
        const auto e = vi_point_estimate(parts);
        return py::make_tuple(e.partition.labels, e.expected_vi, e.index);
      },
      py::arg("samples"), "(labels, expected VI, index of the first matching sample)");

  m.def(
      "ess", [](const std::vector<double>& x) { return ess(x); }, py::arg("chain"));
  m.def(
      "geweke_z", [](const std::vector<double>& x, double a, double b) { return geweke_z(x, a, b); },
      py::arg("chain"), py::arg("frac_a") = 0.1, py::arg("frac_b") = 0.5);
}
