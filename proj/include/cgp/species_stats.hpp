#pragma once

#include "cgp/core.hpp"

namespace cgp {

// Observed-sample counts; n = k = m1 = 0 means no data (posterior formulas reduce to prior ones).
struct SampleSummary {
  int n = 0;
  int k = 0;
  int m1 = 0;
  static SampleSummary of(const FrequencyVector& fv) { return {fv.n(), fv.k(), fv.m1()}; }
};

// E[K_n] by the binomial sum over contaminant counts.
double expected_kn(const CgpParams& p, int n);
// Same through the Beta(theta + sigma, 1 - sigma) representation; needs sigma > 0.
double expected_kn_beta_form(const CgpParams& p, int n);

// E[M_{n,r}], number of clusters of size r among n observations.
double expected_mnr(const CgpParams& p, int n, int r);
double expected_mnr_beta_form(const CgpParams& p, int n, int r);

// Expected number of new clusters among m further observations ...
// ... appearing once in them
double posterior_expected_nm1(const SampleSummary& s, const CgpParams& p, int m);
// ... appearing r >= 2 times in them
double posterior_expected_nmr(const SampleSummary& s, const CgpParams& p, int m, int r);
// ... of any frequency
double posterior_expected_km(const SampleSummary& s, const CgpParams& p, int m);

inline double posterior_expected_nm1(const FrequencyVector& fv, const CgpParams& p, int m) {
  return posterior_expected_nm1(SampleSummary::of(fv), p, m);
}
inline double posterior_expected_nmr(const FrequencyVector& fv, const CgpParams& p, int m, int r) {
  return posterior_expected_nmr(SampleSummary::of(fv), p, m, r);
}
inline double posterior_expected_km(const FrequencyVector& fv, const CgpParams& p, int m) {
  return posterior_expected_km(SampleSummary::of(fv), p, m);
}

struct SpeciesStatistics {
  int r = 2;
  double expected_kn = 0.0;
  double expected_mn1 = 0.0;
  double expected_mnr = 0.0;
  double posterior_expected_km = 0.0;
  double posterior_expected_nm1 = 0.0;
  double posterior_expected_nmr = 0.0;
};

// Prior statistics at the observed n, posterior ones for m further draws.
SpeciesStatistics species_statistics(const FrequencyVector& fv, const CgpParams& p, int m, int r = 2);

}  // namespace cgp
