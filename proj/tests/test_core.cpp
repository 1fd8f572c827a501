#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "cgp/core.hpp"
#include "cgp/partition.hpp"
#include "cgp/species_stats.hpp"
#include "stat_helpers.hpp"

using namespace cgp;

namespace {

CgpParams py(double sigma, double theta, double beta) { return CgpParams(GibbsFamily::pitman_yor(sigma, theta), beta); }

FrequencyVector composition(const std::vector<int>& rgs) {
  const int k = *std::max_element(rgs.begin(), rgs.end()) + 1;
  std::vector<int> sizes(k, 0);
  for (int l : rgs) ++sizes[l];
  return FrequencyVector(sizes);
}

}  // namespace

TEST_CASE("FrequencyVector") {
  const FrequencyVector fv({3, 1, 2, 1});
  CHECK(fv.n() == 7);
  CHECK(fv.k() == 4);
  CHECK(fv.m1() == 2);
  CHECK(fv[0] == 1);
  CHECK(fv[1] == 1);
  CHECK(fv == FrequencyVector({1, 1, 2, 3}));
  CHECK_THROWS_AS(FrequencyVector({}), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyVector({2, 0}), std::invalid_argument);
  CHECK(fv.with_new_block().m1() == 3);
  CHECK(fv.incremented(0).m1() == 1);
}

TEST_CASE("EPPF examples") {
  CHECK(std::abs(eppf_log(FrequencyVector({1}), py(0.3, 2.0, 0.7))) < 1e-15);
  CHECK(std::abs(eppf_log(FrequencyVector({2}), py(0.5, 1.0, 0.8)) - std::log(0.16)) < 1e-14);
  const double sigma = 0.35;
  const double theta = 1.7;
  const auto fam = GibbsFamily::pitman_yor(sigma, theta);
  const double expected = fam.log_v(7, 4) + std::log((1 - sigma) * (2 - sigma)) + std::log(1 - sigma);
  CHECK(std::abs(eppf_log(FrequencyVector({3, 2, 1, 1}), py(sigma, theta, 1.0)) - expected) < 1e-13);
  CHECK_THROWS_AS(CgpParams(fam, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CgpParams(fam, 1.1), std::invalid_argument);
}

TEST_CASE("generic EPPF equals the Pitman-Yor closed form") {
  const std::vector<std::vector<int>> comps = {{1}, {1, 1, 1}, {4, 1, 2}, {5, 1, 1, 3, 2, 1}, {7, 7, 1}};
  for (double sigma : {0.0, 0.25, 0.6})
    for (double theta : {0.4, 3.0, 40.0})
      for (double beta : {0.3, 0.9, 1.0})
        for (const auto& c : comps) {
          const FrequencyVector fv(c);
          const auto p = py(sigma, theta, beta);
          CHECK(std::abs(eppf_log(fv, p) - eppf_log_py_closed_form(fv, p)) < 1e-12);
        }
}

TEST_CASE("EPPF sums to one over set partitions") {
  for (double sigma : {0.0, 0.4})
    for (double beta : {0.6, 1.0})
      for (int n = 1; n <= 6; ++n) {
        const auto p = py(sigma, 2.0, beta);
        double total = 0.0;
        for_each_set_partition(n, [&](const std::vector<int>& a) { total += std::exp(eppf_log(composition(a), p)); });
        CHECK(std::abs(total - 1.0) < 1e-12);
      }
}

TEST_CASE("Kolmogorov consistency") {
  const auto p = py(0.3, 1.5, 0.75);
  for (int n = 1; n <= 6; ++n)
    for_each_set_partition(n, [&](const std::vector<int>& a) {
      const auto fv = composition(a);
      double next = std::exp(eppf_log(fv.with_new_block(), p));
      for (int i = 0; i < fv.k(); ++i) next += std::exp(eppf_log(fv.incremented(i), p));
      CHECK(std::abs(next - std::exp(eppf_log(fv, p))) < 1e-10);
    });
}

TEST_CASE("EPPF symmetric under permutation") {
  const auto p = py(0.45, 3.0, 0.85);
  std::vector<int> f = {1, 4, 1, 2, 3, 1};
  const double ref = eppf_log(FrequencyVector(f), p);
  std::sort(f.begin(), f.end());
  do {
    CHECK(eppf_log(FrequencyVector(f), p) == ref);
  } while (std::next_permutation(f.begin(), f.end()));
}

TEST_CASE("mbar posterior") {
  const auto p = py(0.4, 5.0, 0.8);
  const auto none = mbar_posterior(FrequencyVector({2, 3}), p);
  CHECK(none.size() == 1);
  CHECK(none[0] == 1.0);
  const auto pure = mbar_posterior(FrequencyVector({1, 1, 2}), py(0.4, 5.0, 1.0));
  CHECK(pure[0] == 1.0);
  CHECK(pure[1] == 0.0);
  CHECK(pure[2] == 0.0);
  for (double beta : {0.1, 0.5, 0.93}) {
    const auto one = mbar_posterior(FrequencyVector({1}), py(0.7, 12.0, beta));
    CHECK(std::abs(one[1] - (1 - beta)) < 1e-14);
  }
  const auto post = mbar_posterior(FrequencyVector({1, 1, 1, 1, 1, 2, 5, 1, 1}), p);
  double s = 0.0;
  for (double x : post) s += x;
  CHECK(std::abs(s - 1.0) < 1e-12);
  CHECK_THROWS_AS(mbar_posterior(5, 2, 3, p), std::invalid_argument);
}

TEST_CASE("MLR property of the mbar posterior") {
  for (double sigma : {0.0, 0.3, 0.7})
    for (double theta : {0.5, 10.0})
      for (double beta : {0.5, 0.9}) {
        const auto p = py(sigma, theta, beta);
        const int n = 60;
        const int k = 35;
        for (int m1 = 2 * k - n; m1 < k - 1; ++m1) {
          const auto a = mbar_posterior(n, k, m1, p);
          const auto b = mbar_posterior(n, k, m1 + 1, p);
          for (int mb = 1; mb <= m1; ++mb) CHECK(b[mb] / a[mb] >= b[mb - 1] / a[mb - 1]);
        }
      }
}

TEST_CASE("conditional predictive") {
  const FrequencyVector fv({1, 1, 3, 2});
  const auto pure = predictive_conditional(fv, {{1, 1}}, py(0.3, 2.0, 1.0));
  CHECK(pure.contaminant_new == 0.0);
  CHECK(std::abs(pure.base_new - (2.0 + 4 * 0.3) / 9.0) < 1e-15);
  CHECK(std::abs(pure.existing[3] - (3 - 0.3) / 9.0) < 1e-15);
  const auto p = py(0.3, 2.0, 0.7);
  const auto c = predictive_conditional(fv, {{0, 1}}, p);
  CHECK(c.existing[0] == 0.0);
  CHECK(std::abs(c.existing[1] - 0.7 * 0.7 / 8.0) < 1e-15);
  double s = c.contaminant_new + c.base_new;
  for (double w : c.existing) s += w;
  CHECK(std::abs(s - 1.0) < 1e-12);
  CHECK_THROWS_AS(predictive_conditional(fv, {{1}}, p), std::invalid_argument);
  CHECK_THROWS_AS(predictive_conditional(fv, {{2, 1}}, p), std::invalid_argument);
}

TEST_CASE("conditional predictive matches the generative sampler") {
  // first three draws form {singleton, pair} with a non-contaminant singleton; classify draw four
  const auto p = py(0.5, 1.0, 0.8);
  const auto w = predictive_conditional(FrequencyVector({1, 2}), {{1}}, p);
  Rng rng(2024);
  std::vector<double> hits(4, 0.0);
  double total = 0.0;
  for (int rep = 0; rep < 1000000; ++rep) {
    const auto seq = sample_sequence(p, 4, rng);
    const auto& l = seq.labels;
    int single = -1;
    int pair = -1;
    if (l[0] == l[1] && l[2] != l[0]) {
      pair = l[0];
      single = 2;
    } else if (l[0] == l[2] && l[1] != l[0]) {
      pair = l[0];
      single = 1;
    } else if (l[1] == l[2] && l[0] != l[1]) {
      pair = l[1];
      single = 0;
    } else {
      continue;
    }
    if (seq.contaminant[single]) continue;
    total += 1;
    if (seq.contaminant[3])
      hits[0] += 1;
    else if (l[3] == l[single])
      hits[2] += 1;
    else if (l[3] == pair)
      hits[3] += 1;
    else
      hits[1] += 1;
  }
  const std::vector<double> expect = {w.contaminant_new, w.base_new, w.existing[0], w.existing[1]};
  for (int i = 0; i < 4; ++i) {
    const double f = hits[i] / total;
    CHECK(std::abs(f - expect[i]) < 3.5 * std::sqrt(expect[i] * (1 - expect[i]) / total) + 1e-12);
  }
}

TEST_CASE("marginal predictive") {
  const FrequencyVector fv({1, 1, 1, 2, 4});
  const auto pure = predictive_marginal(fv, py(0.25, 3.0, 1.0));
  CHECK(std::abs(pure.new_value - (3.0 + 5 * 0.25) / 12.0) < 1e-14);
  CHECK(std::abs(pure.existing[0] - 0.75 / 12.0) < 1e-14);
  CHECK(std::abs(pure.existing[4] - 3.75 / 12.0) < 1e-14);
  const auto p = py(0.25, 3.0, 0.6);
  const auto m = predictive_marginal(fv, p);
  double s = m.new_value;
  for (double w : m.existing) s += w;
  CHECK(std::abs(s - 1.0) < 1e-12);
  CHECK(m.existing[0] == m.existing[1]);
  CHECK(m.existing[1] == m.existing[2]);
  CHECK(std::abs(m.existing[4] / m.existing[3] - (4 - 0.25) / (2 - 0.25)) < 1e-14);
  CHECK(m.existing[0] / m.existing[3] <= (1 - 0.25) / (2 - 0.25));
  CHECK_THROWS_AS(predictive_marginal(fv, CgpParams(GibbsFamily::pitman_yor(0.25, 3.0), 0.6, false)),
                  std::invalid_argument);
}

TEST_CASE("marginal predictive is the J-posterior mixture of conditionals") {
  for (double beta : {0.3, 0.85}) {
    const auto p = py(0.4, 2.5, beta);
    const FrequencyVector fv({1, 1, 1, 1, 2, 3, 1});
    const int m1 = fv.m1();
    std::vector<double> mixed(fv.k(), 0.0);
    double mixed_new = 0.0;
    double z = 0.0;
    for (int mask = 0; mask < (1 << m1); ++mask) {
      LatentSingletonState J;
      for (int i = 0; i < m1; ++i) J.J.push_back((mask >> i) & 1);
      const int mb = J.mbar();
      const double w = std::pow(beta, fv.n() - mb) * std::pow(1 - beta, mb) *
                       std::exp(p.family.log_v(fv.n() - mb, fv.k() - mb));
      const auto c = predictive_conditional(fv, J, p);
      z += w;
      mixed_new += w * (c.contaminant_new + c.base_new);
      for (int i = 0; i < fv.k(); ++i) mixed[i] += w * c.existing[i];
    }
    const auto m = predictive_marginal(fv, p);
    CHECK(std::abs(m.new_value - mixed_new / z) < 1e-12);
    for (int i = 0; i < fv.k(); ++i) CHECK(std::abs(m.existing[i] - mixed[i] / z) < 1e-12);
  }
}

TEST_CASE("probability of new value") {
  CHECK(std::abs(probability_of_new(50, 30, 12, py(0.3, 4.0, 1.0)) - (4.0 + 30 * 0.3) / 54.0) < 1e-14);
  const std::vector<double> dp1 = {0.21911337052472238, 0.22137977374201984, 0.22416364250511453, 0.2276235595636604,
                                   0.2322262363938753};
  const std::vector<double> dp10 = {0.3475457413495438, 0.3552846324851523, 0.36345308795186126, 0.37205272667116984,
                                    0.38108168472824305};
  for (int i = 0; i < 5; ++i) {
    const int m1 = 10 + 5 * i;
    CHECK(std::abs(probability_of_new(50, 30, m1, py(0.0, 1.0, 0.8)) - dp1[i]) < 1e-12);
    CHECK(std::abs(probability_of_new(50, 30, m1, py(0.0, 10.0, 0.8)) - dp10[i]) < 1e-12);
  }
  for (double beta : {0.5, 0.8, 0.95}) {
    double prev_dp = 0.0;
    double prev_stable = 2.0;
    for (int m1 = 1; m1 < 30; ++m1) {
      const double dp = probability_of_new(50, 30, m1, py(0.0, 2.0, beta));
      const double st = probability_of_new(50, 30, m1, py(0.5, 0.0, beta));
      CHECK(dp >= prev_dp);
      CHECK_MESSAGE(st <= prev_stable, "m1=" << m1 << " beta=" << beta);
      prev_dp = dp;
      prev_stable = st;
    }
  }
  CHECK_THROWS_AS(probability_of_new(5, 6, 2, py(0.5, 1.0, 0.9)), std::invalid_argument);
  CHECK_THROWS_AS(probability_of_new(5, 4, 5, py(0.5, 1.0, 0.9)), std::invalid_argument);
}

TEST_CASE("sample_sequence") {
  Rng rng(77);
  const double sigma = 0.4;
  const double theta = 3.0;
  const int n = 200;
  std::vector<double> ks;
  for (int rep = 0; rep < 4000; ++rep) ks.push_back(sample_sequence(py(sigma, theta, 1.0), n, rng).frequencies().k());
  const double analytic = theta / sigma * std::expm1(log_pochhammer(theta + sigma, n) - log_pochhammer(theta, n));
  CHECK(std::abs(testutil::mean(ks) - analytic) < 3.5 * testutil::std_error(ks));
  const auto tiny = sample_sequence(py(sigma, theta, 1e-9), 500, rng);
  CHECK(tiny.frequencies().k() == 500);
  const auto mixed = sample_sequence(py(sigma, theta, 0.7), 3000, rng);
  std::map<int, int> count;
  for (int l : mixed.labels) ++count[l];
  for (std::size_t i = 0; i < mixed.size(); ++i)
    if (mixed.contaminant[i]) CHECK(count[mixed.labels[i]] == 1);
  CHECK_THROWS_AS(sample_sequence(py(sigma, theta, 0.7), 0, rng), std::invalid_argument);
}

TEST_CASE("contaminated K_n grows linearly at rate 1 - beta") {
  Rng rng(5);
  const int n = 100000;
  const auto p = py(0.5, 10.0, 0.9);
  std::vector<double> ratio;
  for (int rep = 0; rep < 40; ++rep) ratio.push_back(sample_sequence(p, n, rng).frequencies().k() / double(n));
  const double analytic = expected_kn(p, n) / n;
  CHECK(std::abs(testutil::mean(ratio) - analytic) < 3.5 * testutil::std_error(ratio) + 1e-4);
  CHECK(std::abs(testutil::mean(ratio) - 0.1) < 0.02 + std::abs(analytic - 0.1));
}

TEST_CASE("urn sampler") {
  Rng rng(31);
  const auto near_py = urn_sample_sequence(1e-9, 2.0, 0.3, 2000, rng);
  CHECK(near_py.contaminant_count() == 0);
  const auto all_strip = urn_sample_sequence(1.0, 1e-9, 0.3, 2000, rng);
  CHECK(all_strip.contaminant_count() == 2000);
  CHECK(all_strip.frequencies().k() == 2000);
  const double alpha = 2.0;
  const double theta = 3.0;
  std::vector<double> frac;
  for (int rep = 0; rep < 400; ++rep)
    frac.push_back(urn_sample_sequence(alpha, theta, 0.4, 10000, rng).contaminant_count() / 10000.0);
  CHECK(std::abs(testutil::mean(frac) - alpha / (alpha + theta)) < 3.5 * testutil::std_error(frac));
  std::map<int, int> count;
  const auto seq = urn_sample_sequence(alpha, theta, 0.4, 5000, rng);
  for (int l : seq.labels) ++count[l];
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (seq.contaminant[i]) CHECK(count[seq.labels[i]] == 1);
}

TEST_CASE("EPPF ratios") {
  const auto p = py(0.3, 2.0, 0.8);
  const FrequencyVector a({2, 2, 1, 1});
  const FrequencyVector b({3, 1, 1, 1});
  const auto same = eppf_ratio(a, a, p);
  CHECK(same.contaminated == 1.0);
  CHECK(same.gibbs == 1.0);
  const auto perm = eppf_ratio(FrequencyVector({1, 3, 2}), FrequencyVector({2, 1, 3}), p);
  CHECK(perm.contaminated == 1.0);
  const auto r = eppf_ratio(b, a, p);
  CHECK(r.contaminated >= r.gibbs);
  const auto more = eppf_ratio(FrequencyVector({4, 1, 1}), FrequencyVector({3, 2, 1}), p);
  CHECK(more.contaminated >= more.gibbs);
  const auto fewer = eppf_ratio(FrequencyVector({3, 2, 1}), FrequencyVector({4, 1, 1}), p);
  CHECK(fewer.contaminated <= fewer.gibbs);
  const auto eq2 = eppf_ratio(FrequencyVector({4, 2, 1}), FrequencyVector({3, 3, 1}), p);
  CHECK(std::abs(eq2.contaminated - eq2.gibbs) < 1e-12);
  CHECK_THROWS_AS(eppf_ratio(a, FrequencyVector({5, 1}), p), std::invalid_argument);
}

TEST_CASE("prior covariance") {
  const auto p = py(0.3, 4.0, 0.8);
  const auto dis = prior_covariance(0.2, 0.3, 0.0, p);
  CHECK(std::abs(dis.covariance + 0.64 * 0.7 * 0.06 / 5.0) < 1e-15);
  const auto same = prior_covariance(0.2, 0.2, 0.2, p);
  CHECK(std::abs(same.covariance - 0.64 * 0.7 * 0.16 / 5.0) < 1e-15);
  const auto pure = prior_covariance(0.2, 0.3, 0.1, py(0.3, 4.0, 1.0));
  CHECK(std::abs(pure.covariance - 0.7 * (0.1 - 0.06) / 5.0) < 1e-15);
  CHECK(dis.mean_a == 0.2);
  CHECK_THROWS_AS(prior_covariance(0.2, 0.3, 0.25, p), std::invalid_argument);
  CHECK_THROWS_AS(prior_covariance(0.7, 0.6, 0.1, p), std::invalid_argument);
}
