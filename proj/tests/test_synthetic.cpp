#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "cgp/synthetic.hpp"
#include "stat_helpers.hpp"

using namespace cgp;

TEST_CASE("chi-square quantiles") {
  CHECK(std::abs(chi2_quantile(2, 0.9) - 4.605170185988092) < 1e-10);
  CHECK(std::abs(chi2_quantile(2, 0.9) + 2 * std::log(0.1)) < 1e-10);
  CHECK(std::abs(chi2_quantile(1, 0.5) - 0.454936423119572) < 1e-10);
  CHECK(std::abs(chi2_quantile(4, 0.9) - 7.779440339734858) < 1e-10);
  CHECK(std::abs(chi2_quantile(3, 0.9) - 6.251388631170325) < 1e-10);
  CHECK_THROWS_AS(chi2_quantile(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chi2_quantile(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(chi2_quantile(0, 0.5), std::invalid_argument);
}

TEST_CASE("discrete scenario") {
  const auto pure = gen_discrete_scenario(25, 0.2, 1.0, 10000, 3);
  CHECK(pure.contaminant_count() == 0);
  const auto mixed = gen_discrete_scenario(25, 0.2, 0.9, 10000, 3);
  CHECK(mixed.contaminant_count() >= 900);
  CHECK(mixed.contaminant_count() <= 1100);
  const auto again = gen_discrete_scenario(25, 0.2, 0.9, 10000, 3);
  CHECK(again.labels == mixed.labels);
  CHECK(again.contaminant == mixed.contaminant);
  CHECK(gen_discrete_scenario(25, 0.2, 0.9, 10000, 4).labels != mixed.labels);
}

TEST_CASE("truncated outlier sampler") {
  for (int d : {2, 4}) {
    Rng rng(10 + d);
    const double radius = outlier_radius(d);
    CHECK(std::abs(radius - 3 * std::sqrt(chi2_quantile(d, 0.9))) < 1e-15);
    std::size_t proposals = 0;
    std::size_t accepted = 0;
    Vector y;
    while (proposals < 100000) {
      proposals += sample_truncated_outlier(d, radius, rng, y);
      ++accepted;
      CHECK(y.norm() > radius);
    }
    const double rate = static_cast<double>(accepted) / proposals;
    CHECK(rate >= 0.08);
    CHECK(rate <= 0.12);
  }
}

TEST_CASE("mixture with outliers") {
  SyntheticMixtureConfig cfg;
  cfg.d = 3;
  cfg.m = 400;
  cfg.s = 40;
  cfg.c = 2.5;
  cfg.seed = 17;
  const auto g = gen_mixture_with_outliers(cfg);
  CHECK(g.data.rows() == 440);
  CHECK(g.data.cols() == 3);
  int flagged = 0;
  for (std::size_t i = 0; i < g.outlier.size(); ++i) {
    flagged += g.outlier[i];
    CHECK(static_cast<bool>(g.outlier[i]) == (i >= 400));
    if (g.outlier[i]) CHECK((g.data.row(i) / cfg.c).norm() > outlier_radius(3));
  }
  CHECK(flagged == 40);
  CHECK(g.proposals >= 40);
  const auto again = gen_mixture_with_outliers(cfg);
  CHECK(again.data == g.data);

  cfg.s = 0;
  cfg.m = 4000;
  const auto clean = gen_mixture_with_outliers(cfg);
  for (int j = 0; j < 3; ++j) {
    std::vector<double> col(clean.data.rows());
    for (Eigen::Index i = 0; i < clean.data.rows(); ++i) col[i] = clean.data(i, j);
    CHECK(std::abs(testutil::mean(col)) < 3 * testutil::std_error(col));
  }
  int upper = 0;
  for (Eigen::Index i = 0; i < clean.data.rows(); ++i) upper += clean.data.row(i).sum() > 0;
  CHECK(std::abs(upper - 2000) < 3 * std::sqrt(1000.0));

  SyntheticMixtureConfig bad;
  bad.c = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.m = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.s = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
