#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "cgp/diagnostics.hpp"
#include "cgp/random.hpp"

using namespace cgp;

namespace {

std::vector<double> iid(int n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

std::vector<double> ar1(int n, double phi, Rng& rng) {
  std::vector<double> x(n);
  double v = rng.normal() / std::sqrt(1 - phi * phi);
  for (double& e : x) {
    e = v;
    v = phi * v + rng.normal();
  }
  return x;
}

}  // namespace

TEST_CASE("ESS") {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = iid(10000, rng);
    const double e = ess(x);
    CHECK(e >= 9000);
    CHECK(e <= 11000);
  }
  for (double phi : {0.5, 0.9}) {
    const int n = 100000;
    const auto x = ar1(n, phi, rng);
    const double target = n * (1 - phi) / (1 + phi);
    CHECK(std::abs(ess(x) - target) < 0.2 * target);
  }
  std::vector<double> alt(1000);
  for (int i = 0; i < 1000; ++i) alt[i] = i % 2 ? 1.0 : -1.0;
  CHECK(ess(alt) > 1000);
  CHECK(summarize(alt).ess.value() == 1000);
  CHECK_THROWS_AS(ess(std::vector<double>(50, 2.0)), std::domain_error);
  CHECK_THROWS_AS(ess(std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("Geweke") {
  Rng rng(2);
  int inside = 0;
  const int reps = 2000;
  for (int rep = 0; rep < reps; ++rep) inside += std::abs(geweke_z(iid(1000, rng))) < 3;
  CHECK(inside >= 0.985 * reps);
  auto shifted = iid(2000, rng);
  for (std::size_t i = 1000; i < shifted.size(); ++i) shifted[i] += 5;
  CHECK(std::abs(geweke_z(shifted)) > 5);
  CHECK_THROWS(geweke_z(std::vector<double>(1000, 1.0)));
  CHECK_THROWS_AS(geweke_z(iid(400, rng)), std::invalid_argument);
  CHECK_THROWS_AS(geweke_z(iid(1000, rng), 0.6, 0.5), std::invalid_argument);
}

TEST_CASE("spectral density at zero") {
  Rng rng(4);
  const double phi = 0.6;
  std::vector<double> s;
  for (int rep = 0; rep < 50; ++rep) s.push_back(spectral_density_zero(ar1(20000, phi, rng)));
  double m = 0;
  for (double v : s) m += v / s.size();
  const double target = 1 / ((1 - phi) * (1 - phi));
  CHECK(std::abs(m - target) < 0.1 * target);
}

TEST_CASE("affine invariance") {
  Rng rng(5);
  const auto x = ar1(5000, 0.7, rng);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = -3.5 * x[i] + 12.0;
  CHECK(std::abs(ess(x) - ess(y)) < 1e-6 * ess(x));
  CHECK(std::abs(std::abs(geweke_z(x)) - std::abs(geweke_z(y))) < 1e-8);
}

TEST_CASE("summary") {
  Rng rng(6);
  const auto x = iid(2000, rng);
  const auto s = summarize(x);
  CHECK(!s.degenerate);
  CHECK(s.ess.has_value());
  CHECK(*s.ess <= 2000);
  CHECK(*s.ess > 0);
  CHECK(s.geweke_z.has_value());
  CHECK(s.sd > 0);
  const auto c = summarize(std::vector<double>(600, 0.25));
  CHECK(c.degenerate);
  CHECK(c.mean == 0.25);
  CHECK(c.sd == 0);
  CHECK(!c.ess.has_value());
  CHECK(!c.geweke_z.has_value());
  const auto shortc = summarize(iid(100, rng));
  CHECK(!shortc.geweke_z.has_value());
}
