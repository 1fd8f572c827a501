#include "cgp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cgp {

namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

double ess(std::span<const double> chain) {
  const std::size_t n = chain.size();
  if (n < 10) throw std::invalid_argument("ess: chain shorter than 10");
  if (is_constant(chain)) throw std::domain_error("ess: constant chain");
  const double mu = mean_of(chain);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = chain[i] - mu;
  auto acov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += c[i] * c[i + lag];
    return s / static_cast<double>(n);
  };
  const double c0 = acov(0);
  double sum_pairs = 0.0;
  double prev = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double rho_a = m == 0 ? 1.0 : acov(2 * m) / c0;
    double gamma = rho_a + acov(2 * m + 1) / c0;
    if (m > 0 && gamma <= 0) break;
    // initial monotone sequence
    if (m > 0) gamma = std::min(gamma, prev);
    prev = gamma;
    sum_pairs += gamma;
  }
  const double dn = static_cast<double>(n);
  const double tau = std::max(-1.0 + 2.0 * sum_pairs, 1.0 / std::log10(dn));
  return dn / tau;
}

double spectral_density_zero(std::span<const double> x) {
  const std::size_t n = x.size();
  const double mu = mean_of(x);
  const std::size_t half = n / 2;
  const std::size_t m = std::min<std::size_t>(std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(0.04 * n))),
                                              std::max<std::size_t>(half, 1));
  double acc = 0.0;
  double wsum = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    double re = 0.0;
    double im = 0.0;
    const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) {
      re += (x[t] - mu) * std::cos(w * t);
      im -= (x[t] - mu) * std::sin(w * t);
    }
    const double periodogram = (re * re + im * im) / static_cast<double>(n);
    // modified Daniell: half weight on the outermost ordinate
    const double k = j == m ? 0.5 : 1.0;
    acc += k * periodogram;
    wsum += k;
  }
  return acc / wsum;
}

double geweke_z(std::span<const double> chain, double frac_a, double frac_b) {
  if (!(frac_a > 0 && frac_b > 0 && frac_a + frac_b <= 1)) throw std::invalid_argument("geweke: bad window fractions");
  const std::size_t n = chain.size();
  const auto na = static_cast<std::size_t>(std::floor(frac_a * n));
  const auto nb = static_cast<std::size_t>(std::floor(frac_b * n));
  if (na < 50 || nb < 50) throw std::invalid_argument("geweke: windows need at least 50 points");
  if (is_constant(chain)) throw std::domain_error("geweke: constant chain");
  const auto a = chain.first(na);
  const auto b = chain.last(nb);
  const double va = spectral_density_zero(a) / static_cast<double>(na);
  const double vb = spectral_density_zero(b) / static_cast<double>(nb);
  if (!(va + vb > 0)) throw std::domain_error("geweke: zero variance in windows");
  return (mean_of(a) - mean_of(b)) / std::sqrt(va + vb);
}

ChainSummary summarize(std::span<const double> chain) {
  if (chain.empty()) throw std::invalid_argument("summarize: empty chain");
  ChainSummary s;
  s.mean = mean_of(chain);
  if (chain.size() > 1) {
    double ss = 0.0;
    for (double v : chain) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(chain.size() - 1));
  }
  s.degenerate = is_constant(chain);
  if (s.degenerate || chain.size() < 10) return s;
  s.ess = std::min(ess(chain), static_cast<double>(chain.size()));
  if (chain.size() >= 500) {
    try {
      s.geweke_z = geweke_z(chain);
    } catch (const std::domain_error&) {
      // a window can be constant even when the whole chain is not
    }
  }
  return s;
}

}  // namespace cgp
