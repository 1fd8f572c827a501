#include "cgp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace cgp {

namespace {

// Labels with every zero replaced by a fresh negative label.
std::vector<int> expand_contaminants(const Partition& p) {
  std::vector<int> out(p.labels);
  int fresh = -1;
  for (auto& l : out)
    if (l == 0) l = fresh--;
  return out;
}

std::vector<int> dense_labels(const std::vector<int>& labels, int& k) {
  std::unordered_map<int, int> id;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(id.try_emplace(l, static_cast<int>(id.size())).first->second);
  k = static_cast<int>(id.size());
  return out;
}

}  // namespace

Partition canonicalize(const Partition& p) {
  std::unordered_map<int, int> id;
  Partition out;
  out.labels.reserve(p.size());
  for (int l : p.labels) {
    if (l == 0) {
      out.labels.push_back(0);
      continue;
    }
    out.labels.push_back(id.try_emplace(l, static_cast<int>(id.size()) + 1).first->second);
  }
  return out;
}

int FrequencySpectrum::n() const {
  int s = 0;
  for (std::size_t r = 1; r < counts.size(); ++r) s += static_cast<int>(r) * counts[r];
  return s;
}

int FrequencySpectrum::k() const {
  int s = 0;
  for (std::size_t r = 1; r < counts.size(); ++r) s += counts[r];
  return s;
}

std::vector<int> block_sizes(const Partition& p) {
  int k = 0;
  const auto dense = dense_labels(expand_contaminants(p), k);
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int l : dense) ++sizes[l];
  return sizes;
}

FrequencySpectrum frequency_spectrum(const Partition& p) {
  FrequencySpectrum s;
  s.counts.assign(p.size() + 1, 0);
  for (int b : block_sizes(p)) ++s.counts[b];
  return s;
}

int count_singletons(const Partition& p) {
  const auto sizes = block_sizes(p);
  return static_cast<int>(std::count(sizes.begin(), sizes.end(), 1));
}

double vi_distance(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vi_distance: length mismatch");
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  int ka = 0;
  int kb = 0;
  auto la = dense_labels(expand_contaminants(a), ka);
  auto lb = dense_labels(expand_contaminants(b), kb);
  if (lb < la) {
    std::swap(la, lb);
    std::swap(ka, kb);
  }
  std::vector<int> ca(ka, 0);
  std::vector<int> cb(kb, 0);
  std::map<std::pair<int, int>, int> joint;
  for (std::size_t i = 0; i < n; ++i) {
    ++ca[la[i]];
    ++cb[lb[i]];
    ++joint[{la[i], lb[i]}];
  }
  const double dn = static_cast<double>(n);
  // VI = sum_ij p_ij (2 log p_ij - log p_i - log p_j) with the sign flipped
  double vi = 0.0;
  for (const auto& [key, c] : joint) {
    const double pij = c / dn;
    vi += pij * (std::log(ca[key.first] / dn) + std::log(cb[key.second] / dn) - 2.0 * std::log(pij));
  }
  return std::max(vi, 0.0);
}

PointEstimate vi_point_estimate(std::span<const Partition> samples) {
  if (samples.empty()) throw std::invalid_argument("vi_point_estimate: no samples");
  // distinct canonical partitions with multiplicities, in order of first appearance
  std::vector<Partition> uniq;
  std::vector<std::size_t> first;
  std::vector<double> weight;
  std::map<std::vector<int>, std::size_t> seen;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    auto c = canonicalize(samples[s]);
    auto [it, fresh] = seen.try_emplace(c.labels, uniq.size());
    if (fresh) {
      uniq.push_back(std::move(c));
      first.push_back(s);
      weight.push_back(0.0);
    }
    weight[it->second] += 1.0;
  }
  const std::size_t u = uniq.size();
  std::vector<double> loss(u, 0.0);
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = i + 1; j < u; ++j) {
      const double d = vi_distance(uniq[i], uniq[j]);
      loss[i] += weight[j] * d;
      loss[j] += weight[i] * d;
    }
  std::size_t best = 0;
  for (std::size_t i = 1; i < u; ++i)
    if (loss[i] < loss[best]) best = i;
  return {uniq[best], loss[best] / static_cast<double>(samples.size()), first[best]};
}

void for_each_set_partition(int n, const std::function<void(const std::vector<int>&)>& visit) {
  if (n < 1 || n > 10) throw std::invalid_argument("set partition enumeration supports 1 <= n <= 10");
  std::vector<int> a(n, 0);
  std::vector<int> mx(n, 0);  // mx[i] = max(a[0..i-1])
  for (;;) {
    visit(a);
    int i = n - 1;
    while (i > 0 && a[i] > mx[i]) --i;
    if (i == 0) return;
    ++a[i];
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = std::max(mx[j - 1], a[j - 1]);
    }
  }
}

}  // namespace cgp
