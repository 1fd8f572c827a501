#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cgp {

// Labels per observation; 0 marks a contaminant singleton.
struct Partition {
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  friend bool operator==(const Partition&, const Partition&) = default;
};

// Positive labels renumbered 1, 2, ... by first appearance; zeros kept.
Partition canonicalize(const Partition& p);

// counts[r] = number of clusters of size r, r = 1..n (index 0 unused).
struct FrequencySpectrum {
  std::vector<int> counts;
  int n() const;
  int k() const;
};

FrequencySpectrum frequency_spectrum(const Partition& p);

// Cluster sizes, each label-0 entry counted as its own singleton.
std::vector<int> block_sizes(const Partition& p);

int count_singletons(const Partition& p);

// Variation of information in nats.
double vi_distance(const Partition& a, const Partition& b);

struct PointEstimate {
  Partition partition;
  double expected_vi = 0.0;
  std::size_t index = 0;  // first sample equal to the estimate
};

// Sampled partition minimizing the mean VI to all samples; ties go to the earliest sample.
PointEstimate vi_point_estimate(std::span<const Partition> samples);

// Visits every set partition of {0..n-1} as a restricted growth string (labels 0..k-1). n <= 10.
void for_each_set_partition(int n, const std::function<void(const std::vector<int>&)>& visit);

}  // namespace cgp
