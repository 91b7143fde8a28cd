#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "wmlab/variation/step.hpp"

namespace wmlab {

/// Unanchored: sup over partitions of the samples. Anchored: a zero value is prepended, so the
/// series is read as a function vanishing before the window.
enum class Anchor { Unanchored, Anchored };

struct VariationResult {
  double value = 0.0;       // |v|_{V^p}
  double power_sum = 0.0;   // |v|_{V^p}^p
  std::vector<std::size_t> chain;  // maximizing indices into the (possibly anchored) sequence
};

/// max over chains i_0 < ... < i_k of sum dist(i_{l}, i_{l+1})^p, by V(j) = max(0, max_{i<j} V(i) + dist(i,j)^p).
template <class Distance>
VariationResult variation_dp(std::size_t count, double p, Distance&& distance) {
  if (!(p >= 1.0)) throw RangeError("variation exponent must be at least 1");
  VariationResult result;
  if (count < 2) {
    if (count == 1) result.chain = {0};
    return result;
  }
  std::vector<double> best(count, 0.0);
  std::vector<std::size_t> parent(count, count);
  for (std::size_t j = 1; j < count; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const double candidate = best[i] + std::pow(distance(i, j), p);
      if (candidate > best[j]) {
        best[j] = candidate;
        parent[j] = i;
      }
    }
  std::size_t end = 0;
  for (std::size_t j = 1; j < count; ++j)
    if (best[j] > best[end]) end = j;
  result.power_sum = best[end];
  result.value = std::pow(best[end], 1.0 / p);
  for (std::size_t j = end; j != count; j = parent[j]) result.chain.push_back(j);
  std::reverse(result.chain.begin(), result.chain.end());
  return result;
}

template <class Value>
VariationResult variation_of_values(std::span<const Value> values, double p, Anchor anchor) {
  if (anchor == Anchor::Unanchored)
    return variation_dp(values.size(), p, [&](std::size_t i, std::size_t j) { return l2_distance(values[i], values[j]); });
  if (values.empty()) return {};
  return variation_dp(values.size() + 1, p, [&](std::size_t i, std::size_t j) {
    return i == 0 ? l2_norm(values[j - 1]) : l2_distance(values[i - 1], values[j - 1]);
  });
}

inline VariationResult p_variation_detail(const SpaceTimeField& series, double p, Anchor anchor = Anchor::Unanchored) {
  return variation_of_values(series.snapshots(), p, anchor);
}

inline double p_variation(const SpaceTimeField& series, double p, Anchor anchor = Anchor::Unanchored) {
  return p_variation_detail(series, p, anchor).value;
}

/// Scalar series.
inline double p_variation(std::span<const double> series, double p, Anchor anchor = Anchor::Unanchored) {
  auto sample = [&](std::size_t i) { return anchor == Anchor::Anchored ? (i == 0 ? 0.0 : series[i - 1]) : series[i]; };
  const std::size_t count = series.size() + (anchor == Anchor::Anchored && !series.empty() ? 1 : 0);
  return variation_dp(count, p, [&](std::size_t i, std::size_t j) { return std::abs(sample(j) - sample(i)); }).value;
}

inline double sup_norm(const SpaceTimeField& series) {
  double best = 0.0;
  for (const auto& snapshot : series.snapshots()) best = std::max(best, l2_norm(snapshot));
  return best;
}

/// |v|_{L^inf L^2} + |v|_{V^p}
inline double vp_norm(const SpaceTimeField& series, double p, Anchor anchor = Anchor::Unanchored) {
  return sup_norm(series) + p_variation(series, p, anchor);
}

/// Exact variation of a step function over all real partitions.
inline double p_variation(const StepFunction& step, double p) {
  return variation_of_values(std::span<const SpatialField>(step.values()), p, Anchor::Anchored).value;
}

}  // namespace wmlab
