#pragma once

#include <algorithm>
#include <vector>

#include "wmlab/random.hpp"
#include "wmlab/variation/step.hpp"

namespace wmlab {

/// Partition starting at sample 0 with 1..max_pieces intervals at distinct random samples.
inline Partition random_partition(const TimeGrid& time, std::size_t max_pieces, RandomStream& rng) {
  const std::size_t pieces = 1 + rng.index(std::min(max_pieces, time.samples()));
  std::vector<std::size_t> points{0};
  while (points.size() < pieces) {
    const std::size_t p = 1 + rng.index(time.samples() - 1);
    if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(p);
  }
  std::sort(points.begin(), points.end());
  return Partition(time, points);
}

/// Partition whose first point is random too, so the step function may vanish initially.
inline Partition random_late_partition(const TimeGrid& time, std::size_t max_pieces, RandomStream& rng) {
  const std::size_t pieces = 1 + rng.index(std::min(max_pieces, time.samples()));
  std::vector<std::size_t> points;
  while (points.size() < pieces) {
    const std::size_t p = rng.index(time.samples());
    if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(p);
  }
  std::sort(points.begin(), points.end());
  return Partition(time, points);
}

inline StepFunction random_step(const TimeGrid& time, const FrequencyGrid& grid, long band, std::size_t max_pieces,
                                RandomStream& rng) {
  auto partition = random_late_partition(time, max_pieces, rng);
  std::vector<SpatialField> values;
  for (std::size_t k = 0; k < partition.size(); ++k) values.push_back(random_band_limited(grid, 1, band, rng));
  return StepFunction(std::move(partition), std::move(values));
}

inline UpAtom random_atom(const TimeGrid& time, const FrequencyGrid& grid, long band, std::size_t max_pieces,
                          double p, RandomStream& rng) {
  auto partition = random_late_partition(time, max_pieces, rng);
  std::vector<SpatialField> values;
  for (std::size_t k = 0; k < partition.size(); ++k) values.push_back(random_band_limited(grid, 1, band, rng));
  return make_atom(partition, std::move(values), p);
}

/// Independent band-limited snapshots.
inline SpaceTimeField random_space_time(const TimeGrid& time, const FrequencyGrid& grid, long band,
                                        RandomStream& rng, bool real_valued = false) {
  SpaceTimeField u(time, grid, 1);
  for (std::size_t j = 0; j < time.samples(); ++j) u[j] = random_band_limited(grid, 1, band, rng, false, real_valued);
  return u;
}

}  // namespace wmlab
