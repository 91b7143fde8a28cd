#pragma once

#include <array>
#include <cmath>

#include "wmlab/random.hpp"
#include "wmlab/wavemaps/sphere.hpp"

namespace wmlab {

/// Pointwise three-vector field from fn(x).
template <class Fn>
SpatialField vector_field(const FrequencyGrid& grid, Fn&& fn) {
  SpatialField out(grid, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::array<double, 3> v = fn(grid.position(i));
    for (std::size_t c = 0; c < 3; ++c) out.at(c, i) = v[c];
  }
  return out;
}

/// Travelling equator map (cos(k x_1 - w t), sin(k x_1 - w t), 0) at time t; k counts periods across the box.
inline CauchyData equator_data(const FrequencyGrid& grid, double k, double w, double t = 0.0) {
  const double wavenumber = k * grid.dual_step();
  auto f = vector_field(grid, [&](const Frequency& x) {
    const double phase = wavenumber * x[0] - w * t;
    return std::array<double, 3>{std::cos(phase), std::sin(phase), 0.0};
  });
  auto g = vector_field(grid, [&](const Frequency& x) {
    const double phase = wavenumber * x[0] - w * t;
    return std::array<double, 3>{w * std::sin(phase), -w * std::cos(phase), 0.0};
  });
  return {std::move(f), std::move(g)};
}

inline CauchyData constant_data(const FrequencyGrid& grid) {
  return {vector_field(grid, [](const Frequency&) { return std::array<double, 3>{0.0, 0.0, 1.0}; }), SpatialField(grid, 3)};
}

/// North pole plus a band-limited perturbation of rms size `amplitude`, projected onto the sphere.
inline CauchyData small_sphere_data(const FrequencyGrid& grid, RandomStream& rng, double amplitude, long band) {
  auto f = random_band_limited(grid, 3, band, rng, true, true);
  auto g = random_band_limited(grid, 3, band, rng, true, true);
  const double points = static_cast<double>(grid.size());
  f *= Complex{amplitude / std::sqrt(f.squared_sum() / points), 0.0};
  g *= Complex{amplitude / std::sqrt(g.squared_sum() / points), 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) f.at(2, i) += 1.0;
  return sphere_constrain(f, g);
}

}  // namespace wmlab
