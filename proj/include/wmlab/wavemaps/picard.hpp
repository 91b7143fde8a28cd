#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wmlab/multipliers/profiles.hpp"
#include "wmlab/wavemaps/duhamel.hpp"
#include "wmlab/wavemaps/evolve.hpp"

namespace wmlab {

/// chi(t|grad|/scale) V(t)(f,g) and its time derivative on every sample of `time`.
inline Trajectory truncated_free_wave(const CauchyData& data, const TimeGrid& time, double cutoff_scale = 1.0) {
  const auto& grid = data.f.grid();
  Trajectory out{SpaceTimeField(time, grid, data.f.components()), SpaceTimeField(time, grid, data.f.components()), {}};
  const auto fh = forward(data.f);
  const auto gh = forward(data.g);
  for (std::size_t j = 0; j < time.samples(); ++j) {
    const double t = time.time(j);
    const auto state = homogeneous_wave(fh, gh, t);
    SpectralField value = state.value;
    SpectralField velocity = state.velocity;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rate = grid.frequency_norm(i) / cutoff_scale;
      const double cut = profile::causal_cutoff(t * rate);
      const double slope = rate * profile::causal_cutoff_derivative(t * rate);
      for (std::size_t c = 0; c < value.components(); ++c) {
        value.at(c, i) = cut * state.value.at(c, i);
        velocity.at(c, i) = cut * state.velocity.at(c, i) + slope * state.value.at(c, i);
      }
    }
    out.phi[j] = inverse(value);
    out.phi_t[j] = inverse(velocity);
  }
  return out;
}

/// Cubic forcing phi(|grad phi|^2 - |d_t phi|^2) sampled for t >= 0 and zero before.
inline SpaceTimeField wave_maps_forcing(const Trajectory& u) {
  SpaceTimeField forcing = u.phi.zeros_like();
  for (std::size_t j = 0; j < u.phi.samples(); ++j)
    if (u.time().time(j) >= -1e-12 * u.time().step())
      forcing[j] = inverse(wave_maps_rhs_spectral(forward(u.phi[j]), forward(u.phi_t[j])));
  return forcing;
}

inline void fill_diagnostics(Trajectory& u) {
  u.diagnostics.clear();
  for (std::size_t j = 0; j < u.phi.samples(); ++j)
    u.diagnostics.push_back({u.time().time(j), energy(u.phi[j], u.phi_t[j]), constraint_defect(u.phi[j]), 0.0});
}

/// T[u] = chi(t|grad|) V(t)(f,g) + Box^{-1}(phi(|grad phi|^2 - |d_t phi|^2)).
inline Trajectory picard_map(const Trajectory& u, const CauchyData& data, double cutoff_scale = 1.0) {
  auto out = truncated_free_wave(data, u.time(), cutoff_scale);
  const auto correction = duhamel(wave_maps_forcing(u));
  out.phi += correction.value;
  out.phi_t += correction.velocity;
  fill_diagnostics(out);
  return out;
}

/// sup_t |a(t) - b(t)|_{L^2}
inline double sup_l2_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
  a.require_same_shape(b);
  double worst = 0.0;
  for (std::size_t j = 0; j < a.samples(); ++j) worst = std::max(worst, l2_distance(a[j], b[j]));
  return worst;
}

struct PicardRun {
  Trajectory solution;
  std::vector<double> differences;  // |T^{k+1} - T^k|_{L^inf L^2}
  std::vector<double> ratios;       // successive difference ratios above round-off
  double contraction() const { return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end()); }
};

/// Iterates from the truncated free wave until the update falls below `tolerance` or `max_iterations`.
inline PicardRun picard_iterate(const CauchyData& data, const TimeGrid& time, std::size_t max_iterations,
                                double tolerance = 0.0, double cutoff_scale = 1.0) {
  PicardRun run;
  run.solution = truncated_free_wave(data, time, cutoff_scale);
  fill_diagnostics(run.solution);
  for (std::size_t k = 0; k < max_iterations; ++k) {
    auto next = picard_map(run.solution, data, cutoff_scale);
    const double difference = sup_l2_distance(next.phi, run.solution.phi);
    const double noise = 1e-12 * sup_l2_distance(next.phi, next.phi.zeros_like());
    if (!run.differences.empty() && run.differences.back() > noise && difference > noise)
      run.ratios.push_back(difference / run.differences.back());
    run.differences.push_back(difference);
    run.solution = std::move(next);
    if (difference <= tolerance) break;
  }
  return run;
}

}  // namespace wmlab
