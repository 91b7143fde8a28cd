#pragma once

#include <vector>

#include "wmlab/wavemaps/evolve.hpp"

namespace wmlab {

struct ScatteringState {
  std::vector<double> probe_times;
  SpatialField f_plus;    // e^{+it|grad|} u_+(t) at the last probe
  SpatialField f_minus;   // e^{-it|grad|} u_-(t) at the last probe
  SpatialField f_infinity;
  SpatialField g_infinity;
  std::vector<double> cauchy_profile;  // |profiles(t_{k+1}) - profiles(t_k)|_{L^2}
};

/// Profiles of the half-wave pieces at probe times; each probe snaps to the nearest recorded sample.
inline ScatteringState scattering_extract(const Trajectory& trajectory, const std::vector<double>& probe_times) {
  if (probe_times.size() < 3) throw ArityError("scattering needs at least three probe times");
  const auto& time = trajectory.time();
  ScatteringState state;
  HalfWavePair previous;
  for (std::size_t k = 0; k < probe_times.size(); ++k) {
    const double t = probe_times[k];
    if (k > 0 && !(t > probe_times[k - 1])) throw PreconditionError("probe times must increase");
    if (t < time.start() - 0.5 * time.step() || t > time.end() + 0.5 * time.step())
      throw RangeError("probe time outside the trajectory");
    const auto j = static_cast<std::size_t>(std::llround((t - time.start()) / time.step()));
    const double sample_time = time.time(j);
    auto pieces = half_wave_pair(trajectory.phi[j], trajectory.phi_t[j]);
    HalfWavePair profiles{half_wave(pieces.plus, sample_time, WaveSign::Minus),
                          half_wave(pieces.minus, sample_time, WaveSign::Plus)};
    if (k > 0)
      state.cauchy_profile.push_back(std::hypot(l2_distance(profiles.plus, previous.plus),
                                                l2_distance(profiles.minus, previous.minus)));
    state.probe_times.push_back(sample_time);
    previous = std::move(profiles);
  }
  state.f_plus = previous.plus;
  state.f_minus = previous.minus;
  state.f_infinity = (previous.plus + previous.minus) * Complex{0.5, 0.0};
  state.g_infinity = gradient_power(previous.minus - previous.plus, 1.0) * Complex{0.0, 0.5};
  return state;
}

}  // namespace wmlab
