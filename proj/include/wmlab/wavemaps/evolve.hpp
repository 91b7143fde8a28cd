#pragma once

#include <cmath>
#include <ostream>
#include <vector>

#include "wmlab/multipliers/spatial.hpp"
#include "wmlab/wavemaps/sphere.hpp"

namespace wmlab {

/// u_+ = u + i|grad|^{-1} d_t u, u_- = u - i|grad|^{-1} d_t u.
struct HalfWavePair {
  SpatialField plus;
  SpatialField minus;
};

inline HalfWavePair half_wave_pair(const SpatialField& u, const SpatialField& ut) {
  const auto inverse_gradient = gradient_power(ut, -1.0) * Complex{0.0, 1.0};
  return {u + inverse_gradient, u - inverse_gradient};
}

/// u = (u_+ + u_-)/2, d_t u = |grad|(u_+ - u_-)/(2i).
inline WaveState reconstruct(const HalfWavePair& pair) {
  return {(pair.plus + pair.minus) * Complex{0.5, 0.0},
          gradient_power(pair.minus - pair.plus, 1.0) * Complex{0.0, 0.5}};
}

struct StepDiagnostics {
  double time = 0.0;
  double energy = 0.0;
  double constraint = 0.0;      // sup_x ||phi| - 1|
  double step_residual = 0.0;   // |RK4 - RK2| on the last step, coefficient l^2
};

struct Trajectory {
  SpaceTimeField phi;
  SpaceTimeField phi_t;
  std::vector<StepDiagnostics> diagnostics;

  const TimeGrid& time() const { return phi.time(); }
};

inline void write_diagnostics_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,energy,constraint_sup,step_residual\n";
  for (const auto& d : trajectory.diagnostics)
    out << format_real(d.time) << ',' << format_real(d.energy) << ',' << format_real(d.constraint) << ','
        << format_real(d.step_residual) << '\n';
}

struct DivergenceError : Error {
  DivergenceError(const std::string& what, double time, WaveState last) : Error(what), time(time), last(std::move(last)) {}
  double time;
  WaveState last;
};

enum class Scheme { LawsonRK2, LawsonRK4 };

struct EvolveOptions {
  Scheme scheme = Scheme::LawsonRK4;
  std::size_t record_stride = 1;
};

namespace detail {

/// Half-wave variables per mode; the zero mode stores (phi_0, d_t phi_0) in (plus, minus).
struct WaveSpectrum {
  SpectralField plus;
  SpectralField minus;

  WaveSpectrum& add_scaled(double s, const WaveSpectrum& other) {
    plus.add_scaled(Complex{s, 0.0}, other.plus);
    minus.add_scaled(Complex{s, 0.0}, other.minus);
    return *this;
  }
  double squared_sum() const { return plus.squared_sum() + minus.squared_sum(); }
};

inline WaveSpectrum to_half_waves(const SpectralField& u, const SpectralField& ut) {
  WaveSpectrum out{u, u};
  const auto& grid = u.grid();
  for (std::size_t c = 0; c < u.components(); ++c)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double k = grid.frequency_norm(i);
      if (k == 0.0) {
        out.minus.at(c, i) = ut.at(c, i);
        continue;
      }
      const Complex rotated = Complex{0.0, 1.0 / k} * ut.at(c, i);
      out.plus.at(c, i) = u.at(c, i) + rotated;
      out.minus.at(c, i) = u.at(c, i) - rotated;
    }
  return out;
}

inline SpectralWaveState from_half_waves(const WaveSpectrum& a) {
  SpectralWaveState out{a.plus.zeros_like(), a.plus.zeros_like()};
  const auto& grid = a.plus.grid();
  for (std::size_t c = 0; c < a.plus.components(); ++c)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double k = grid.frequency_norm(i);
      if (k == 0.0) {
        out.value.at(c, i) = a.plus.at(c, i);
        out.velocity.at(c, i) = a.minus.at(c, i);
        continue;
      }
      out.value.at(c, i) = 0.5 * (a.plus.at(c, i) + a.minus.at(c, i));
      out.velocity.at(c, i) = Complex{0.0, -0.5 * k} * (a.plus.at(c, i) - a.minus.at(c, i));
    }
  return out;
}

/// Exact linear flow over h: e^{-ih|k|} on plus, e^{+ih|k|} on minus, shear on the zero mode.
class LinearFlow {
 public:
  LinearFlow(const FrequencyGrid& grid, double h) : h_(h), phases_(grid.size()) {
    for (std::size_t i = 0; i < grid.size(); ++i) phases_[i] = std::polar(1.0, -h * grid.frequency_norm(i));
  }

  WaveSpectrum operator()(WaveSpectrum a) const {
    const auto& grid = a.plus.grid();
    for (std::size_t c = 0; c < a.plus.components(); ++c)
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.frequency_norm(i) == 0.0) {
          a.plus.at(c, i) += h_ * a.minus.at(c, i);
          continue;
        }
        a.plus.at(c, i) *= phases_[i];
        a.minus.at(c, i) *= std::conj(phases_[i]);
      }
    return a;
  }

 private:
  double h_;
  std::vector<Complex> phases_;
};

/// (iF/|k|, -iF/|k|) and (0, F_0) on the zero mode.
inline WaveSpectrum nonlinear_term(const WaveSpectrum& a) {
  const auto state = from_half_waves(a);
  const auto forcing = wave_maps_rhs_spectral(state.value, state.velocity);
  WaveSpectrum out{forcing.zeros_like(), forcing.zeros_like()};
  const auto& grid = forcing.grid();
  for (std::size_t c = 0; c < forcing.components(); ++c)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double k = grid.frequency_norm(i);
      if (k == 0.0) {
        out.minus.at(c, i) = forcing.at(c, i);
        continue;
      }
      const Complex kick = Complex{0.0, 1.0 / k} * forcing.at(c, i);
      out.plus.at(c, i) = kick;
      out.minus.at(c, i) = -kick;
    }
  return out;
}

}  // namespace detail

/// Integrates Box phi = phi(|grad phi|^2 - |d_t phi|^2) on [0, T] by a Lawson (integrating-factor) Runge-Kutta
/// method in the half-wave variables.
inline Trajectory evolve(const CauchyData& data, double final_time, double dt, const EvolveOptions& options = {}) {
  require_sphere_valued(data.f);
  data.f.require_same_shape(data.g);
  if (!(dt > 0.0) || !(final_time >= 0.0)) throw RangeError("time step and horizon must be positive");
  const double exact_steps = final_time / dt;
  const auto steps = static_cast<std::size_t>(std::llround(exact_steps));
  if (std::abs(exact_steps - static_cast<double>(steps)) > 1e-9 * std::max(1.0, exact_steps))
    throw RangeError("horizon is not a whole number of steps");
  const std::size_t stride = std::max<std::size_t>(1, options.record_stride);
  if (steps % stride != 0) throw RangeError("step count is not a multiple of the record stride");

  const auto& grid = data.f.grid();
  const TimeGrid record_time(0.0, dt * static_cast<double>(stride), steps / stride + 1);
  Trajectory trajectory{SpaceTimeField(record_time, grid, 3), SpaceTimeField(record_time, grid, 3), {}};

  const detail::LinearFlow full(grid, dt);
  const detail::LinearFlow half(grid, 0.5 * dt);
  auto a = detail::to_half_waves(forward(data.f), forward(data.g));

  auto record = [&](std::size_t index, double t, double residual) {
    const auto state = detail::from_half_waves(a);
    auto phi = inverse(state.value);
    auto phi_t = inverse(state.velocity);
    for (auto& v : phi.values()) v = v.real();
    for (auto& v : phi_t.values()) v = v.real();
    trajectory.diagnostics.push_back({t, energy(state.value, state.velocity), constraint_defect(phi), residual});
    trajectory.phi[index] = std::move(phi);
    trajectory.phi_t[index] = std::move(phi_t);
  };
  record(0, 0.0, 0.0);

  for (std::size_t n = 0; n < steps; ++n) {
    const auto k1 = detail::nonlinear_term(a);
    auto stage = a;
    stage.add_scaled(0.5 * dt, k1);
    const auto k2 = detail::nonlinear_term(half(stage));
    auto low = full(a);
    auto midpoint = half(k2);
    low.add_scaled(dt, midpoint);
    detail::WaveSpectrum next = low;
    if (options.scheme == Scheme::LawsonRK4) {
      stage = half(a);
      stage.add_scaled(0.5 * dt, k2);
      const auto k3 = detail::nonlinear_term(stage);
      stage = full(a);
      stage.add_scaled(dt, half(k3));
      const auto k4 = detail::nonlinear_term(stage);
      next = full(a);
      next.add_scaled(dt / 6.0, full(k1));
      next.add_scaled(dt / 3.0, half(k2));
      next.add_scaled(dt / 3.0, half(k3));
      next.add_scaled(dt / 6.0, k4);
    }
    double residual = 0.0;
    if (options.scheme == Scheme::LawsonRK4) {
      auto difference = next;
      difference.add_scaled(-1.0, low);
      residual = std::sqrt(difference.squared_sum());
    }
    const double size = next.squared_sum();
    if (!std::isfinite(size)) {
      const auto state = detail::from_half_waves(a);
      throw DivergenceError("evolution diverged", static_cast<double>(n) * dt,
                            WaveState{inverse(state.value), inverse(state.velocity)});
    }
    a = std::move(next);
    if ((n + 1) % stride == 0) record((n + 1) / stride, static_cast<double>(n + 1) * dt, residual);
  }
  return trajectory;
}

}  // namespace wmlab
