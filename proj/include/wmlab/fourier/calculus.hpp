#pragma once

#include <cmath>
#include <functional>

#include "wmlab/fourier/fft.hpp"

namespace wmlab {

/// Multiplies every component's mode xi by symbol(xi, |xi|).
template <class Symbol>
void apply_symbol(SpectralField& spectrum, Symbol&& symbol) {
  const auto& grid = spectrum.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex factor = symbol(grid.frequency(i), grid.frequency_norm(i));
    for (std::size_t c = 0; c < spectrum.components(); ++c) spectrum.at(c, i) *= factor;
  }
}

template <class Symbol>
SpatialField apply_multiplier(const SpatialField& field, Symbol&& symbol) {
  auto spectrum = forward(field);
  apply_symbol(spectrum, std::forward<Symbol>(symbol));
  return inverse(spectrum);
}

/// |xi|^s with the zero mode annihilated for s != 0.
inline double gradient_power_symbol(double norm, double s) {
  if (s == 0.0) return 1.0;
  if (norm == 0.0) return 0.0;
  return std::pow(norm, s);
}

inline SpectralField gradient_power(SpectralField spectrum, double s) {
  apply_symbol(spectrum, [s](const Frequency&, double norm) { return Complex{gradient_power_symbol(norm, s), 0.0}; });
  return spectrum;
}

inline SpatialField gradient_power(const SpatialField& field, double s) {
  if (s == 0.0) return field;
  return inverse(gradient_power(forward(field), s));
}

inline SpectralField partial_derivative(SpectralField spectrum, int axis) {
  if (axis < 0 || axis >= spectrum.grid().dimension()) throw RangeError("derivative axis outside the grid dimension");
  apply_symbol(spectrum, [axis](const Frequency& xi, double) {
    return Complex{0.0, xi[static_cast<std::size_t>(axis)]};
  });
  return spectrum;
}

inline SpatialField partial_derivative(const SpatialField& field, int axis) {
  return inverse(partial_derivative(forward(field), axis));
}

inline SpatialField laplacian(const SpatialField& field) {
  return apply_multiplier(field, [](const Frequency&, double norm) { return Complex{-norm * norm, 0.0}; });
}

enum class TimeDerivativeMode {
  FiniteDifference,  // 4th-order centered, 4th-order one-sided at the window ends
  Spectral           // periodic window, no taper
};

namespace detail {

inline void fd4_derivative(const SpaceTimeField& u, SpaceTimeField& out) {
  const std::size_t m = u.samples();
  const double h = u.time().step();
  auto combine = [&](std::size_t j, std::initializer_list<std::pair<std::size_t, double>> terms, double denom) {
    auto& target = out[j];
    for (auto& v : target.values()) v = 0.0;
    for (const auto& [index, weight] : terms) target.add_scaled(weight / denom, u[index]);
  };
  if (m == 2) {
    combine(0, {{0, -1.0}, {1, 1.0}}, h);
    combine(1, {{0, -1.0}, {1, 1.0}}, h);
    return;
  }
  if (m < 5) {
    combine(0, {{0, -3.0}, {1, 4.0}, {2, -1.0}}, 2.0 * h);
    for (std::size_t j = 1; j + 1 < m; ++j) combine(j, {{j - 1, -1.0}, {j + 1, 1.0}}, 2.0 * h);
    combine(m - 1, {{m - 3, 1.0}, {m - 2, -4.0}, {m - 1, 3.0}}, 2.0 * h);
    return;
  }
  const double d = 12.0 * h;
  combine(0, {{0, -25.0}, {1, 48.0}, {2, -36.0}, {3, 16.0}, {4, -3.0}}, d);
  combine(1, {{0, -3.0}, {1, -10.0}, {2, 18.0}, {3, -6.0}, {4, 1.0}}, d);
  for (std::size_t j = 2; j + 2 < m; ++j) combine(j, {{j - 2, 1.0}, {j - 1, -8.0}, {j + 1, 8.0}, {j + 2, -1.0}}, d);
  combine(m - 2, {{m - 1, 3.0}, {m - 2, 10.0}, {m - 3, -18.0}, {m - 4, 6.0}, {m - 5, -1.0}}, d);
  combine(m - 1, {{m - 1, 25.0}, {m - 2, -48.0}, {m - 3, 36.0}, {m - 4, -16.0}, {m - 5, 3.0}}, d);
}

// Periodic differentiation: multiply by (i tau)^order; the unpaired Nyquist mode is dropped for odd orders.
inline SpaceTimeField spectral_time_derivative(const SpaceTimeField& u, int order) {
  SpaceTimeField out = u.zeros_like();
  const auto& time = u.time();
  const std::size_t m = u.samples();
  for (std::size_t c = 0; c < u.components(); ++c) {
    for (std::size_t i = 0; i < u.grid().size(); ++i) {
      std::vector<Complex> series(m);
      for (std::size_t j = 0; j < m; ++j) series[j] = u[j].at(c, i);
      const auto plan = cached_plan(1, {static_cast<int>(m)}, 1, 1, 1, FFTW_FORWARD);
      plan->execute(series.data());
      for (std::size_t k = 0; k < m; ++k) {
        const double tau = time.temporal_frequency(k);
        const bool unpaired = (m % 2 == 0) && k == m / 2;
        Complex factor = std::pow(Complex{0.0, tau}, order);
        if (unpaired && order % 2 == 1) factor = 0.0;
        series[k] *= factor / static_cast<double>(m);
      }
      const auto back = cached_plan(1, {static_cast<int>(m)}, 1, 1, 1, FFTW_BACKWARD);
      back->execute(series.data());
      for (std::size_t j = 0; j < m; ++j) out[j].at(c, i) = series[j];
    }
  }
  return out;
}

}  // namespace detail

inline SpaceTimeField time_derivative(const SpaceTimeField& u,
                                      TimeDerivativeMode mode = TimeDerivativeMode::FiniteDifference) {
  if (u.samples() < 2) throw ArityError("time derivative needs at least two snapshots");
  if (mode == TimeDerivativeMode::Spectral) return detail::spectral_time_derivative(u, 1);
  SpaceTimeField out = u.zeros_like();
  detail::fd4_derivative(u, out);
  return out;
}

inline SpaceTimeField second_time_derivative(const SpaceTimeField& u,
                                             TimeDerivativeMode mode = TimeDerivativeMode::FiniteDifference) {
  if (u.samples() < 2) throw ArityError("time derivative needs at least two snapshots");
  if (mode == TimeDerivativeMode::Spectral) return detail::spectral_time_derivative(u, 2);
  return time_derivative(time_derivative(u, mode), mode);
}

/// Spatial operator applied snapshot by snapshot.
template <class Op>
SpaceTimeField map_snapshots(const SpaceTimeField& u, Op&& op) {
  std::vector<SpatialField> out;
  out.reserve(u.samples());
  for (std::size_t j = 0; j < u.samples(); ++j) out.push_back(op(u[j]));
  return SpaceTimeField(u.time(), std::move(out));
}

}  // namespace wmlab
