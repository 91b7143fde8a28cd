#pragma once

#include <cmath>
#include <vector>

#include "wmlab/multipliers/spatial.hpp"

namespace wmlab {

enum class ModulationSign { Plus, Minus, None };
enum class Comparator { Approx, AtMost };
enum class Taper { None, Hann };

inline double comparator_symbol(Comparator comparator, double ratio) {
  return comparator == Comparator::Approx ? profile::dyadic_band(ratio) : profile::low_pass(ratio);
}

inline void require_temporal_scale(const TimeGrid& time, double d) {
  if (time.samples() < 2) throw ArityError("temporal bands need at least two snapshots");
  if (!(d > 0.0)) throw RangeError("modulation scale must be positive");
  if (d < time.temporal_step()) throw ResolutionError("window too short to resolve the temporal scale");
  if (d > 4.0 * time.temporal_nyquist()) throw RangeError("temporal scale above the sampled band");
}

namespace detail {

inline std::vector<double> taper_weights(const TimeGrid& time, Taper taper) {
  std::vector<double> w(time.samples(), 1.0);
  if (taper == Taper::Hann)
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = profile::hann(j, w.size());
  return w;
}

inline void apply_taper(SpectralHistory& history, const std::vector<double>& weights) {
  for (std::size_t j = 0; j < weights.size(); ++j)
    if (weights[j] != 1.0)
      for (auto& v : history.row(j)) v *= weights[j];
}

// Multiplies every column by e^{i s t_j phase(mode)}.
inline void conjugate_history(SpectralHistory& history, double s) {
  const auto& grid = history.grid();
  for (std::size_t j = 0; j < history.time().samples(); ++j) {
    const double t = history.time().time(j);
    auto row = history.row(j);
    for (std::size_t col = 0; col < row.size(); ++col)
      row[col] *= std::polar(1.0, s * t * grid.frequency_norm(history.mode_of_column(col)));
  }
}

}  // namespace detail

/// Space-time symbol of C_d (sign None) or C^{+-}_d. For +- the temporal lattice of each mode is
/// shifted by -+|xi|, the frequencies represented after conjugation by e^{+-it|grad|}.
inline MultiplierSpec modulation_spec(const FrequencyGrid& grid, const TimeGrid& time, double d, ModulationSign sign,
                                      Comparator comparator) {
  require_temporal_scale(time, d);
  MultiplierSpec spec;
  spec.domain = SymbolDomain::SpaceTime;
  spec.profile = comparator == Comparator::Approx ? "psi(modulation/d)" : "theta(modulation/d)";
  spec.grid = grid;
  spec.time = time;
  const std::size_t m = time.samples();
  spec.tau.resize(grid.size() * m);
  spec.values.resize(grid.size() * m);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.frequency_norm(i);
    for (std::size_t r = 0; r < m; ++r) {
      const double lattice_tau = time.temporal_frequency(r);
      double tau = lattice_tau;
      double modulation = 0.0;
      switch (sign) {
        case ModulationSign::Plus:
          tau = lattice_tau - k;
          modulation = std::abs(tau + k);
          break;
        case ModulationSign::Minus:
          tau = lattice_tau + k;
          modulation = std::abs(tau - k);
          break;
        case ModulationSign::None:
          modulation = std::abs(std::abs(tau) - k);
          break;
      }
      spec.tau[i * m + r] = tau;
      spec.values[i * m + r] = comparator_symbol(comparator, modulation / d);
    }
  }
  return spec;
}

/// Temporal symbol psi(|tau|/d) (or theta for AtMost).
inline MultiplierSpec temporal_spec(const TimeGrid& time, double d, Comparator comparator = Comparator::Approx) {
  require_temporal_scale(time, d);
  MultiplierSpec spec;
  spec.domain = SymbolDomain::Temporal;
  spec.profile = comparator == Comparator::Approx ? "psi(|tau|/d)" : "theta(|tau|/d)";
  spec.time = time;
  for (std::size_t r = 0; r < time.samples(); ++r) {
    spec.tau.push_back(time.temporal_frequency(r));
    spec.values.push_back(comparator_symbol(comparator, std::abs(spec.tau.back()) / d));
  }
  return spec;
}

/// P^(t)_d over the periodic window.
inline SpaceTimeField temporal_band(const SpaceTimeField& u, double d, Comparator comparator = Comparator::Approx,
                                    Taper taper = Taper::None) {
  const auto spec = temporal_spec(u.time(), d, comparator);
  SpectralHistory history(u);
  detail::apply_taper(history, detail::taper_weights(u.time(), taper));
  history.temporal_forward();
  for (std::size_t r = 0; r < u.samples(); ++r)
    for (auto& v : history.row(r)) v *= spec.values[r];
  history.temporal_inverse();
  return history.to_field();
}

/// C_d / C^{+-}_d through the conjugation e^{-+it|grad|} P^(t)_d e^{+-it|grad|} (FFT in t).
inline SpaceTimeField modulation_band(const SpaceTimeField& u, double d, ModulationSign sign,
                                      Comparator comparator = Comparator::Approx, Taper taper = Taper::None) {
  require_temporal_scale(u.time(), d);
  SpectralHistory history(u);
  detail::apply_taper(history, detail::taper_weights(u.time(), taper));
  if (sign == ModulationSign::None) {
    const auto spec = modulation_spec(u.grid(), u.time(), d, sign, comparator);
    history.temporal_forward();
    const std::size_t m = u.samples();
    for (std::size_t r = 0; r < m; ++r) {
      auto row = history.row(r);
      for (std::size_t col = 0; col < row.size(); ++col) row[col] *= spec.values[history.mode_of_column(col) * m + r];
    }
    history.temporal_inverse();
    return history.to_field();
  }
  const double s = sign == ModulationSign::Plus ? 1.0 : -1.0;
  detail::conjugate_history(history, s);
  history.temporal_forward();
  for (std::size_t r = 0; r < u.samples(); ++r) {
    const double factor = comparator_symbol(comparator, std::abs(u.time().temporal_frequency(r)) / d);
    for (auto& v : history.row(r)) v *= factor;
  }
  history.temporal_inverse();
  detail::conjugate_history(history, -s);
  return history.to_field();
}

/// The same operator evaluated directly from its space-time symbol: per mode, analysis and synthesis
/// on the shifted temporal lattice by explicit O(M^2) sums.
inline SpaceTimeField modulation_band_direct(const SpaceTimeField& u, double d, ModulationSign sign,
                                             Comparator comparator = Comparator::Approx, Taper taper = Taper::None) {
  const auto spec = modulation_spec(u.grid(), u.time(), d, sign, comparator);
  SpectralHistory history(u);
  detail::apply_taper(history, detail::taper_weights(u.time(), taper));
  const std::size_t m = u.samples();
  const auto& time = u.time();
  std::vector<Complex> coefficients(m);
  std::vector<Complex> series(m);
  for (std::size_t col = 0; col < history.columns(); ++col) {
    const std::size_t mode = history.mode_of_column(col);
    for (std::size_t j = 0; j < m; ++j) series[j] = history.at(j, col);
    for (std::size_t r = 0; r < m; ++r) {
      const double tau = spec.tau[mode * m + r];
      Complex total{0.0, 0.0};
      for (std::size_t j = 0; j < m; ++j) total += series[j] * std::polar(1.0, -tau * (time.time(j) - time.start()));
      coefficients[r] = spec.values[mode * m + r] * total / static_cast<double>(m);
    }
    // Shifted lattices carry the phase e^{-+i|xi| t0}; it cancels between analysis and synthesis.
    for (std::size_t j = 0; j < m; ++j) {
      Complex total{0.0, 0.0};
      for (std::size_t r = 0; r < m; ++r)
        total += coefficients[r] * std::polar(1.0, spec.tau[mode * m + r] * (time.time(j) - time.start()));
      history.at(j, col) = total;
    }
  }
  return history.to_field();
}

}  // namespace wmlab
