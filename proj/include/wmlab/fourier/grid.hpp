#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "wmlab/errors.hpp"

namespace wmlab {

using Frequency = std::array<double, 3>;

/// Periodic box [0, L)^n sampled with N points per axis.
/// Spectral arrays use the usual FFT ordering: wavenumbers 0..N/2-1 then -N/2..-1.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;

  FrequencyGrid(int dimension, std::size_t points, double period)
      : dimension_(dimension), points_(points), period_(period) {
    if (dimension < 1 || dimension > 3)
      throw RangeError("grid dimension must be 1, 2 or 3, got " + std::to_string(dimension));
    if (points < 2 || (points & (points - 1)) != 0)
      throw RangeError("points per axis must be a power of two, got " + std::to_string(points));
    if (!(period > 0.0) || !std::isfinite(period))
      throw RangeError("grid period must be positive");
    size_ = 1;
    for (int axis = 0; axis < dimension; ++axis) size_ *= points;
  }

  int dimension() const { return dimension_; }
  std::size_t points() const { return points_; }
  double period() const { return period_; }
  std::size_t size() const { return size_; }

  double spacing() const { return period_ / static_cast<double>(points_); }
  double cell_volume() const { return std::pow(spacing(), dimension_); }
  double volume() const { return std::pow(period_, dimension_); }
  double dual_step() const { return 2.0 * std::numbers::pi / period_; }
  double nyquist() const { return std::numbers::pi * static_cast<double>(points_) / period_; }
  // Largest |xi| on the lattice (corner mode).
  double max_frequency_norm() const { return nyquist() * std::sqrt(static_cast<double>(dimension_)); }

  long wavenumber(std::size_t axis_index) const {
    const auto half = static_cast<long>(points_ / 2);
    const auto k = static_cast<long>(axis_index);
    return k < half ? k : k - static_cast<long>(points_);
  }

  std::size_t axis_index(long wavenumber) const {
    const auto n = static_cast<long>(points_);
    return static_cast<std::size_t>(((wavenumber % n) + n) % n);
  }

  std::array<std::size_t, 3> unflatten(std::size_t flat) const {
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (int axis = dimension_ - 1; axis >= 0; --axis) {
      idx[static_cast<std::size_t>(axis)] = flat % points_;
      flat /= points_;
    }
    return idx;
  }

  std::size_t flatten(const std::array<std::size_t, 3>& idx) const {
    std::size_t flat = 0;
    for (int axis = 0; axis < dimension_; ++axis) flat = flat * points_ + idx[static_cast<std::size_t>(axis)];
    return flat;
  }

  std::array<long, 3> wavevector(std::size_t flat) const {
    const auto idx = unflatten(flat);
    std::array<long, 3> k{0, 0, 0};
    for (int axis = 0; axis < dimension_; ++axis) k[static_cast<std::size_t>(axis)] = wavenumber(idx[static_cast<std::size_t>(axis)]);
    return k;
  }

  std::size_t flat_of_wavevector(const std::array<long, 3>& k) const {
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (int axis = 0; axis < dimension_; ++axis) idx[static_cast<std::size_t>(axis)] = axis_index(k[static_cast<std::size_t>(axis)]);
    return flatten(idx);
  }

  Frequency frequency(std::size_t flat) const {
    const auto k = wavevector(flat);
    Frequency xi{0.0, 0.0, 0.0};
    for (std::size_t axis = 0; axis < 3; ++axis) xi[axis] = dual_step() * static_cast<double>(k[axis]);
    return xi;
  }

  double frequency_norm(std::size_t flat) const {
    const auto xi = frequency(flat);
    return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  }

  Frequency position(std::size_t flat) const {
    const auto idx = unflatten(flat);
    Frequency x{0.0, 0.0, 0.0};
    for (int axis = 0; axis < dimension_; ++axis)
      x[static_cast<std::size_t>(axis)] = spacing() * static_cast<double>(idx[static_cast<std::size_t>(axis)]);
    return x;
  }

  bool operator==(const FrequencyGrid& other) const {
    return dimension_ == other.dimension_ && points_ == other.points_ && period_ == other.period_;
  }

  std::string describe() const {
    return "n=" + std::to_string(dimension_) + ",N=" + std::to_string(points_) + ",L=" + std::to_string(period_);
  }

 private:
  int dimension_ = 1;
  std::size_t points_ = 2;
  double period_ = 2.0 * std::numbers::pi;
  std::size_t size_ = 2;
};

/// Uniform sample times t_j = t0 + j dt, j = 0..M-1.
class TimeGrid {
 public:
  TimeGrid() = default;

  TimeGrid(double start, double step, std::size_t samples) : start_(start), step_(step), samples_(samples) {
    if (!(step > 0.0) || !std::isfinite(step)) throw RangeError("time step must be positive");
    if (samples < 1) throw RangeError("time grid needs at least one sample");
  }

  double start() const { return start_; }
  double step() const { return step_; }
  std::size_t samples() const { return samples_; }
  double time(std::size_t j) const { return start_ + static_cast<double>(j) * step_; }
  double end() const { return time(samples_ - 1); }
  // Length of [t_0, t_{M-1}], the quadrature window.
  double window_length() const { return static_cast<double>(samples_ - 1) * step_; }
  // Length of the periodic extension used by time DFTs.
  double period() const { return static_cast<double>(samples_) * step_; }
  double temporal_step() const { return 2.0 * std::numbers::pi / period(); }
  double temporal_nyquist() const { return std::numbers::pi / step_; }

  long temporal_wavenumber(std::size_t m) const {
    const auto count = static_cast<long>(samples_);
    const auto k = static_cast<long>(m);
    return k < (count + 1) / 2 ? k : k - count;
  }
  double temporal_frequency(std::size_t m) const {
    return temporal_step() * static_cast<double>(temporal_wavenumber(m));
  }

  // Index of the sample at or before t, or -1 when t precedes the window.
  long floor_index(double t) const {
    const double position = (t - start_) / step_;
    const double rounded = std::round(position);
    const double snapped = std::abs(position - rounded) < 1e-9 ? rounded : std::floor(position);
    if (snapped < 0.0) return -1;
    return static_cast<long>(std::min(snapped, static_cast<double>(samples_ - 1)));
  }

  bool operator==(const TimeGrid& other) const {
    return start_ == other.start_ && step_ == other.step_ && samples_ == other.samples_;
  }

 private:
  double start_ = 0.0;
  double step_ = 1.0;
  std::size_t samples_ = 1;
};

}  // namespace wmlab
