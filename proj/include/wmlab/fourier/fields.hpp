#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wmlab/errors.hpp"
#include "wmlab/fourier/grid.hpp"

namespace wmlab {

using Complex = std::complex<double>;

struct PhysicalSpace {};
struct FourierSpace {};

/// c-component complex samples on a FrequencyGrid; component blocks are contiguous.
/// The Domain tag keeps physical samples and unitary-DFT coefficients apart.
template <class Domain>
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(FrequencyGrid grid, std::size_t components)
      : grid_(std::move(grid)), components_(components), values_(components * grid_.size()) {
    if (components == 0) throw ShapeError("field needs at least one component");
  }
  GridFunction(FrequencyGrid grid, std::size_t components, std::vector<Complex> values)
      : grid_(std::move(grid)), components_(components), values_(std::move(values)) {
    if (values_.size() != components_ * grid_.size()) throw ShapeError("value array does not match c*N^n");
  }

  const FrequencyGrid& grid() const { return grid_; }
  std::size_t components() const { return components_; }
  std::size_t points() const { return grid_.size(); }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> component(std::size_t c) { return {values_.data() + c * grid_.size(), grid_.size()}; }
  std::span<const Complex> component(std::size_t c) const { return {values_.data() + c * grid_.size(), grid_.size()}; }

  Complex& at(std::size_t c, std::size_t flat) { return values_[c * grid_.size() + flat]; }
  const Complex& at(std::size_t c, std::size_t flat) const { return values_[c * grid_.size() + flat]; }

  bool same_shape(const GridFunction& other) const {
    return grid_ == other.grid_ && components_ == other.components_;
  }
  void require_same_shape(const GridFunction& other) const {
    if (!same_shape(other)) throw ShapeError("fields differ in grid or component count");
  }

  GridFunction& operator+=(const GridFunction& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
  }
  GridFunction& operator-=(const GridFunction& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
  }
  GridFunction& operator*=(Complex scale) {
    for (auto& v : values_) v *= scale;
    return *this;
  }
  // this += scale * other
  GridFunction& add_scaled(Complex scale, const GridFunction& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += scale * other.values_[i];
    return *this;
  }

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(Complex s, GridFunction a) { return a *= s; }
  friend GridFunction operator*(GridFunction a, Complex s) { return a *= s; }

  // Sum of |value|^2 over every sample and component.
  double squared_sum() const {
    double total = 0.0;
    for (const auto& v : values_) total += std::norm(v);
    return total;
  }

  GridFunction zeros_like() const { return GridFunction(grid_, components_); }

 private:
  FrequencyGrid grid_;
  std::size_t components_ = 1;
  std::vector<Complex> values_;
};

using SpatialField = GridFunction<PhysicalSpace>;
using SpectralField = GridFunction<FourierSpace>;

/// Continuous L^2 norm of samples: (h^n sum |f|^2)^{1/2}.
inline double l2_norm(const SpatialField& field) {
  return std::sqrt(field.grid().cell_volume() * field.squared_sum());
}
/// The same norm read off unitary coefficients (Plancherel).
inline double l2_norm(const SpectralField& spectrum) {
  return std::sqrt(spectrum.grid().cell_volume() * spectrum.squared_sum());
}
/// Plain coefficient norm (sum |c_k|^2)^{1/2}.
inline double coefficient_norm(const SpectralField& spectrum) { return std::sqrt(spectrum.squared_sum()); }

/// Continuous L^2 inner product <a,b> = integral of conj(a) b.
template <class Domain>
Complex inner_product(const GridFunction<Domain>& a, const GridFunction<Domain>& b) {
  a.require_same_shape(b);
  Complex total{0.0, 0.0};
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) total += std::conj(av[i]) * bv[i];
  return total * a.grid().cell_volume();
}

template <class Domain>
double l2_distance(const GridFunction<Domain>& a, const GridFunction<Domain>& b) {
  a.require_same_shape(b);
  double total = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) total += std::norm(av[i] - bv[i]);
  return std::sqrt(total * a.grid().cell_volume());
}

/// M snapshots of a spatial field on one TimeGrid.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(TimeGrid time, FrequencyGrid grid, std::size_t components)
      : time_(time), snapshots_(time.samples(), SpatialField(grid, components)) {}
  SpaceTimeField(TimeGrid time, std::vector<SpatialField> snapshots) : time_(time), snapshots_(std::move(snapshots)) {
    if (snapshots_.size() != time_.samples()) throw ShapeError("snapshot count does not match the time grid");
    for (const auto& s : snapshots_) snapshots_.front().require_same_shape(s);
  }

  const TimeGrid& time() const { return time_; }
  const FrequencyGrid& grid() const { return snapshots_.front().grid(); }
  std::size_t components() const { return snapshots_.front().components(); }
  std::size_t samples() const { return snapshots_.size(); }

  SpatialField& operator[](std::size_t j) { return snapshots_[j]; }
  const SpatialField& operator[](std::size_t j) const { return snapshots_[j]; }
  std::span<SpatialField> snapshots() { return snapshots_; }
  std::span<const SpatialField> snapshots() const { return snapshots_; }

  bool same_shape(const SpaceTimeField& other) const {
    return time_ == other.time_ && !snapshots_.empty() && !other.snapshots_.empty() &&
           snapshots_.front().same_shape(other.snapshots_.front());
  }
  void require_same_shape(const SpaceTimeField& other) const {
    if (!same_shape(other)) throw ShapeError("space-time fields differ in time grid, grid or components");
  }

  SpaceTimeField& operator+=(const SpaceTimeField& other) {
    require_same_shape(other);
    for (std::size_t j = 0; j < snapshots_.size(); ++j) snapshots_[j] += other.snapshots_[j];
    return *this;
  }
  SpaceTimeField& operator-=(const SpaceTimeField& other) {
    require_same_shape(other);
    for (std::size_t j = 0; j < snapshots_.size(); ++j) snapshots_[j] -= other.snapshots_[j];
    return *this;
  }
  SpaceTimeField& operator*=(Complex scale) {
    for (auto& s : snapshots_) s *= scale;
    return *this;
  }
  friend SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
  friend SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }
  friend SpaceTimeField operator*(Complex s, SpaceTimeField a) { return a *= s; }

  SpaceTimeField zeros_like() const { return SpaceTimeField(time_, grid(), components()); }

 private:
  TimeGrid time_;
  std::vector<SpatialField> snapshots_;
};

/// Samples of a callable f(x) -> Complex (single component).
template <class Fn>
SpatialField sample_field(const FrequencyGrid& grid, Fn&& fn) {
  SpatialField field(grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) field.at(0, i) = fn(grid.position(i));
  return field;
}

/// Samples of a callable f(t, x) -> Complex (single component).
template <class Fn>
SpaceTimeField sample_space_time(const TimeGrid& time, const FrequencyGrid& grid, Fn&& fn) {
  SpaceTimeField field(time, grid, 1);
  for (std::size_t j = 0; j < time.samples(); ++j) {
    const double t = time.time(j);
    for (std::size_t i = 0; i < grid.size(); ++i) field[j].at(0, i) = fn(t, grid.position(i));
  }
  return field;
}

}  // namespace wmlab
