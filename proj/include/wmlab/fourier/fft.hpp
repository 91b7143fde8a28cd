#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "wmlab/fourier/fields.hpp"

namespace wmlab {

namespace detail {

/// Owns an in-place FFTW plan; executed through the new-array interface so any buffer of the
/// planned shape can be transformed.
class FftwPlan {
 public:
  FftwPlan(int rank, std::vector<int> dims, int howmany, int stride, int distance, int sign) {
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    const std::size_t extent = (total - 1) * static_cast<std::size_t>(stride) +
                               (static_cast<std::size_t>(howmany) - 1) * static_cast<std::size_t>(distance) + 1;
    auto* scratch = fftw_alloc_complex(extent);
    plan_ = fftw_plan_many_dft(rank, dims.data(), howmany, scratch, nullptr, stride, distance, scratch, nullptr,
                               stride, distance, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan_ == nullptr) throw Error("FFTW could not create a plan");
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  ~FftwPlan() { fftw_destroy_plan(plan_); }

  void execute(Complex* data) const {
    auto* buffer = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan_, buffer, buffer);
  }

 private:
  fftw_plan plan_ = nullptr;
};

using PlanKey = std::tuple<int, std::vector<int>, int, int, int, int>;

inline std::shared_ptr<const FftwPlan> cached_plan(int rank, std::vector<int> dims, int howmany, int stride,
                                                   int distance, int sign) {
  static std::mutex guard;
  static std::map<PlanKey, std::shared_ptr<const FftwPlan>> cache;
  PlanKey key{rank, dims, howmany, stride, distance, sign};
  std::lock_guard lock(guard);
  auto found = cache.find(key);
  if (found != cache.end()) return found->second;
  auto plan = std::make_shared<const FftwPlan>(rank, std::move(dims), howmany, stride, distance, sign);
  cache.emplace(std::move(key), plan);
  return plan;
}

inline void spatial_transform(const FrequencyGrid& grid, std::size_t components, Complex* data, int sign) {
  std::vector<int> dims(static_cast<std::size_t>(grid.dimension()), static_cast<int>(grid.points()));
  const auto plan = cached_plan(grid.dimension(), dims, static_cast<int>(components), 1,
                                static_cast<int>(grid.size()), sign);
  plan->execute(data);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (std::size_t i = 0; i < components * grid.size(); ++i) data[i] *= scale;
}

}  // namespace detail

/// Unitary DFT: c_k = N^{-n/2} sum_x f(x) e^{-i k.x}.
inline SpectralField forward(const SpatialField& field) {
  std::vector<Complex> data(field.values().begin(), field.values().end());
  detail::spatial_transform(field.grid(), field.components(), data.data(), FFTW_FORWARD);
  return SpectralField(field.grid(), field.components(), std::move(data));
}

inline SpatialField inverse(const SpectralField& spectrum) {
  std::vector<Complex> data(spectrum.values().begin(), spectrum.values().end());
  detail::spatial_transform(spectrum.grid(), spectrum.components(), data.data(), FFTW_BACKWARD);
  return SpatialField(spectrum.grid(), spectrum.components(), std::move(data));
}

/// Spectral coefficients of every snapshot, stored as an M x (c N^n) row-major block.
/// Rows are time samples; columns are (component, mode) pairs.
class SpectralHistory {
 public:
  SpectralHistory(TimeGrid time, FrequencyGrid grid, std::size_t components)
      : time_(time), grid_(std::move(grid)), components_(components),
        data_(time.samples() * components * grid_.size()) {}

  explicit SpectralHistory(const SpaceTimeField& field)
      : SpectralHistory(field.time(), field.grid(), field.components()) {
    for (std::size_t j = 0; j < field.samples(); ++j) {
      const auto spectrum = forward(field[j]);
      std::copy(spectrum.values().begin(), spectrum.values().end(), row(j).begin());
    }
  }

  const TimeGrid& time() const { return time_; }
  const FrequencyGrid& grid() const { return grid_; }
  std::size_t components() const { return components_; }
  std::size_t columns() const { return components_ * grid_.size(); }
  std::size_t mode_of_column(std::size_t column) const { return column % grid_.size(); }

  std::span<Complex> row(std::size_t j) { return {data_.data() + j * columns(), columns()}; }
  std::span<const Complex> row(std::size_t j) const { return {data_.data() + j * columns(), columns()}; }
  Complex& at(std::size_t j, std::size_t column) { return data_[j * columns() + column]; }
  const Complex& at(std::size_t j, std::size_t column) const { return data_[j * columns() + column]; }

  /// Unitary DFT along t for every column: row m then holds temporal frequency tau_m.
  void temporal_forward() { temporal_transform(FFTW_FORWARD); }
  void temporal_inverse() { temporal_transform(FFTW_BACKWARD); }

  SpaceTimeField to_field() const {
    SpaceTimeField field(time_, grid_, components_);
    for (std::size_t j = 0; j < time_.samples(); ++j) {
      const auto r = row(j);
      SpectralField spectrum(grid_, components_, std::vector<Complex>(r.begin(), r.end()));
      field[j] = inverse(spectrum);
    }
    return field;
  }

 private:
  void temporal_transform(int sign) {
    const int count = static_cast<int>(time_.samples());
    const int width = static_cast<int>(columns());
    const auto plan = detail::cached_plan(1, {count}, width, width, 1, sign);
    plan->execute(data_.data());
    const double scale = 1.0 / std::sqrt(static_cast<double>(count));
    for (auto& v : data_) v *= scale;
  }

  TimeGrid time_;
  FrequencyGrid grid_;
  std::size_t components_;
  std::vector<Complex> data_;
};

}  // namespace wmlab
