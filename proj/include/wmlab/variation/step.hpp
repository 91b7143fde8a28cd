#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "wmlab/fourier.hpp"

namespace wmlab {

/// Strictly increasing set of sample indices of a TimeGrid.
class Partition {
 public:
  Partition(TimeGrid time, std::vector<std::size_t> points) : time_(time), points_(std::move(points)) {
    if (points_.empty()) throw PreconditionError("partition must be nonempty");
    for (std::size_t k = 0; k < points_.size(); ++k) {
      if (points_[k] >= time_.samples()) throw RangeError("partition point outside the time grid");
      if (k > 0 && points_[k] <= points_[k - 1]) throw PreconditionError("partition must be strictly increasing");
    }
  }

  static Partition full(const TimeGrid& time) {
    std::vector<std::size_t> points(time.samples());
    for (std::size_t j = 0; j < points.size(); ++j) points[j] = j;
    return Partition(time, std::move(points));
  }

  const TimeGrid& time() const { return time_; }
  std::size_t size() const { return points_.size(); }
  std::size_t operator[](std::size_t k) const { return points_[k]; }
  const std::vector<std::size_t>& points() const { return points_; }
  double time_of(std::size_t k) const { return time_.time(points_[k]); }

  /// Interval containing sample j, or nothing before the first point.
  std::optional<std::size_t> interval_of(std::size_t sample) const {
    if (sample < points_.front()) return std::nullopt;
    std::size_t lo = 0;
    std::size_t hi = points_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (points_[mid] <= sample) lo = mid;
      else hi = mid;
    }
    return lo;
  }

 private:
  TimeGrid time_;
  std::vector<std::size_t> points_;
};

/// Right-continuous step function: values[k] on [t_k, t_{k+1}), the last on [t_N, inf), zero before t_1.
class StepFunction {
 public:
  StepFunction(Partition partition, std::vector<SpatialField> values)
      : partition_(std::move(partition)), values_(std::move(values)) {
    if (values_.size() != partition_.size()) throw ShapeError("one value per partition interval required");
    for (const auto& v : values_) values_.front().require_same_shape(v);
  }

  const Partition& partition() const { return partition_; }
  const std::vector<SpatialField>& values() const { return values_; }
  std::vector<SpatialField>& values() { return values_; }
  std::size_t intervals() const { return values_.size(); }
  const FrequencyGrid& grid() const { return values_.front().grid(); }
  std::size_t components() const { return values_.front().components(); }

  SpatialField at_sample(std::size_t sample) const {
    const auto k = partition_.interval_of(sample);
    return k ? values_[*k] : values_.front().zeros_like();
  }

  SpaceTimeField sample() const {
    std::vector<SpatialField> snapshots;
    snapshots.reserve(partition_.time().samples());
    for (std::size_t j = 0; j < partition_.time().samples(); ++j) snapshots.push_back(at_sample(j));
    return SpaceTimeField(partition_.time(), std::move(snapshots));
  }

  /// (sum_I |f_I|^p)^{1/p}
  double lp_of_values(double p) const {
    double total = 0.0;
    for (const auto& v : values_) total += std::pow(l2_norm(v), p);
    return std::pow(total, 1.0 / p);
  }

 private:
  Partition partition_;
  std::vector<SpatialField> values_;
};

/// Step function normalized by (sum_I |f_I|^p)^{1/p} = 1.
class UpAtom {
 public:
  UpAtom(StepFunction step, double p) : step_(std::move(step)), p_(p) {
    if (!(p >= 1.0)) throw RangeError("atom exponent must be at least 1");
    if (std::abs(step_.lp_of_values(p) - 1.0) > 1e-12) throw PreconditionError("atom is not normalized");
  }

  const StepFunction& step() const { return step_; }
  double exponent() const { return p_; }
  SpaceTimeField sample() const { return step_.sample(); }

 private:
  StepFunction step_;
  double p_;
};

inline UpAtom make_atom(const Partition& partition, std::vector<SpatialField> values, double p) {
  StepFunction step(partition, std::move(values));
  const double scale = step.lp_of_values(p);
  if (!(scale > 0.0)) throw DegenerateInputError("atom values vanish");
  for (auto& v : step.values()) v *= Complex{1.0 / scale, 0.0};
  return UpAtom(std::move(step), p);
}

/// u = sum_j c_j a_j.
class AtomicDecomposition {
 public:
  void add(Complex coefficient, UpAtom atom) {
    if (!terms_.empty() && !(atom.step().partition().time() == terms_.front().second.step().partition().time()))
      throw ShapeError("atoms live on different time grids");
    terms_.emplace_back(coefficient, std::move(atom));
  }

  const std::vector<std::pair<Complex, UpAtom>>& terms() const { return terms_; }

  double coefficient_sum() const {
    double total = 0.0;
    for (const auto& term : terms_) total += std::abs(term.first);
    return total;
  }

  SpaceTimeField sample() const {
    if (terms_.empty()) throw DegenerateInputError("empty decomposition");
    SpaceTimeField total = terms_.front().second.sample().zeros_like();
    for (const auto& [c, atom] : terms_) total += c * atom.sample();
    return total;
  }

 private:
  std::vector<std::pair<Complex, UpAtom>> terms_;
};

}  // namespace wmlab
