#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "wmlab/multipliers/profiles.hpp"
#include "wmlab/random.hpp"
#include "wmlab/variation/p_variation.hpp"

namespace wmlab {

inline double conjugate_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw RangeError("dual pairing needs 1 < p < inf");
  return p / (p - 1.0);
}

/// B(w,u) = <w(t_1), u(t_1)> + sum_j <w(t_j) - w(t_{j-1}), u(t_j)>.
inline Complex dual_pairing(const StepFunction& w, const SpaceTimeField& u) {
  if (!(w.partition().time() == u.time())) throw ShapeError("step function and series use different time grids");
  Complex total{0.0, 0.0};
  for (std::size_t k = 0; k < w.intervals(); ++k) {
    const auto& snapshot = u[w.partition()[k]];
    total += inner_product(w.values()[k], snapshot);
    if (k > 0) total -= inner_product(w.values()[k - 1], snapshot);
  }
  return total;
}

namespace detail {

/// |x|^{p-2} x
inline SpatialField duality_map(const SpatialField& x, double p) {
  const double norm = l2_norm(x);
  if (norm == 0.0) return x;
  return x * Complex{std::pow(norm, p - 2.0), 0.0};
}

inline std::vector<std::size_t> thin(const std::vector<std::size_t>& points, std::size_t limit) {
  if (points.size() <= limit) return points;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < limit; ++k) out.push_back(points[k * (points.size() - 1) / (limit - 1)]);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Indices where the sampled step function changes value, including the initial jump from zero.
inline std::vector<std::size_t> jump_points(const SpaceTimeField& u) {
  std::vector<std::size_t> jumps;
  for (std::size_t j = 0; j < u.samples(); ++j) {
    const double size = j == 0 ? l2_norm(u[0]) : l2_distance(u[j], u[j - 1]);
    if (size > 0.0) jumps.push_back(j);
  }
  return jumps;
}

/// Ratio |B(w,u)| / |w|_{V^q} for w with fixed jump points, with an incrementally updated distance table.
class PairingRatio {
 public:
  PairingRatio(const SpaceTimeField& u, std::vector<std::size_t> points, double q)
      : u_(u), points_(std::move(points)), q_(q), distances_((points_.size() + 1) * (points_.size() + 1), 0.0) {}

  std::size_t size() const { return points_.size(); }
  const std::vector<std::size_t>& points() const { return points_; }

  void assign(std::vector<SpatialField> values) {
    values_ = std::move(values);
    for (std::size_t k = 0; k < values_.size(); ++k) refresh(k);
  }

  void update(std::size_t k, SpatialField value) {
    values_[k] = std::move(value);
    refresh(k);
  }

  const std::vector<SpatialField>& values() const { return values_; }

  double ratio() const {
    const std::size_t count = values_.size() + 1;
    const double variation =
        variation_dp(count, q_, [&](std::size_t i, std::size_t j) { return distances_[i * count + j]; }).value;
    if (!(variation > 0.0)) return 0.0;
    Complex pairing{0.0, 0.0};
    for (std::size_t k = 0; k < values_.size(); ++k) {
      const auto& snapshot = u_[points_[k]];
      pairing += inner_product(values_[k], snapshot);
      if (k > 0) pairing -= inner_product(values_[k - 1], snapshot);
    }
    return std::abs(pairing) / variation;
  }

 private:
  void refresh(std::size_t k) {
    const std::size_t count = values_.size() + 1;
    const std::size_t slot = k + 1;
    for (std::size_t other = 0; other < count; ++other) {
      double d = 0.0;
      if (other == slot) d = 0.0;
      else if (other == 0) d = l2_norm(values_[k]);
      else d = l2_distance(values_[k], values_[other - 1]);
      distances_[slot * count + other] = d;
      distances_[other * count + slot] = d;
    }
  }

  const SpaceTimeField& u_;
  std::vector<std::size_t> points_;
  double q_;
  std::vector<double> distances_;
  std::vector<SpatialField> values_;
};

}  // namespace detail

struct DualityOptions {
  std::size_t budget = 64;          // candidate evaluations, constructions included
  std::size_t max_points = 32;      // jump points of a candidate w
  std::uint64_t seed = 0;
};

/// max |B(w,u)| / |w|_{V^q} over constructed and hill-climbed step functions w.
inline double up_lower_bound(const SpaceTimeField& u, double p, const DualityOptions& options = {}) {
  const double q = conjugate_exponent(p);
  if (options.budget == 0 || u.samples() == 0) return 0.0;
  std::size_t spent = 0;
  double best = 0.0;

  // One-jump w = 1_{[t,inf)} u(t)/|u(t)| gives |u(t)|.
  for (const auto& snapshot : u.snapshots()) best = std::max(best, l2_norm(snapshot));
  ++spent;
  if (best == 0.0) return 0.0;

  const std::size_t limit = std::max<std::size_t>(options.max_points, 2);
  std::vector<std::vector<std::size_t>> partitions;
  partitions.push_back(detail::thin(detail::jump_points(u), limit));
  {
    auto chain = p_variation_detail(u, p, Anchor::Anchored).chain;
    std::vector<std::size_t> points;
    for (std::size_t c : chain)
      if (c > 0) points.push_back(c - 1);
    if (!points.empty()) partitions.push_back(detail::thin(points, limit));
  }
  for (std::size_t stride = 1; stride < u.samples(); stride *= 2) {
    std::vector<std::size_t> points;
    for (std::size_t j = 0; j < u.samples(); j += stride) points.push_back(j);
    if (points.size() <= limit) partitions.push_back(points);
  }

  std::vector<std::size_t> best_points;
  std::vector<SpatialField> best_values;
  auto consider = [&](detail::PairingRatio& ratio, std::vector<SpatialField> values) {
    if (spent >= options.budget) return;
    ratio.assign(std::move(values));
    ++spent;
    const double value = ratio.ratio();
    if (value > best) {
      best = value;
      best_points = ratio.points();
      best_values = ratio.values();
    }
  };

  for (const auto& points : partitions) {
    if (points.empty()) continue;
    detail::PairingRatio ratio(u, points, q);
    const std::size_t count = points.size();
    // Summation by parts: w_k = J(u(s_k) - u(s_{k+1})), w_K = J(u(s_K)).
    std::vector<SpatialField> abel;
    for (std::size_t k = 0; k < count; ++k)
      abel.push_back(detail::duality_map(k + 1 < count ? u[points[k]] - u[points[k + 1]] : u[points[k]], p));
    consider(ratio, std::move(abel));
    // Increments matched to values: w_k - w_{k-1} = J(u(s_k)).
    std::vector<SpatialField> cumulative;
    for (std::size_t k = 0; k < count; ++k) {
      auto step = detail::duality_map(u[points[k]], p);
      cumulative.push_back(k == 0 ? step : cumulative.back() + step);
    }
    consider(ratio, std::move(cumulative));
  }

  if (best_points.empty() || spent >= options.budget) return best;

  RandomStream rng(options.seed);
  detail::PairingRatio ratio(u, best_points, q);
  ratio.assign(best_values);
  double current = best;
  double scale = 0.3;
  double typical = 0.0;
  for (const auto& v : best_values) typical = std::max(typical, l2_norm(v));
  while (spent < options.budget) {
    const std::size_t k = rng.index(ratio.size());
    const SpatialField previous = ratio.values()[k];
    SpatialField noise = previous.zeros_like();
    for (auto& v : noise.values()) v = rng.complex_normal();
    const double noise_norm = l2_norm(noise);
    if (noise_norm > 0.0) noise *= Complex{scale * typical / noise_norm, 0.0};
    ratio.update(k, previous + noise);
    ++spent;
    const double value = ratio.ratio();
    if (value > current) {
      current = value;
      scale = std::min(1.0, scale * 1.3);
    } else {
      ratio.update(k, previous);
      scale = std::max(1e-4, scale * 0.7);
    }
  }
  return std::max(best, current);
}

/// U^p norm bounds of the sampled series read as a right-continuous step function.
struct AtomicBound {
  double single_atom = 0.0;   // one atom through all value changes
  double jump_sum = 0.0;      // one-jump atoms, sum of |increments|
  double multilevel = 0.0;    // dyadic block telescoping
  double value() const { return std::min({single_atom, jump_sum, multilevel}); }
};

inline AtomicBound atomic_upper_bound(const SpaceTimeField& u, double p) {
  if (!(p >= 1.0)) throw RangeError("U^p exponent must be at least 1");
  AtomicBound bound;
  const std::size_t m = u.samples();
  if (m == 0) return bound;
  double single = 0.0;
  double jumps = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double size = j == 0 ? l2_norm(u[0]) : l2_distance(u[j], u[j - 1]);
    jumps += size;
    if (size > 0.0) single += std::pow(l2_norm(u[j]), p);
  }
  bound.single_atom = std::pow(single, 1.0 / p);
  bound.jump_sum = jumps;
  double multilevel = l2_norm(u[0]);
  for (std::size_t block = 1; block < m; block *= 2) {
    double level = 0.0;
    for (std::size_t start = 0; start + block < m; start += 2 * block)
      level += std::pow(l2_distance(u[start + block], u[start]), p);
    multilevel += std::pow(level, 1.0 / p);
  }
  bound.multilevel = multilevel;
  return bound;
}

/// Declared constant of the Besov-sum upper bound for the cutoffs used here.
inline constexpr double besov_constant = 4.0;

struct BesovSum {
  double value = 0.0;
  double constant = besov_constant;
  std::vector<double> scales;
  std::vector<double> terms;
};

/// sum_d d^{1/p} |P^(t)_d u|_{L^p L^2}, lowest band P^(t)_{<= d_lo} with d_lo = 2^floor(log2 dtau).
inline BesovSum besov_sum(const SpaceTimeField& u, double p) {
  if (!(p >= 1.0)) throw RangeError("Besov exponent must be at least 1");
  BesovSum sum;
  const auto& time = u.time();
  if (time.samples() < 2) throw ArityError("Besov sum needs at least two snapshots");
  SpectralHistory spectrum(u);
  spectrum.temporal_forward();
  const double lowest = std::exp2(std::floor(std::log2(time.temporal_step())));
  for (double d = lowest; d / 2.0 < time.temporal_nyquist() * 1.0000001; d *= 2.0) {
    SpectralHistory band = spectrum;
    for (std::size_t r = 0; r < time.samples(); ++r) {
      const double ratio = std::abs(time.temporal_frequency(r)) / d;
      const double weight = d == lowest ? profile::low_pass(ratio) : profile::dyadic_band(ratio);
      for (auto& v : band.row(r)) v *= weight;
    }
    band.temporal_inverse();
    const double term = std::pow(d, 1.0 / p) * mixed_norm(band.to_field(), p);
    sum.scales.push_back(d);
    sum.terms.push_back(term);
    sum.value += term;
  }
  return sum;
}

inline BesovSum up_upper_bound(const SpaceTimeField& u, double p) { return besov_sum(u, p); }

/// sum_j m_j^p |g(t_j) - g(t_j - s)|^p with m_j = min(t_{j+1} - t_j, 1), m_N = 1.
/// g is read as a right-continuous step function vanishing before the window.
inline double increment_sum(const SpaceTimeField& g, double s, double p, const Partition& partition) {
  if (!(partition.time() == g.time())) throw ShapeError("partition and series use different time grids");
  double total = 0.0;
  for (std::size_t k = 0; k < partition.size(); ++k) {
    const double t = partition.time_of(k);
    const double gap = k + 1 < partition.size() ? std::min(partition.time_of(k + 1) - t, 1.0) : 1.0;
    const long shifted = g.time().floor_index(t - s);
    const auto& now = g[partition[k]];
    const double size = shifted < 0 ? l2_norm(now) : l2_distance(now, g[static_cast<std::size_t>(shifted)]);
    total += std::pow(gap, p) * std::pow(size, p);
  }
  return total;
}

/// (phi * v)(t_j) = sum_k phi_k v(t_{j - first_shift - k}); v vanishes before the window and is held after it.
inline SpaceTimeField time_convolution(const SpaceTimeField& v, const std::vector<double>& kernel, long first_shift = 0) {
  SpaceTimeField out = v.zeros_like();
  const long m = static_cast<long>(v.samples());
  for (long j = 0; j < m; ++j)
    for (std::size_t k = 0; k < kernel.size(); ++k) {
      const long source = std::min(j - first_shift - static_cast<long>(k), m - 1);
      if (source < 0 || kernel[k] == 0.0) continue;
      out[static_cast<std::size_t>(j)].add_scaled(Complex{kernel[k], 0.0}, v[static_cast<std::size_t>(source)]);
    }
  return out;
}

}  // namespace wmlab
