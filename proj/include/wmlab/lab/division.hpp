#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "wmlab/lab/parallel.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/lab/highlow.hpp"
#include "wmlab/multipliers/spatial.hpp"
#include "wmlab/random.hpp"
#include "wmlab/variation/s_norm.hpp"
#include "wmlab/wavemaps/duhamel.hpp"
#include "wmlab/wavemaps/picard.hpp"

namespace wmlab {

/// A space-time field with its time derivative.
struct TimedField {
  SpaceTimeField value;
  SpaceTimeField velocity;
};

inline TimedField littlewood_paley(const TimedField& u, DyadicScale scale) {
  const auto spec = littlewood_paley_spec(u.value.grid(), scale);
  TimedField out{u.value.zeros_like(), u.value.zeros_like()};
  for (std::size_t j = 0; j < u.value.samples(); ++j) {
    out.value[j] = apply(spec, u.value[j]);
    out.velocity[j] = apply(spec, u.velocity[j]);
  }
  return out;
}

/// (uv, u_t v + u v_t)
inline TimedField product(const TimedField& u, const TimedField& v) {
  return {pointwise_product(u.value, v.value),
          pointwise_product(u.velocity, v.value) + pointwise_product(u.value, v.velocity)};
}

/// chi-truncated free wave with random data at frequency ~ lambda.
inline TimedField banded_free_wave(const FrequencyGrid& grid, const TimeGrid& time, double lambda, RandomStream& rng) {
  const auto scale = DyadicScale::of(lambda);
  const long reach = static_cast<long>(std::ceil(2.0 * lambda / grid.dual_step()));
  const CauchyData data{littlewood_paley(random_band_limited(grid, 1, reach, rng), scale),
                        littlewood_paley(random_band_limited(grid, 1, reach, rng), scale) * Complex{lambda, 0.0}};
  auto wave = truncated_free_wave(data, time);
  return {std::move(wave.phi), std::move(wave.phi_t)};
}

/// rho(t) w with rho = e^{-t^2/2}, its derivative and, for t >= 0 where w is free, Box(rho w) = rho'' w + 2 rho' w_t.
inline std::pair<TimedField, SpaceTimeField> damped_wave(const TimedField& w) {
  const auto& time = w.value.time();
  TimedField v{w.value.zeros_like(), w.value.zeros_like()};
  SpaceTimeField box = w.value.zeros_like();
  for (std::size_t j = 0; j < time.samples(); ++j) {
    const double t = time.time(j);
    const double rho = std::exp(-0.5 * t * t);
    const double slope = -t * rho;
    const double curve = (t * t - 1.0) * rho;
    v.value[j] = w.value[j] * Complex{rho, 0.0};
    v.velocity[j] = w.value[j] * Complex{slope, 0.0} + w.velocity[j] * Complex{rho, 0.0};
    if (t >= 0.0) box[j] = w.value[j] * Complex{curve, 0.0} + w.velocity[j] * Complex{2.0 * slope, 0.0};
  }
  return {std::move(v), std::move(box)};
}

struct DivisionOptions {
  std::size_t points = 32;
  double period = 2.0 * std::numbers::pi;
  double start = -1.0;
  double dt = 1.0 / 16.0;
  std::size_t time_samples = 49;
  std::vector<double> scales{1.0, 2.0, 4.0};
  bool nonlinear = true;
  Bracket bracket = Bracket::one_sided(20.0);
};

struct DivisionRatios {
  double algebra = 0.0;    // lambda0^{n/2} S^+(P(uv)) / ((lambda1 lambda2)^{n/2} S^-(u) S^-(v))
  double nonlinear = 0.0;  // the same with Box^{-1} P(u Box v)
};

/// S-norm proxies: upper bounds in the numerators, lower bounds in the denominators.
inline DivisionRatios division_ratios(const TimedField& u, const TimedField& v, const SpaceTimeField& box_v,
                                      double lambda0, double lambda1, double lambda2, bool nonlinear) {
  const double n = u.value.grid().dimension();
  const auto scale = DyadicScale::of(lambda0);
  const double su = s_norm_proxy(u.value, u.velocity).s_norm.lower;
  const double sv = s_norm_proxy(v.value, v.velocity).s_norm.lower;
  const double denominator = std::pow(lambda1 * lambda2, 0.5 * n) * su * sv;
  if (denominator == 0.0) return {};
  const double weight = std::pow(lambda0, 0.5 * n);
  DivisionRatios out;
  const auto piece = littlewood_paley(product(u, v), scale);
  out.algebra = weight * s_norm_proxy(piece.value, piece.velocity).s_norm.upper / denominator;
  if (nonlinear) {
    auto forcing = pointwise_product(u.value, box_v);
    for (auto& snapshot : forcing.snapshots()) snapshot = littlewood_paley(snapshot, scale);
    const auto solution = duhamel(forcing);
    out.nonlinear = weight * s_norm_proxy(solution.value, solution.velocity).s_norm.upper / denominator;
  }
  return out;
}

/// Product and Box^{-1}-product bounds over dyadic triples for truncated free waves.
inline EstimateReport check_division(const SamplingSpec& spec, const DivisionOptions& options = {}) {
  const FrequencyGrid grid(spec.dimension, options.points, options.period);
  const TimeGrid time(options.start, options.dt, options.time_samples);
  for (double lambda : options.scales)
    if (4.0 * lambda > grid.nyquist()) throw RangeError("product of scale " + std::to_string(lambda) + " aliases on the grid");
  EstimateReport report;
  report.id = "division";
  report.bracket = options.bracket;
  report.parameters = {{"dimension", spec.dimension},
                       {"points", static_cast<double>(options.points)},
                       {"time_samples", static_cast<double>(options.time_samples)},
                       {"dt", options.dt},
                       {"trials_per_triple", static_cast<double>(spec.samples)},
                       {"seed", static_cast<double>(spec.seed)}};
  std::vector<std::array<double, 3>> triples;
  for (double l0 : options.scales)
    for (double l1 : options.scales)
      for (double l2 : options.scales) triples.push_back({l0, l1, l2});
  const std::size_t per = spec.samples;
  const auto results = parallel_map<DivisionRatios>(triples.size() * per, [&](std::size_t job) {
    const auto [l0, l1, l2] = triples[job / per];
    RandomStream rng(spec.seed, job);
    const auto u = banded_free_wave(grid, time, l1, rng);
    const auto [v, box_v] = damped_wave(banded_free_wave(grid, time, l2, rng));
    return division_ratios(u, v, box_v, l0, l1, l2, options.nonlinear);
  });
  std::vector<double> algebra, nonlinear;
  for (std::size_t t = 0; t < triples.size(); ++t) {
    std::vector<double> row;
    for (std::size_t k = 0; k < per; ++k) {
      const auto& r = results[t * per + k];
      row.push_back(r.algebra);
      algebra.push_back(r.algebra);
      if (options.nonlinear) {
        row.push_back(r.nonlinear);
        nonlinear.push_back(r.nonlinear);
      }
    }
    report.ratios.insert(report.ratios.end(), row.begin(), row.end());
    const auto& [l0, l1, l2] = triples[t];
    report.table.push_back({dyadic_label({l0, l1, l2}), {l0, l1, l2}, RatioStats::of(row), true});
  }
  report.parameters["algebra_max"] = RatioStats::of(algebra).max;
  if (options.nonlinear) report.parameters["nonlinear_max"] = RatioStats::of(nonlinear).max;
  report.summarize();
  return report;
}

}  // namespace wmlab
