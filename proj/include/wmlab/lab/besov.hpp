#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "wmlab/fourier/io.hpp"
#include "wmlab/fourier/norms.hpp"
#include "wmlab/lab/parallel.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/lab/sampling.hpp"
#include "wmlab/multipliers/modulation.hpp"
#include "wmlab/variation/p_variation.hpp"

namespace wmlab {

/// |u|_{V^p} / (d^{1/p} ||u||_{L^p L^2}); nothing for the zero field.
inline std::optional<double> besov_ratio(const SpaceTimeField& u, double p, double d) {
  const double denominator = std::pow(d, 1.0 / p) * mixed_norm(u, p);
  if (denominator == 0.0) return std::nullopt;
  return p_variation(u, p) / denominator;
}

struct BesovOptions {
  std::size_t points = 8;
  double period = 2.0 * std::numbers::pi;
  long band = 2;
  std::size_t time_samples = 512;
  double dt = 0.02;
  std::vector<double> modulations{2.0, 4.0, 8.0, 16.0};
  std::vector<double> exponents{2.0, 3.0};
  Bracket bracket{};
};

/// V^p against d^{1/p} L^p L^2 for temporally banded random fields, per (p, d) cell.
inline EstimateReport check_besov(const SamplingSpec& spec, const BesovOptions& options = {}) {
  const FrequencyGrid grid(spec.dimension, options.points, options.period);
  const TimeGrid time(0.0, options.dt, options.time_samples);
  for (double d : options.modulations) require_temporal_scale(time, 0.5 * d);
  EstimateReport report;
  report.id = "besov";
  report.bracket = options.bracket;
  report.parameters = {{"dimension", spec.dimension},
                       {"points", static_cast<double>(options.points)},
                       {"time_samples", static_cast<double>(options.time_samples)},
                       {"dt", options.dt},
                       {"fields_per_cell", static_cast<double>(spec.samples)},
                       {"seed", static_cast<double>(spec.seed)}};
  const std::size_t cells = options.exponents.size() * options.modulations.size();
  const std::size_t per = spec.samples;
  const auto ratios = parallel_map<double>(cells * per, [&](std::size_t job) {
    const std::size_t cell = job / per;
    const double p = options.exponents[cell / options.modulations.size()];
    const double d = options.modulations[cell % options.modulations.size()];
    RandomStream rng(spec.seed, job);
    const auto u = temporal_band(random_space_time(time, grid, options.band, rng), d);
    return besov_ratio(u, p, d).value_or(NAN);
  });
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const double p = options.exponents[cell / options.modulations.size()];
    const double d = options.modulations[cell % options.modulations.size()];
    std::vector<double> row;
    for (std::size_t k = 0; k < per; ++k)
      if (!std::isnan(ratios[cell * per + k])) row.push_back(ratios[cell * per + k]);
    report.ratios.insert(report.ratios.end(), row.begin(), row.end());
    report.table.push_back({"p=" + format_real(p) + " d=" + dyadic_label({d}), {p, d}, RatioStats::of(row), !row.empty()});
  }
  report.summarize();
  return report;
}

}  // namespace wmlab
