#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wmlab/fourier/io.hpp"
#include "wmlab/lab/parallel.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/lab/sampling.hpp"
#include "wmlab/variation/pairing.hpp"

namespace wmlab {

/// |B(w,u)| / |w|_{V^q}; zero when w has no variation.
inline double duality_ratio(const StepFunction& w, const UpAtom& atom) {
  const double q = conjugate_exponent(atom.exponent());
  const double variation = p_variation(w, q);
  if (variation == 0.0) return 0.0;
  return std::abs(dual_pairing(w, atom.sample())) / variation;
}

/// Step function with increment J(f_k) = |f_k|^{p-2} f_k at the k-th jump of the atom, so that
/// B(w,u) = sum_k |f_k|^p = 1.
inline StepFunction aligned_step(const UpAtom& atom) {
  const double p = atom.exponent();
  const auto& step = atom.step();
  std::vector<SpatialField> values;
  SpatialField running = step.values().front().zeros_like();
  for (const auto& f : step.values()) {
    running += detail::duality_map(f, p);
    values.push_back(running);
  }
  return StepFunction(step.partition(), std::move(values));
}

struct DualityCheckOptions {
  std::size_t points = 8;
  double period = 2.0 * std::numbers::pi;
  long band = 2;
  std::size_t time_samples = 24;
  double dt = 0.1;
  std::size_t max_pieces = 6;
  std::vector<double> exponents{4.0 / 3.0, 2.0, 4.0};
  std::size_t lower_bound_trials = 10;  // atoms per p passed through up_lower_bound
  double slack = 1e-12;
  double atom_slack = 1e-10;
};

/// Zero-violation check of |B(w,u)| <= |w|_{V^q} on random atom/step pairs, and up_lower_bound(atom) <= 1.
inline EstimateReport check_duality(const SamplingSpec& spec, const DualityCheckOptions& options = {}) {
  const FrequencyGrid grid(spec.dimension, options.points, options.period);
  const TimeGrid time(0.0, options.dt, options.time_samples);
  EstimateReport report;
  report.id = "duality";
  report.bracket = Bracket::one_sided(1.0 + options.slack);
  report.parameters = {{"pairs_per_exponent", static_cast<double>(spec.samples)},
                       {"time_samples", static_cast<double>(options.time_samples)},
                       {"seed", static_cast<double>(spec.seed)}};
  const std::size_t per = spec.samples;
  const std::size_t count = options.exponents.size();
  const auto ratios = parallel_map<double>(count * per, [&](std::size_t job) {
    RandomStream rng(spec.seed, job);
    const double p = options.exponents[job / per];
    const auto atom = random_atom(time, grid, options.band, options.max_pieces, p, rng);
    const auto w = random_step(time, grid, options.band, options.max_pieces, rng);
    return duality_ratio(w, atom);
  });
  report.ratios = ratios;
  for (std::size_t e = 0; e < count; ++e) {
    const std::vector<double> row(ratios.begin() + static_cast<long>(e * per), ratios.begin() + static_cast<long>((e + 1) * per));
    report.table.push_back({"p=" + format_real(options.exponents[e]), {options.exponents[e]}, RatioStats::of(row), true});
  }
  const std::size_t trials = options.lower_bound_trials;
  const auto bounds = parallel_map<double>(count * trials, [&](std::size_t job) {
    RandomStream rng(spec.seed, count * per + job);
    const double p = options.exponents[job / trials];
    return up_lower_bound(random_atom(time, grid, options.band, options.max_pieces, p, rng).sample(), p);
  });
  const double worst = bounds.empty() ? 0.0 : *std::max_element(bounds.begin(), bounds.end());
  report.require("atom_lower_bound_max", worst, 1.0 + options.atom_slack, worst <= 1.0 + options.atom_slack);
  report.summarize();
  return report;
}

}  // namespace wmlab
