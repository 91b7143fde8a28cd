#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wmlab/lab/parallel.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/lab/sampling.hpp"
#include "wmlab/multipliers/modulation.hpp"
#include "wmlab/variation/p_variation.hpp"

namespace wmlab {

/// Largest sampled |u(t,x)|.
inline double sup_abs(const SpaceTimeField& u) {
  double best = 0.0;
  for (const auto& snapshot : u.snapshots())
    for (const auto& v : snapshot.values()) best = std::max(best, std::abs(v));
  return best;
}

/// Pointwise product of single-component fields.
inline SpaceTimeField pointwise_product(const SpaceTimeField& a, const SpaceTimeField& b) {
  a.require_same_shape(b);
  auto out = a.zeros_like();
  for (std::size_t j = 0; j < a.samples(); ++j) {
    const auto av = a[j].values();
    const auto bv = b[j].values();
    auto ov = out[j].values();
    for (std::size_t i = 0; i < av.size(); ++i) ov[i] = av[i] * bv[i];
  }
  return out;
}

/// Throws unless the temporal spectrum of u vanishes (relative 1e-12) wherever keep(|tau|) is false.
template <class Keep>
void require_temporal_support(const SpaceTimeField& u, Keep&& keep, const char* what) {
  SpectralHistory history(u);
  history.temporal_forward();
  double total = 0.0, outside = 0.0;
  for (std::size_t r = 0; r < u.samples(); ++r) {
    const double tau = std::abs(u.time().temporal_frequency(r));
    for (const auto& v : history.row(r)) {
      total += std::norm(v);
      if (!keep(tau)) outside += std::norm(v);
    }
  }
  if (outside > 1e-24 * total) throw PreconditionError(std::string(what) + " violates its temporal band");
}

/// ||f g||_{V^p} / (||f||_inf ||g||_{V^p}) for supp F_t f in (-1,1) and supp F_t g outside (-4,4).
inline double highlow_ratio(const SpaceTimeField& f, const SpaceTimeField& g, double p) {
  require_temporal_support(f, [](double tau) { return tau < 1.0; }, "low factor");
  require_temporal_support(g, [](double tau) { return tau > 4.0; }, "high factor");
  const double denominator = sup_abs(f) * vp_norm(g, p);
  if (denominator == 0.0) return 0.0;
  return vp_norm(pointwise_product(f, g), p) / denominator;
}

/// Lattice modes where the spectrum of any snapshot is nonzero.
inline std::vector<std::size_t> spatial_support(const SpaceTimeField& u, double tolerance = 1e-12) {
  std::vector<double> weight(u.grid().size(), 0.0);
  double top = 0.0;
  for (const auto& snapshot : u.snapshots()) {
    const auto spectrum = forward(snapshot);
    for (std::size_t i = 0; i < spectrum.points(); ++i) {
      weight[i] = std::max(weight[i], std::abs(spectrum.at(0, i)));
      top = std::max(top, weight[i]);
    }
  }
  std::vector<std::size_t> modes;
  for (std::size_t i = 0; i < weight.size(); ++i)
    if (weight[i] > tolerance * top) modes.push_back(i);
  return modes;
}

/// max over sampled pairs of |Phi(xi+eta) - Phi(xi) - Phi(eta)| for the cone phase.
inline double cone_phase_mismatch(const FrequencyGrid& grid, const std::vector<std::size_t>& first,
                                  const std::vector<std::size_t>& second) {
  double worst = 0.0;
  for (std::size_t i : first)
    for (std::size_t j : second) {
      const auto a = grid.frequency(i);
      const auto b = grid.frequency(j);
      const double sum = std::hypot(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
      worst = std::max(worst, std::abs(sum - grid.frequency_norm(i) - grid.frequency_norm(j)));
    }
  return worst;
}

/// Adapted form: ||uv||_{V^p_Phi} / (|m| ||u||_{V^p_Phi} ||v||_{V^p_Phi}) with Phi = |xi|, m the indicator of the
/// spectral supports and |m| = L^{-n/2} min(#supp)^{1/2} its discrete L^inf L^2 norm. The high factor must satisfy
/// supp F_t(e^{it Phi} u) outside (-4,4), and the phase mismatch must stay at most 1 on the supports.
inline double adapted_highlow_ratio(const SpaceTimeField& u, const SpaceTimeField& v, double p) {
  const auto phase = cone_phase(u.grid());
  const auto u_frame = adapted_conjugate(u, phase, WaveSign::Plus);
  const auto v_frame = adapted_conjugate(v, phase, WaveSign::Plus);
  require_temporal_support(u_frame, [](double tau) { return tau > 4.0; }, "high factor");
  const auto u_modes = spatial_support(u);
  const auto v_modes = spatial_support(v);
  if (cone_phase_mismatch(u.grid(), u_modes, v_modes) > 1.0)
    throw PreconditionError("phase mismatch exceeds 1 on the supports");
  const double multiplier = std::pow(u.grid().period(), -0.5 * u.grid().dimension()) *
                            std::sqrt(static_cast<double>(std::min(u_modes.size(), v_modes.size())));
  const double denominator = multiplier * vp_norm(u_frame, p) * vp_norm(v_frame, p);
  if (denominator == 0.0) return 0.0;
  return vp_norm(adapted_conjugate(pointwise_product(u, v), phase, WaveSign::Plus), p) / denominator;
}

struct HighLowOptions {
  std::size_t points = 8;
  double period = 2.0 * std::numbers::pi;
  double adapted_period = 8.0 * std::numbers::pi;
  long band = 2;
  long low_band = 1;  // lattice radius of the low factor on the adapted grid
  std::size_t time_samples = 256;
  double dt = 0.1;
  double p = 2.0;
  double constant = 4.0;  // declared C_hl
};

namespace detail {

/// Low factor: theta(2|tau|) band, supported in |tau| < 1.
inline SpaceTimeField low_temporal(const SpaceTimeField& w) { return temporal_band(w, 0.5, Comparator::AtMost); }

/// High factor: (1 - theta(|tau|/4)), vanishing for |tau| <= 4.
inline SpaceTimeField high_temporal(const SpaceTimeField& w) { return w - temporal_band(w, 4.0, Comparator::AtMost); }

}  // namespace detail

/// Plain and adapted high-low product bounds over random admissible pairs; C_hl is the declared bracket.
inline EstimateReport check_highlow(const SamplingSpec& spec, const HighLowOptions& options = {}) {
  const FrequencyGrid grid(spec.dimension, options.points, options.period);
  const FrequencyGrid wide(spec.dimension, options.points, options.adapted_period);
  const TimeGrid time(0.0, options.dt, options.time_samples);
  EstimateReport report;
  report.id = "highlow";
  report.bracket = Bracket::one_sided(options.constant);
  report.parameters = {{"dimension", spec.dimension},
                       {"points", static_cast<double>(options.points)},
                       {"time_samples", static_cast<double>(options.time_samples)},
                       {"dt", options.dt},
                       {"p", options.p},
                       {"C_hl", options.constant},
                       {"pairs", static_cast<double>(spec.samples)},
                       {"seed", static_cast<double>(spec.seed)}};
  const std::size_t per = spec.samples;
  const auto ratios = parallel_map<double>(2 * per, [&](std::size_t job) {
    RandomStream rng(spec.seed, job);
    if (job < per) {
      const auto f = detail::low_temporal(random_space_time(time, grid, options.band, rng));
      const auto g = detail::high_temporal(random_space_time(time, grid, options.band, rng));
      return highlow_ratio(f, g, options.p);
    }
    const auto phase = cone_phase(wide);
    const auto u = adapted_conjugate(detail::high_temporal(random_space_time(time, wide, options.band, rng)), phase,
                                     WaveSign::Minus);
    const auto v = adapted_conjugate(random_space_time(time, wide, options.low_band, rng), phase, WaveSign::Minus);
    return adapted_highlow_ratio(u, v, options.p);
  });
  const std::vector<double> plain(ratios.begin(), ratios.begin() + static_cast<long>(per));
  const std::vector<double> adapted(ratios.begin() + static_cast<long>(per), ratios.end());
  report.ratios = ratios;
  report.table.push_back({"plain", {}, RatioStats::of(plain), true});
  report.table.push_back({"adapted", {}, RatioStats::of(adapted), true});
  report.summarize();
  return report;
}

}  // namespace wmlab
