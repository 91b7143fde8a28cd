#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wmlab/lab/parallel.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/multipliers/spatial.hpp"
#include "wmlab/random.hpp"

namespace wmlab {

/// Two space-time frequencies (tau, xi) and (tau', eta).
struct ResonanceSample {
  double tau = 0.0;
  Frequency xi{0.0, 0.0, 0.0};
  double tau_prime = 0.0;
  Frequency eta{0.0, 0.0, 0.0};
};

struct ResonanceGeometry {
  double xi_norm = 0.0;
  double eta_norm = 0.0;
  double sum_norm = 0.0;
  double first_modulation = 0.0;   // ||tau| - |xi||
  double second_modulation = 0.0;  // ||tau'| - |eta||
  double output_modulation = 0.0;  // ||tau + tau'| - |xi + eta||
  double pair_angle = 0.0;         // angle(sgn(tau) xi, sgn(tau') eta)
  double first_angle = 0.0;        // angle(sgn(tau+tau')(xi+eta), sgn(tau) xi)
  double second_angle = 0.0;       // angle(sgn(tau+tau')(xi+eta), sgn(tau') eta)

  double angle_sum() const { return pair_angle + first_angle + second_angle; }
};

namespace detail {

inline double norm3(const Frequency& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

inline Frequency scaled(const Frequency& v, double s) { return {s * v[0], s * v[1], s * v[2]}; }

inline double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

/// Uniform direction in the first `dimension` coordinates.
inline Frequency random_direction(int dimension, RandomStream& rng) {
  while (true) {
    Frequency v{0.0, 0.0, 0.0};
    for (int a = 0; a < dimension; ++a) v[static_cast<std::size_t>(a)] = rng.normal();
    const double r = norm3(v);
    if (r > 1e-12) return scaled(v, 1.0 / r);
  }
}

/// x lies in [scale/2, 2 scale].
inline bool comparable(double x, double scale) { return x >= 0.5 * scale && x <= 2.0 * scale; }

}  // namespace detail

inline ResonanceGeometry resonance_geometry(const ResonanceSample& s) {
  const Frequency sum{s.xi[0] + s.eta[0], s.xi[1] + s.eta[1], s.xi[2] + s.eta[2]};
  const double st = detail::sign_of(s.tau);
  const double sp = detail::sign_of(s.tau_prime);
  const double so = detail::sign_of(s.tau + s.tau_prime);
  ResonanceGeometry g;
  g.xi_norm = detail::norm3(s.xi);
  g.eta_norm = detail::norm3(s.eta);
  g.sum_norm = detail::norm3(sum);
  g.first_modulation = std::abs(std::abs(s.tau) - g.xi_norm);
  g.second_modulation = std::abs(std::abs(s.tau_prime) - g.eta_norm);
  g.output_modulation = std::abs(std::abs(s.tau + s.tau_prime) - g.sum_norm);
  const auto a = detail::scaled(s.xi, st);
  const auto b = detail::scaled(s.eta, sp);
  const auto c = detail::scaled(sum, so);
  g.pair_angle = angle_between(a, b);
  g.first_angle = angle_between(c, a);
  g.second_angle = angle_between(c, b);
  return g;
}

/// angle(sgn(tau) xi, sgn(tau') eta) / (d lambda0/(lambda1 lambda2))^{1/2}.
inline double resonance_ratio(const ResonanceGeometry& g, double lambda0, double lambda1, double lambda2, double d) {
  return g.pair_angle / std::sqrt(d * lambda0 / (lambda1 * lambda2));
}

/// The ratio with every scale read off the sample itself.
inline double resonance_ratio(const ResonanceSample& s) {
  const auto g = resonance_geometry(s);
  return resonance_ratio(g, g.sum_norm, g.xi_norm, g.eta_norm, g.output_modulation);
}

/// One dyadic cell: |xi+eta| ~ lambda0, |xi| ~ lambda1, |eta| ~ lambda2, output modulation ~ d.
struct ResonanceCell {
  double lambda0 = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  std::vector<double> modulations;  // dyadic d values drawn uniformly per attempt
};

enum class ResonanceRegime {
  Full,   // ||tau|-|xi||, ||tau'|-|eta|| <= d/separation and output modulation in [d/2, 2d]
  Lower,  // all three modulations <= d
};

struct ResonanceDraw {
  std::vector<ResonanceSample> samples;
  std::vector<double> modulations;
  std::size_t attempts = 0;
};

/// Rejection sampler. Draws |xi| and |xi + eta| in their shells and |eta| from the part of its shell allowed by
/// the triangle inequality, then the tau offsets and signs; rejects on the output modulation.
inline ResonanceDraw sample_resonance(const ResonanceCell& cell, ResonanceRegime regime, int dimension,
                                      double separation, std::size_t target, std::size_t budget, RandomStream& rng) {
  ResonanceDraw draw;
  while (draw.samples.size() < target && draw.attempts < budget) {
    ++draw.attempts;
    const double d = cell.modulations[rng.index(cell.modulations.size())];
    const double r1 = rng.uniform(0.5 * cell.lambda1, 2.0 * cell.lambda1);
    const double r0 = rng.uniform(0.5 * cell.lambda0, 2.0 * cell.lambda0);
    const double lo = std::max(0.5 * cell.lambda2, std::abs(r1 - r0));
    const double hi = std::min(2.0 * cell.lambda2, r1 + r0);
    if (!(lo < hi)) continue;
    const double r2 = rng.uniform(lo, hi);
    const double slack = regime == ResonanceRegime::Full ? d / separation : d;
    const double a1 = r1 + rng.uniform(-slack, slack);
    const double a2 = r2 + rng.uniform(-slack, slack);
    if (a1 < 0.0 || a2 < 0.0) continue;
    const double tau = rng.sign() * a1;
    const double tau_prime = rng.sign() * a2;
    const double out = std::abs(std::abs(tau + tau_prime) - r0);
    if (regime == ResonanceRegime::Full ? (out < 0.5 * d || out > 2.0 * d) : out > d) continue;
    const double cosine = std::clamp((r0 * r0 - r1 * r1 - r2 * r2) / (2.0 * r1 * r2), -1.0, 1.0);
    const auto e = detail::random_direction(dimension, rng);
    auto f = detail::random_direction(dimension, rng);
    const double along = f[0] * e[0] + f[1] * e[1] + f[2] * e[2];
    for (std::size_t a = 0; a < 3; ++a) f[a] -= along * e[a];
    const double fn = detail::norm3(f);
    if (fn < 1e-9) continue;
    const double sine = std::sqrt(1.0 - cosine * cosine);
    Frequency eta{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < 3; ++a) eta[a] = r2 * (cosine * e[a] + sine * f[a] / fn);
    draw.samples.push_back({tau, detail::scaled(e, r1), tau_prime, eta});
    draw.modulations.push_back(d);
  }
  return draw;
}

struct ResonanceOptions {
  std::vector<double> scales{1.0, 2.0, 4.0, 8.0};
  std::vector<double> high_scales{1.0, 32.0, 64.0, 128.0};
  std::size_t per_cell = 10000;
  std::size_t budget = 1000000;
  double separation = 32.0;          // a << b in a hypothesis means a <= b/separation
  double conclusion_separation = 4.0;  // a << b in a conclusion means a <= b/conclusion_separation
  Bracket bracket{};
  Bracket upper_bracket = Bracket::one_sided(20.0);
};

namespace detail {

inline std::vector<double> dyadic_between(double lo, double hi) {
  std::vector<double> out;
  for (double d = lo; d <= hi * (1.0 + 1e-12); d *= 2.0) out.push_back(d);
  return out;
}

inline std::vector<ResonanceCell> resonance_cells(const std::vector<double>& scales) {
  std::vector<ResonanceCell> cells;
  for (double l0 : scales)
    for (double l1 : scales)
      for (double l2 : scales) cells.push_back({l0, l1, l2, {}});
  return cells;
}

}  // namespace detail

/// Angle-size law on the resonant set for d <= mu, plus the structural claims of the d >> mu branch.
inline EstimateReport check_resonance(const SamplingSpec& spec, const ResonanceOptions& options = {}) {
  EstimateReport report;
  report.id = "resonance";
  report.bracket = options.bracket;
  report.parameters = {{"dimension", spec.dimension},         {"per_cell", static_cast<double>(options.per_cell)},
                       {"budget", static_cast<double>(options.budget)}, {"separation", options.separation},
                       {"conclusion_separation", options.conclusion_separation},
                       {"seed", static_cast<double>(spec.seed)}};

  auto low = detail::resonance_cells(options.scales);
  for (auto& cell : low) {
    const double mu = std::min({cell.lambda0, cell.lambda1, cell.lambda2});
    cell.modulations = detail::dyadic_between(mu / 8.0, mu);
  }
  struct LowResult {
    std::vector<double> ratios;
    double upper = 0.0;
    std::size_t attempts = 0;
  };
  const auto low_results = parallel_map<LowResult>(low.size(), [&](std::size_t i) {
    RandomStream rng(spec.seed, i);
    const auto& cell = low[i];
    const auto draw = sample_resonance(cell, ResonanceRegime::Full, spec.dimension, options.separation,
                                       options.per_cell, options.budget, rng);
    LowResult result;
    result.attempts = draw.attempts;
    for (std::size_t k = 0; k < draw.samples.size(); ++k) {
      const auto g = resonance_geometry(draw.samples[k]);
      const double d = draw.modulations[k];
      result.ratios.push_back(resonance_ratio(g, cell.lambda0, cell.lambda1, cell.lambda2, d));
      result.upper = std::max({result.upper, g.first_angle / std::sqrt(d * cell.lambda2 / (cell.lambda0 * cell.lambda1)),
                               g.second_angle / std::sqrt(d * cell.lambda1 / (cell.lambda0 * cell.lambda2))});
    }
    return result;
  });

  double upper = 0.0;
  std::size_t infeasible = 0;
  for (std::size_t i = 0; i < low.size(); ++i) {
    const auto& r = low_results[i];
    const auto& cell = low[i];
    report.ratios.insert(report.ratios.end(), r.ratios.begin(), r.ratios.end());
    upper = std::max(upper, r.upper);
    TableRow row{"low " + dyadic_label({cell.lambda0, cell.lambda1, cell.lambda2}),
                 {cell.lambda0, cell.lambda1, cell.lambda2}, RatioStats::of(r.ratios), !r.ratios.empty()};
    if (r.ratios.empty()) {
      ++infeasible;
      report.notes.push_back(row.label + ": no feasible sample in " + std::to_string(r.attempts) + " attempts");
    } else if (r.ratios.size() < options.per_cell) {
      report.notes.push_back(row.label + ": " + std::to_string(r.ratios.size()) + " samples within budget");
    }
    report.table.push_back(std::move(row));
  }
  report.require("upper_angle_ratio_max", upper, options.upper_bracket.upper, options.upper_bracket.contains(upper));

  std::vector<ResonanceCell> high;
  for (auto cell : detail::resonance_cells(options.high_scales)) {
    const double mu = std::min({cell.lambda0, cell.lambda1, cell.lambda2});
    const double top = std::max({cell.lambda0, cell.lambda1, cell.lambda2});
    cell.modulations = detail::dyadic_between(options.separation * mu, 8.0 * top);
    if (!cell.modulations.empty()) high.push_back(cell);
  }
  struct HighResult {
    std::size_t feasible = 0;
    std::size_t broken = 0;
  };
  const auto high_results = parallel_map<HighResult>(high.size(), [&](std::size_t i) {
    RandomStream rng(spec.seed, low.size() + i);
    const auto& cell = high[i];
    const auto draw = sample_resonance(cell, ResonanceRegime::Full, spec.dimension, options.separation,
                                       options.per_cell, options.budget, rng);
    HighResult result;
    result.feasible = draw.samples.size();
    const double top = std::max({cell.lambda0, cell.lambda1, cell.lambda2});
    for (std::size_t k = 0; k < draw.samples.size(); ++k) {
      const auto& s = draw.samples[k];
      const bool same_sign = detail::sign_of(s.tau) == detail::sign_of(s.tau_prime);
      const bool wide = angle_between(s.xi, s.eta) >= options.bracket.lower;
      const bool top_scale = options.bracket.contains(draw.modulations[k] / top);
      const bool ordered = cell.lambda0 * options.conclusion_separation <= std::min(cell.lambda1, cell.lambda2) &&
                           options.bracket.contains(cell.lambda1 / cell.lambda2);
      if (!(same_sign && wide && top_scale && ordered)) ++result.broken;
    }
    return result;
  });
  std::size_t high_feasible = 0, broken = 0, high_cells = 0;
  for (std::size_t i = 0; i < high.size(); ++i) {
    const auto& cell = high[i];
    high_feasible += high_results[i].feasible;
    broken += high_results[i].broken;
    if (high_results[i].feasible > 0) ++high_cells;
    report.table.push_back({"high " + dyadic_label({cell.lambda0, cell.lambda1, cell.lambda2}),
                            {cell.lambda0, cell.lambda1, cell.lambda2},
                            RatioStats::of({}),
                            high_results[i].feasible > 0});
    report.table.back().stats.count = high_results[i].feasible;
  }
  report.parameters["low_infeasible_cells"] = static_cast<double>(infeasible);
  report.parameters["high_feasible_cells"] = static_cast<double>(high_cells);
  report.parameters["high_samples"] = static_cast<double>(high_feasible);
  report.require("high_branch_violations", static_cast<double>(broken), 0.0, broken == 0);
  report.require("high_branch_feasible_cells", static_cast<double>(high_cells), 1.0, high_cells >= 1);
  report.summarize();
  return report;
}

/// Angle sum against (d/mu)^{1/2} when all three modulations are at most d.
inline EstimateReport check_resonance_lower(const SamplingSpec& spec, const ResonanceOptions& options = {}) {
  EstimateReport report;
  report.id = "resonance-lower";
  report.bracket = options.upper_bracket;
  report.parameters = {{"dimension", spec.dimension},
                       {"per_cell", static_cast<double>(options.per_cell)},
                       {"budget", static_cast<double>(options.budget)},
                       {"seed", static_cast<double>(spec.seed)}};
  auto cells = detail::resonance_cells(options.scales);
  for (auto& cell : cells) {
    const double mu = std::min({cell.lambda0, cell.lambda1, cell.lambda2});
    cell.modulations = detail::dyadic_between(mu / 8.0, 8.0 * mu);
  }
  const auto results = parallel_map<std::vector<double>>(cells.size(), [&](std::size_t i) {
    RandomStream rng(spec.seed, i);
    const auto& cell = cells[i];
    const double mu = std::min({cell.lambda0, cell.lambda1, cell.lambda2});
    const auto draw = sample_resonance(cell, ResonanceRegime::Lower, spec.dimension, options.separation,
                                       options.per_cell, options.budget, rng);
    std::vector<double> ratios;
    for (std::size_t k = 0; k < draw.samples.size(); ++k)
      ratios.push_back(resonance_geometry(draw.samples[k]).angle_sum() / std::sqrt(draw.modulations[k] / mu));
    return ratios;
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    report.ratios.insert(report.ratios.end(), results[i].begin(), results[i].end());
    report.table.push_back({dyadic_label({cell.lambda0, cell.lambda1, cell.lambda2}),
                            {cell.lambda0, cell.lambda1, cell.lambda2}, RatioStats::of(results[i]),
                            !results[i].empty()});
    if (results[i].empty()) report.notes.push_back(report.table.back().label + ": no feasible sample");
  }
  report.summarize();
  return report;
}

}  // namespace wmlab
