// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "wmlab/lab.hpp"
#include "wmlab/multipliers.hpp"
#include "wmlab/random.hpp"
#include "wmlab/variation.hpp"
#include "wmlab/wavemaps.hpp"

using namespace wmlab;
using std::numbers::pi;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string sci(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", x);
  return buffer;
}

SpatialField vector_field(const FrequencyGrid& grid, const std::function<std::array<double, 3>(const Frequency&)>& fn) {
  SpatialField out(grid, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto v = fn(grid.position(i));
    for (std::size_t c = 0; c < 3; ++c) out.at(c, i) = v[c];
  }
  return out;
}

SpatialField equator(const FrequencyGrid& grid, double k, double w, double t) {
  return vector_field(grid, [&](const Frequency& x) {
    return std::array<double, 3>{std::cos(k * x[0] - w * t), std::sin(k * x[0] - w * t), 0.0};
  });
}

SpatialField equator_velocity(const FrequencyGrid& grid, double k, double w, double t) {
  return vector_field(grid, [&](const Frequency& x) {
    return std::array<double, 3>{w * std::sin(k * x[0] - w * t), -w * std::cos(k * x[0] - w * t), 0.0};
  });
}

CauchyData small_data(const FrequencyGrid& grid, RandomStream& rng, double amplitude, long band = 3) {
  auto f = random_band_limited(grid, 3, band, rng, true, true);
  auto g = random_band_limited(grid, 3, band, rng, true, true);
  f *= Complex{amplitude / std::sqrt(f.squared_sum() / static_cast<double>(grid.size())), 0.0};
  g *= Complex{amplitude / std::sqrt(g.squared_sum() / static_cast<double>(grid.size())), 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) f.at(2, i) += 1.0;
  return sphere_constrain(f, g);
}

SpaceTimeField random_trigonometric(const FrequencyGrid& grid, const TimeGrid& time, RandomStream& rng) {
  std::vector<std::tuple<long, long, long, Complex>> terms;
  for (int n = 0; n < 6; ++n)
    terms.emplace_back(static_cast<long>(rng.index(7)) - 3, static_cast<long>(rng.index(7)) - 3,
                       static_cast<long>(rng.index(7)) - 3, rng.complex_normal());
  const double scale = 2.0 * pi / grid.period();
  return sample_space_time(time, grid, [&](double t, const Frequency& x) {
    Complex total{0.0, 0.0};
    for (const auto& [m, k0, k1, c] : terms)
      total += c * std::polar(1.0, static_cast<double>(m) * t +
                                       scale * (static_cast<double>(k0) * x[0] + static_cast<double>(k1) * x[1]));
    return total;
  });
}

const FrequencyGrid tiny_grid(1, 4, 4.0);

SpatialField random_field(RandomStream& rng) {
  SpatialField f(tiny_grid, 1);
  for (auto& v : f.values()) v = rng.complex_normal();
  return f;
}

SpaceTimeField random_step_series(RandomStream& rng, std::size_t samples, double dt, double zero_start_chance) {
  std::vector<SpatialField> values;
  for (std::size_t j = 0; j < samples; ++j) {
    if (j == 0 && rng.uniform() < zero_start_chance) values.push_back(SpatialField(tiny_grid, 1));
    else if (j > 0 && rng.uniform() < 0.4) values.push_back(values.back());
    else values.push_back(random_field(rng));
  }
  return SpaceTimeField(TimeGrid(0.0, dt, samples), std::move(values));
}

/// Maximum over every subset of sample indices with at least two points.
double exhaustive_variation(const SpaceTimeField& series, double p) {
  const std::size_t m = series.samples();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double total = 0.0;
    long previous = -1;
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask >> j & 1)) continue;
      if (previous >= 0) total += std::pow(l2_distance(series[static_cast<std::size_t>(previous)], series[j]), p);
      previous = static_cast<long>(j);
    }
    best = std::max(best, total);
  }
  return std::pow(best, 1.0 / p);
}

double relative_gap(const SpaceTimeField& a, const SpaceTimeField& b) {
  double diff = 0.0, base = 0.0;
  for (std::size_t j = 0; j < a.samples(); ++j) {
    diff += std::pow(l2_distance(a[j], b[j]), 2);
    base += std::pow(l2_norm(b[j]), 2);
  }
  return std::sqrt(diff / std::max(base, 1e-300));
}

std::string describe(const EstimateReport& report) {
  std::string text = report.id + ": ratios [" + sci(report.stats.min) + ", " + sci(report.stats.max) + "] in [" +
                     sci(report.bracket.lower) + ", " + sci(report.bracket.upper) + "], " +
                     std::to_string(report.ratios.size()) + " samples, " + std::to_string(report.violations) +
                     " violations";
  for (const auto& c : report.conditions) text += ", " + c.name + " " + sci(c.value) + " (limit " + sci(c.limit) + ")";
  if (report.slope) text += ", slope residual " + sci(report.slope->residual);
  return text;
}

Outcome from_reports(const std::vector<EstimateReport>& reports) {
  Outcome out{true, ""};
  for (const auto& r : reports) {
    out.passed = out.passed && r.pass();
    out.detail += (out.detail.empty() ? "" : "; ") + describe(r);
  }
  return out;
}

Outcome equator_oracle() {
  const FrequencyGrid grid(2, 64, 2.0 * pi);
  const double horizon = 1.0, dt = 1e-3;
  double worst = 0.0, slowest = 0.0;
  for (const auto& [k, w] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {2.0, 1.0}, {1.0, 0.0}}) {
    const auto start = std::chrono::steady_clock::now();
    const CauchyData data{equator(grid, k, w, 0.0), equator_velocity(grid, k, w, 0.0)};
    const auto trajectory = evolve(data, horizon, dt, {.scheme = Scheme::LawsonRK4, .record_stride = 100});
    for (std::size_t j = 0; j < trajectory.time().samples(); ++j)
      worst = std::max(worst, l2_distance(trajectory.phi[j], equator(grid, k, w, trajectory.time().time(j))));
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return {worst < 1e-6 && slowest < 60.0, "max L2 error over (k,w) in {(1,2),(2,1),(1,0)} on [0,1]: " + sci(worst) +
                                               " (limit 1e-6), slowest case " + sci(slowest) + " s (limit 60 s)"};
}

Outcome null_identity() {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const TimeGrid time(0.0, 2.0 * pi / 32.0, 32);
  RandomStream rng(101);
  double random_worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_trigonometric(grid, time, rng);
    const auto v = random_trigonometric(grid, time, rng);
    random_worst = std::max(random_worst, null_identity_residual(u, v));
  }
  const TimeGrid fine(0.0, 2.0 * pi / 64.0, 64);
  const auto u = sample_space_time(fine, grid, [](double t, const Frequency& x) { return std::polar(1.0, t + x[0]); });
  const auto v = sample_space_time(fine, grid, [](double t, const Frequency& x) { return std::polar(1.0, t - x[0]); });
  const double plane = null_identity_residual(u, v);
  return {random_worst < 1e-8 && plane < 1e-10,
          "100 random fields max " + sci(random_worst) + " (limit 1e-8), plane-wave pair " + sci(plane) +
              " (limit 1e-10)"};
}

Outcome conservation() {
  const FrequencyGrid grid(2, 64, 2.0 * pi);
  double drift = 0.0, constraint = 0.0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    RandomStream rng(31, trial);
    const auto trajectory = evolve(small_data(grid, rng, 1e-2), 1.0, 1e-2);
    const double initial = trajectory.diagnostics.front().energy;
    for (const auto& d : trajectory.diagnostics) {
      drift = std::max(drift, std::abs(d.energy - initial) / initial);
      constraint = std::max(constraint, d.constraint);
    }
  }
  return {drift < 1e-6 && constraint < 1e-6,
          "20 data sets, energy drift " + sci(drift) + ", sup ||phi|-1| " + sci(constraint) + " (limits 1e-6)"};
}

Outcome variation_exactness() {
  std::size_t mismatches = 0, comparisons = 0;
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    RandomStream rng(41, trial);
    const std::size_t m = 2 + trial % 11;
    const auto series = random_step_series(rng, m, 0.1, 0.3);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      ++comparisons;
      if (p_variation(series, p) != exhaustive_variation(series, p)) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(comparisons) + " comparisons for M in 2..12, " + std::to_string(mismatches) +
                               " mismatches"};
}

Outcome duality() {
  SamplingSpec spec;
  spec.samples = 1000;
  spec.seed = 51;
  return from_reports({check_duality(spec)});
}

Outcome modulation_conjugation() {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const TimeGrid time(-0.5, 0.05, 64);
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    RandomStream rng(61, trial);
    SpaceTimeField u(time, grid, 1);
    for (std::size_t j = 0; j < time.samples(); ++j) u[j] = random_band_limited(grid, 1, 4, rng);
    const double d = std::vector<double>{2.0, 4.0, 8.0}[trial % 3];
    for (auto sign : {ModulationSign::Plus, ModulationSign::Minus})
      for (auto taper : {Taper::None, Taper::Hann}) {
        const auto conjugated = modulation_band(u, d, sign, Comparator::Approx, taper);
        const auto direct = modulation_band_direct(u, d, sign, Comparator::Approx, taper);
        worst = std::max(worst, relative_gap(direct, conjugated));
      }
  }
  return {worst < 1e-10, "50 fields, both signs, max relative gap " + sci(worst) + " (limit 1e-10)"};
}

Outcome increment_inequality() {
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    RandomStream rng(71, trial);
    const std::size_t m = 4 + rng.index(20);
    const double dt = rng.uniform(0.05, 1.5);
    const auto g = random_step_series(rng, m, dt, 0.0);
    const double p = 1.0 + 3.0 * rng.uniform();
    const double s = rng.uniform(-3.0, 3.0);
    std::vector<std::size_t> points;
    for (std::size_t j = 0; j < m; ++j)
      if (rng.uniform() < 0.5) points.push_back(j);
    if (points.empty()) points.push_back(rng.index(m));
    const Partition partition(g.time(), points);
    const double bound = 2.0 * (1.0 + std::abs(s)) * std::pow(p_variation(g, p, Anchor::Anchored), p);
    const double sum = increment_sum(g, s, p, partition);
    if (bound > 0.0) worst = std::max(worst, sum / bound);
    if (sum > bound * (1.0 + 1e-12)) ++violations;
  }
  return {violations == 0, "500 triples, " + std::to_string(violations) + " violations, max sum/bound " + sci(worst)};
}

Outcome bilinear_free() {
  SamplingSpec spec;
  spec.samples = 50;
  spec.seed = 81;
  return from_reports({check_bilinear_free(spec)});
}

Outcome bilinear_atomic() {
  SamplingSpec spec;
  spec.samples = 50;
  spec.seed = 91;
  return from_reports({check_bilinear_atomic(spec, 2.0, 2.0)});
}

Outcome resonance() {
  SamplingSpec spec;
  spec.seed = 101;
  ResonanceOptions options;
  options.per_cell = 10000;
  return from_reports({check_resonance(spec, options), check_resonance_lower(spec, options)});
}

Outcome besov() {
  SamplingSpec spec;
  spec.samples = 50;
  spec.seed = 111;
  return from_reports({check_besov(spec)});
}

Outcome picard_agreement() {
  const FrequencyGrid grid(2, 64, 2.0 * pi);
  const TimeGrid time(0.0, 0.01, 51);
  RandomStream rng(121);
  const auto data = small_data(grid, rng, 1e-2);
  const auto run = picard_iterate(data, time, 12, 1e-14);
  const auto reference = evolve(data, 0.5, 0.0025, {.scheme = Scheme::LawsonRK4, .record_stride = 4});
  const double distance = sup_l2_distance(run.solution.phi, reference.phi);
  const double contraction = run.contraction();
  return {distance < 1e-4 && !run.ratios.empty() && contraction < 1.0,
          std::to_string(run.differences.size()) + " iterations, sup_t L2 distance " + sci(distance) +
              " (limit 1e-4), contraction " + sci(contraction) + " (limit 1)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"equator-oracle", 180.0, equator_oracle},
      {"null-identity", 10.0, null_identity},
      {"conservation", 300.0, conservation},
      {"variation-exhaustive", 30.0, variation_exactness},
      {"duality", 30.0, duality},
      {"modulation-conjugation", 60.0, modulation_conjugation},
      {"increment-inequality", 60.0, increment_inequality},
      {"bilinear-free", 600.0, bilinear_free},
      {"bilinear-atomic-slope", 900.0, bilinear_atomic},
      {"resonance", 120.0, resonance},
      {"besov", 300.0, besov},
      {"picard-evolve", 300.0, picard_agreement},
  };
  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool passed = outcome.passed && seconds < criterion.time_limit;
    if (!passed) ++failures;
    std::printf("%s %s: %s [%.1f s, limit %.0f s]\n", passed ? "PASS" : "FAIL", criterion.name.c_str(),
                outcome.detail.c_str(), seconds, criterion.time_limit);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
