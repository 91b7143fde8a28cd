#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "wmlab/multipliers.hpp"
#include "wmlab/random.hpp"
#include "wmlab/variation.hpp"

using namespace wmlab;

namespace {

const FrequencyGrid tiny_grid(1, 4, 4.0);

SpatialField constant_field(const FrequencyGrid& grid, Complex value) {
  SpatialField f(grid, 1);
  for (auto& v : f.values()) v = value;
  return f;
}

SpatialField random_field(RandomStream& rng, const FrequencyGrid& grid = tiny_grid) {
  SpatialField f(grid, 1);
  for (auto& v : f.values()) v = rng.complex_normal();
  return f;
}

/// Series with repeated values, so that it is a genuine step function.
SpaceTimeField random_step_series(RandomStream& rng, std::size_t samples, double zero_start_chance = 0.3) {
  TimeGrid time(0.0, 0.1, samples);
  std::vector<SpatialField> values;
  for (std::size_t j = 0; j < samples; ++j) {
    if (j == 0 && rng.uniform() < zero_start_chance) values.push_back(SpatialField(tiny_grid, 1));
    else if (j > 0 && rng.uniform() < 0.4) values.push_back(values.back());
    else values.push_back(random_field(rng));
  }
  return SpaceTimeField(time, std::move(values));
}

/// Exhaustive search over every subset of sample indices with at least two points.
double brute_force_variation(const SpaceTimeField& series, double p) {
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

Partition random_partition(RandomStream& rng, const TimeGrid& time, std::size_t max_points) {
  std::vector<std::size_t> points;
  for (std::size_t j = 0; j < time.samples(); ++j)
    if (rng.uniform() < static_cast<double>(max_points) / static_cast<double>(time.samples())) points.push_back(j);
  if (points.empty()) points.push_back(rng.index(time.samples()));
  return Partition(time, points);
}

UpAtom random_atom(RandomStream& rng, const TimeGrid& time, double p) {
  auto partition = random_partition(rng, time, 5);
  std::vector<SpatialField> values;
  for (std::size_t k = 0; k < partition.size(); ++k) values.push_back(random_field(rng));
  return make_atom(partition, std::move(values), p);
}

StepFunction random_step(RandomStream& rng, const TimeGrid& time) {
  auto partition = random_partition(rng, time, 6);
  std::vector<SpatialField> values;
  for (std::size_t k = 0; k < partition.size(); ++k) values.push_back(random_field(rng));
  return StepFunction(partition, std::move(values));
}

}  // namespace

TEST(PVariation, ScalarSeries) {
  const std::vector<double> bump{0.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(p_variation(bump, 2.0), std::sqrt(2.0));
  const std::vector<double> alternating{0.0, 1.0, 0.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(p_variation(alternating, 1.0), 4.0);
  const std::vector<double> single{5.0};
  EXPECT_EQ(p_variation(single, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(p_variation(single, 2.0, Anchor::Anchored), 5.0);
}

TEST(PVariation, SingleJumpEveryExponent) {
  RandomStream rng(11);
  const auto f = random_field(rng);
  SpaceTimeField series(TimeGrid(0.0, 0.5, 6), tiny_grid, 1);
  for (std::size_t j = 3; j < 6; ++j) series[j] = f;
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) EXPECT_NEAR(p_variation(series, p), l2_norm(f), 1e-14 * l2_norm(f));
  EXPECT_NEAR(vp_norm(series, 2.0), 2.0 * l2_norm(f), 1e-13);
  EXPECT_EQ(vp_norm(series.zeros_like(), 2.0), 0.0);
}

TEST(PVariation, DynamicProgramMatchesExhaustiveSearch) {
  RandomStream rng(2024);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t m = 2 + rng.index(9);
    const auto series = random_step_series(rng, m);
    for (double p : {1.0, 1.5, 2.0, 3.0}) EXPECT_EQ(p_variation(series, p), brute_force_variation(series, p));
  }
}

TEST(PVariation, MaximizingChainAttainsValue) {
  RandomStream rng(5);
  const auto series = random_step_series(rng, 9);
  const auto result = p_variation_detail(series, 2.0);
  double total = 0.0;
  for (std::size_t k = 1; k < result.chain.size(); ++k)
    total += std::pow(l2_distance(series[result.chain[k - 1]], series[result.chain[k]]), 2.0);
  EXPECT_EQ(total, result.power_sum);
}

TEST(PVariation, MonotoneInExponentAndTriangle) {
  RandomStream rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = random_step_series(rng, 12);
    const auto v = random_step_series(rng, 12);
    double previous = std::numeric_limits<double>::infinity();
    for (double p : {1.0, 1.25, 2.0, 3.0, 6.0}) {
      const double value = p_variation(u, p);
      EXPECT_LE(value, previous * (1.0 + 1e-14));
      previous = value;
      EXPECT_LE(p_variation(u + v, p), (p_variation(u, p) + p_variation(v, p)) * (1.0 + 1e-14));
    }
  }
}

TEST(PVariation, VpNormIsSupPlusVariation) {
  RandomStream rng(8);
  const auto u = random_step_series(rng, 10);
  double sup = 0.0;
  for (std::size_t j = 0; j < u.samples(); ++j) sup = std::max(sup, l2_norm(u[j]));
  EXPECT_EQ(vp_norm(u, 2.0), sup + brute_force_variation(u, 2.0));
}

TEST(PVariation, VanishingStartBoundsSupByVariation) {
  RandomStream rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto u = random_step_series(rng, 10, 1.1);
    EXPECT_LE(vp_norm(u, 2.0), 2.0 * p_variation(u, 2.0) * (1.0 + 1e-14));
  }
}

TEST(PVariation, StepFunctionVariationIsAnchored) {
  RandomStream rng(10);
  const TimeGrid time(0.0, 0.1, 20);
  const auto w = random_step(rng, time);
  EXPECT_DOUBLE_EQ(p_variation(w, 2.0), p_variation(w.sample(), 2.0, Anchor::Anchored));
}

TEST(Partition, Invariants) {
  const TimeGrid time(0.0, 0.1, 5);
  EXPECT_THROW(Partition(time, {}), PreconditionError);
  EXPECT_THROW(Partition(time, {2, 2}), PreconditionError);
  EXPECT_THROW(Partition(time, {3, 1}), PreconditionError);
  EXPECT_THROW(Partition(time, {7}), RangeError);
  const Partition partition(time, {1, 3});
  EXPECT_FALSE(partition.interval_of(0).has_value());
  EXPECT_EQ(*partition.interval_of(2), 0u);
  EXPECT_EQ(*partition.interval_of(4), 1u);
}

TEST(Atoms, Normalization) {
  RandomStream rng(12);
  const TimeGrid time(0.0, 0.1, 8);
  const auto f = random_field(rng);
  const auto one = make_atom(Partition(time, {2}), {f}, 2.0);
  EXPECT_NEAR(l2_distance(one.step().values()[0], f * Complex{1.0 / l2_norm(f), 0.0}), 0.0, 1e-15);

  const auto two = make_atom(Partition(time, {1, 4}), {f, f * Complex{0.0, 1.0}}, 2.0);
  const double expected = 1.0 / (std::sqrt(2.0) * l2_norm(f));
  EXPECT_NEAR(l2_distance(two.step().values()[0], f * Complex{expected, 0.0}), 0.0, 1e-15);

  for (double p : {1.0, 4.0 / 3.0, 2.0, 4.0}) {
    const auto atom = random_atom(rng, time, p);
    EXPECT_NEAR(atom.step().lp_of_values(p), 1.0, 1e-12);
  }
  EXPECT_THROW(make_atom(Partition(time, {0, 3}), {f.zeros_like(), f.zeros_like()}, 2.0), DegenerateInputError);
}

TEST(Atoms, DecompositionSamplesLinearly) {
  RandomStream rng(13);
  const TimeGrid time(0.0, 0.1, 8);
  AtomicDecomposition decomposition;
  const auto a = random_atom(rng, time, 2.0);
  const auto b = random_atom(rng, time, 2.0);
  decomposition.add({2.0, 0.0}, a);
  decomposition.add({0.0, -1.0}, b);
  EXPECT_DOUBLE_EQ(decomposition.coefficient_sum(), 3.0);
  const auto direct = Complex{2.0, 0.0} * a.sample() + Complex{0.0, -1.0} * b.sample();
  const auto sampled = decomposition.sample();
  for (std::size_t j = 0; j < time.samples(); ++j) EXPECT_NEAR(l2_distance(sampled[j], direct[j]), 0.0, 1e-15);
}

TEST(DualPairing, OneJump) {
  RandomStream rng(14);
  const TimeGrid time(0.0, 0.1, 10);
  const auto u = random_step_series(rng, 10);
  const auto g = random_field(rng);
  const StepFunction w(Partition(time, {4}), {g});
  const Complex expected = inner_product(g, u[4]);
  EXPECT_NEAR(std::abs(dual_pairing(w, u) - expected), 0.0, 1e-14);
}

TEST(DualPairing, RefinementInvariant) {
  RandomStream rng(15);
  const TimeGrid time(0.0, 0.1, 12);
  const auto u = random_step_series(rng, 12);
  const auto g1 = random_field(rng);
  const auto g2 = random_field(rng);
  const StepFunction coarse(Partition(time, {2, 7}), {g1, g2});
  const StepFunction refined(Partition(time, {2, 5, 7, 9}), {g1, g1, g2, g2});
  EXPECT_NEAR(std::abs(dual_pairing(coarse, u) - dual_pairing(refined, u)), 0.0, 1e-14);
}

TEST(DualPairing, TwoJumpsAgainstAtom) {
  RandomStream rng(16);
  const TimeGrid time(0.0, 0.1, 12);
  const auto atom = make_atom(Partition(time, {3, 8}), {random_field(rng), random_field(rng)}, 2.0);
  const auto u = atom.sample();
  const auto a = random_field(rng);
  const auto b = random_field(rng);
  const StepFunction w(Partition(time, {1, 6}), {a, b});
  // Jumps at t_1 (u = 0 there) and t_6 (first atom value).
  const Complex expected = inner_product(a, u[1]) + inner_product(b - a, atom.step().values()[0]);
  EXPECT_NEAR(std::abs(dual_pairing(w, u) - expected), 0.0, 1e-14);
}

TEST(DualPairing, DualityInequalityOnAtoms) {
  RandomStream rng(17);
  const TimeGrid time(0.0, 0.1, 16);
  for (double p : {4.0 / 3.0, 2.0, 4.0}) {
    const double q = conjugate_exponent(p);
    for (int trial = 0; trial < 200; ++trial) {
      const auto atom = random_atom(rng, time, p);
      const auto w = random_step(rng, time);
      EXPECT_LE(std::abs(dual_pairing(w, atom.sample())), p_variation(w, q) + 1e-12);
    }
  }
}

TEST(UpBounds, OneJumpAtomIsAttained) {
  RandomStream rng(18);
  const TimeGrid time(0.0, 0.1, 16);
  const auto f = random_field(rng);
  SpaceTimeField u(time, tiny_grid, 1);
  for (std::size_t j = 5; j < 16; ++j) u[j] = f;
  for (double p : {4.0 / 3.0, 2.0, 4.0}) {
    EXPECT_NEAR(up_lower_bound(u, p), l2_norm(f), 1e-13);
    EXPECT_NEAR(atomic_upper_bound(u, p).value(), l2_norm(f), 1e-13);
  }
}

TEST(UpBounds, ZeroAndBudget) {
  RandomStream rng(19);
  const auto u = random_step_series(rng, 10);
  EXPECT_EQ(up_lower_bound(u.zeros_like(), 2.0), 0.0);
  EXPECT_EQ(up_lower_bound(u, 2.0, {.budget = 0}), 0.0);
  EXPECT_EQ(besov_sum(u.zeros_like(), 2.0).value, 0.0);
  EXPECT_THROW(up_lower_bound(u, 1.0), RangeError);
}

TEST(UpBounds, AtomsStayBelowOne) {
  RandomStream rng(20);
  const TimeGrid time(0.0, 0.1, 24);
  for (double p : {4.0 / 3.0, 2.0, 4.0})
    for (int trial = 0; trial < 10; ++trial) {
      const auto atom = random_atom(rng, time, p);
      const double lower = up_lower_bound(atom.sample(), p, {.budget = 48, .seed = static_cast<std::uint64_t>(trial)});
      EXPECT_LE(lower, 1.0 + 1e-10);
      EXPECT_GE(lower, 0.5);
    }
}

TEST(UpBounds, Sandwich) {
  RandomStream rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    const auto u = random_step_series(rng, 32);
    for (double p : {2.0, 3.0}) {
      const double lower = up_lower_bound(u, p, {.budget = 48});
      EXPECT_LE(lower, atomic_upper_bound(u, p).value() + 1e-10);
      EXPECT_LE(lower, besov_sum(u, p).constant * besov_sum(u, p).value + 1e-10);
    }
  }
}

TEST(UpBounds, SmoothOscillationSandwich) {
  const FrequencyGrid grid(1, 8, 2.0 * std::numbers::pi);
  const TimeGrid time(0.0, 0.02, 256);
  RandomStream rng(22);
  const auto f = random_band_limited(grid, 1, 3, rng, false, false);
  for (double d : {4.0, 16.0, 64.0}) {
    SpaceTimeField field(time, grid, 1);
    for (std::size_t j = 0; j < time.samples(); ++j) field[j] = f * std::polar(1.0, d * time.time(j));
    const auto besov = besov_sum(field, 2.0);
    const double lower = up_lower_bound(field, 2.0, {.budget = 64});
    const double atoms = atomic_upper_bound(field, 2.0).value();
    EXPECT_LE(lower, atoms);
    EXPECT_LE(lower, besov.constant * besov.value);
    RecordProperty("besov_over_norm_d" + std::to_string(static_cast<int>(d)), std::to_string(besov.value / l2_norm(f)));
  }
}

TEST(UpBounds, ConstantSeriesUsesLowestBand) {
  RandomStream rng(23);
  const TimeGrid time(0.0, 0.05, 64);
  const auto f = random_field(rng);
  SpaceTimeField u(time, tiny_grid, 1);
  for (std::size_t j = 0; j < time.samples(); ++j) u[j] = f;
  const auto besov = besov_sum(u, 2.0);
  ASSERT_GT(besov.terms.size(), 2u);
  EXPECT_GT(besov.terms.front(), 0.0);
  for (std::size_t k = 1; k < besov.terms.size(); ++k) EXPECT_LT(besov.terms[k], 1e-12 * besov.terms.front());
  const double expected = std::sqrt(besov.scales.front()) * mixed_norm(u, 2.0);
  EXPECT_NEAR(besov.value, expected, 1e-12 * expected);
  EXPECT_NEAR(besov.value / l2_norm(f), std::sqrt(besov.scales.front() * time.window_length()), 1e-12);
}

TEST(IncrementSum, Examples) {
  RandomStream rng(24);
  const TimeGrid time(0.0, 1.0, 8);
  const auto g = random_step_series(rng, 8);
  const SpaceTimeField g_unit(time, std::vector<SpatialField>(g.snapshots().begin(), g.snapshots().end()));
  EXPECT_EQ(increment_sum(g_unit, 0.0, 2.0, Partition::full(time)), 0.0);

  const auto f = random_field(rng);
  SpaceTimeField jump(time, tiny_grid, 1);
  for (std::size_t j = 4; j < 8; ++j) jump[j] = f;
  // Unit gaps; only t_4 sees the jump when s = 1.
  for (double p : {1.0, 2.0, 3.0})
    EXPECT_NEAR(increment_sum(jump, 1.0, p, Partition::full(time)), std::pow(l2_norm(f), p), 1e-12);
}

TEST(IncrementSum, KeyInequality) {
  RandomStream rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 4 + rng.index(20);
    auto g = random_step_series(rng, m, 0.0);
    const double dt = rng.uniform(0.05, 1.5);
    const SpaceTimeField series(TimeGrid(0.0, dt, m), std::vector<SpatialField>(g.snapshots().begin(), g.snapshots().end()));
    const double p = 1.0 + 3.0 * rng.uniform();
    const double s = rng.uniform(-3.0, 3.0);
    const auto partition = random_partition(rng, series.time(), m / 2 + 1);
    const double variation = p_variation(series, p, Anchor::Anchored);
    EXPECT_LE(increment_sum(series, s, p, partition), 2.0 * (1.0 + std::abs(s)) * std::pow(variation, p) * (1.0 + 1e-12));
  }
}

TEST(Convolution, ContractsVpNorm) {
  RandomStream rng(26);
  for (int trial = 0; trial < 30; ++trial) {
    const auto v = random_step_series(rng, 20);
    std::vector<double> kernel(1 + rng.index(6));
    double mass = 0.0;
    for (auto& k : kernel) mass += std::abs(k = rng.normal());
    for (auto& k : kernel) k /= mass;
    const long shift = static_cast<long>(rng.index(5)) - 2;
    const auto smoothed = time_convolution(v, kernel, shift);
    for (double p : {1.0, 2.0, 3.0})
      EXPECT_LE(vp_norm(smoothed, p, Anchor::Anchored), vp_norm(v, p, Anchor::Anchored) * (1.0 + 1e-10));
  }
}

TEST(Convolution, AtomImagesStayInUnitBall) {
  RandomStream rng(27);
  const TimeGrid time(0.0, 0.1, 24);
  for (int trial = 0; trial < 10; ++trial) {
    const auto atom = random_atom(rng, time, 2.0);
    const std::vector<double> kernel{0.25, 0.5, 0.25};
    const auto image = time_convolution(atom.sample(), kernel);
    EXPECT_LE(up_lower_bound(image, 2.0, {.budget = 48}), 2.0);
    EXPECT_LE(up_lower_bound(image, 2.0, {.budget = 48}), 1.0 + 1e-10);
  }
}

TEST(SNorm, FreeWaveProfilesAreConstant) {
  const FrequencyGrid grid(2, 16, 2.0 * std::numbers::pi);
  const TimeGrid time(0.0, 0.05, 41);
  RandomStream rng(28);
  const auto f = random_band_limited(grid, 1, 4, rng, true, true);
  SpaceTimeField u(time, grid, 1), ut(time, grid, 1);
  for (std::size_t j = 0; j < time.samples(); ++j) {
    const auto state = homogeneous_wave(f, f.zeros_like(), time.time(j));
    u[j] = state.value;
    ut[j] = state.velocity;
  }
  const auto proxy = s_norm_proxy(u, ut, {.budget = 16});
  EXPECT_FALSE(proxy.nonzero_mean);
  EXPECT_LT(proxy.minus.parameters.at("variation"), 1e-12 * l2_norm(f));
  EXPECT_LT(proxy.plus.parameters.at("variation"), 1e-12 * l2_norm(f));
  EXPECT_NEAR(proxy.minus.lower, l2_norm(f), 1e-12);
  EXPECT_NEAR(proxy.minus.upper, l2_norm(f), 1e-12);
  EXPECT_LE(proxy.s_norm.lower, proxy.s_norm.upper);
  EXPECT_LE(proxy.s_weak.lower, proxy.s_weak.upper);
}

TEST(SNorm, ZeroField) {
  const FrequencyGrid grid(2, 8, 2.0 * std::numbers::pi);
  SpaceTimeField zero(TimeGrid(0.0, 0.1, 8), grid, 1);
  const auto proxy = s_norm_proxy(zero, zero);
  EXPECT_EQ(proxy.s_norm.lower, 0.0);
  EXPECT_EQ(proxy.s_norm.upper, 0.0);
  EXPECT_EQ(proxy.s_weak.upper, 0.0);
}

TEST(SNorm, MeanFlag) {
  const FrequencyGrid grid(2, 8, 2.0 * std::numbers::pi);
  const TimeGrid time(0.0, 0.1, 8);
  SpaceTimeField u(time, grid, 1), ut(time, grid, 1);
  for (std::size_t j = 0; j < time.samples(); ++j) ut[j] = constant_field(grid, 1.0);
  EXPECT_TRUE(s_norm_proxy(u, ut, {.budget = 4}).nonzero_mean);
}

TEST(SNorm, TruncatedFreeWaveBound) {
  const FrequencyGrid grid(2, 16, 2.0 * std::numbers::pi);
  RandomStream rng(29);
  for (double lambda : {2.0, 4.0}) {
    const auto localize = [&](const SpatialField& x) { return littlewood_paley(x, DyadicScale::of(lambda)); };
    const auto f = localize(random_band_limited(grid, 1, 7, rng, true, true));
    const auto g = localize(random_band_limited(grid, 1, 7, rng, true, true));
    const TimeGrid time(-1.5 / lambda, 0.02, 151);
    SpaceTimeField u(time, grid, 1), ut(time, grid, 1);
    const auto fh = forward(f);
    const auto gh = forward(g);
    for (std::size_t j = 0; j < time.samples(); ++j) {
      const double t = time.time(j);
      const auto state = homogeneous_wave(fh, gh, t);
      SpectralField value = state.value, velocity = state.velocity;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double k = grid.frequency_norm(i);
        const double cut = profile::causal_cutoff(t * k);
        const double rate = k * profile::causal_cutoff_derivative(t * k);
        velocity.at(0, i) = cut * state.velocity.at(0, i) + rate * state.value.at(0, i);
        value.at(0, i) = cut * state.value.at(0, i);
      }
      u[j] = inverse(value);
      ut[j] = inverse(velocity);
    }
    const auto proxy = s_norm_proxy(u, ut, {.budget = 16});
    const double data = l2_norm(f) + l2_norm(g) / lambda;
    EXPECT_LE(proxy.s_norm.lower, proxy.s_norm.upper);
    EXPECT_LT(proxy.s_norm.upper / data, 20.0);
    RecordProperty("s_upper_over_data_lambda" + std::to_string(static_cast<int>(lambda)),
                   std::to_string(proxy.s_norm.upper / data));
  }
}
