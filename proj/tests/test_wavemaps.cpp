#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "wmlab/random.hpp"
#include "wmlab/wavemaps.hpp"

using namespace wmlab;
using std::numbers::pi;

namespace {

SpatialField vector_field(const FrequencyGrid& grid, const std::function<std::array<double, 3>(const Frequency&)>& fn) {
  SpatialField out(grid, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto v = fn(grid.position(i));
    for (std::size_t c = 0; c < 3; ++c) out.at(c, i) = v[c];
  }
  return out;
}

/// phi = (cos(k x_1 - w t), sin(k x_1 - w t), 0).
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

/// Trigonometric polynomial in (t, x) with |m| <= 3 and |k_i| <= 3, periodic on the window.
SpaceTimeField random_trigonometric(const FrequencyGrid& grid, const TimeGrid& time, RandomStream& rng) {
  std::vector<std::tuple<long, long, long, Complex>> terms;
  for (int n = 0; n < 6; ++n)
    terms.emplace_back(static_cast<long>(rng.index(7)) - 3, static_cast<long>(rng.index(7)) - 3,
                       static_cast<long>(rng.index(7)) - 3, rng.complex_normal());
  const double scale = 2.0 * pi / grid.period();
  return sample_space_time(time, grid, [&](double t, const Frequency& x) {
    Complex total{0.0, 0.0};
    for (const auto& [m, k0, k1, c] : terms)
      total += c * std::polar(1.0, static_cast<double>(m) * t + scale * (static_cast<double>(k0) * x[0] + static_cast<double>(k1) * x[1]));
    return total;
  });
}

}  // namespace

TEST(NullForm, ConstantsAndNullDirection) {
  const FrequencyGrid grid(2, 8, 2.0 * pi);
  const TimeGrid time(0.0, 2.0 * pi / 32.0, 32);
  const auto constant = sample_space_time(time, grid, [](double, const Frequency&) { return Complex{3.0, 1.0}; });
  EXPECT_LT(detail::space_time_l2(null_form(constant, constant)), 1e-12);
  const auto null_wave = sample_space_time(time, grid, [](double t, const Frequency& x) { return std::polar(1.0, t + x[0]); });
  EXPECT_LT(detail::space_time_l2(null_form(null_wave, null_wave)), 1e-11);
}

TEST(NullForm, OppositeDirections) {
  const FrequencyGrid grid(2, 8, 2.0 * pi);
  const TimeGrid time(0.0, 2.0 * pi / 32.0, 32);
  const auto u = sample_space_time(time, grid, [](double t, const Frequency& x) { return std::polar(1.0, t + x[0]); });
  const auto v = sample_space_time(time, grid, [](double t, const Frequency& x) { return std::polar(1.0, t - x[0]); });
  const auto q = null_form(u, v);
  const auto expected = sample_space_time(time, grid, [](double t, const Frequency&) { return -2.0 * std::polar(1.0, 2.0 * t); });
  EXPECT_LT(detail::space_time_l2(q - expected), 1e-11);
}

TEST(NullIdentity, PlaneWavePair) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const TimeGrid time(0.0, 2.0 * pi / 64.0, 64);
  const auto u = sample_space_time(time, grid, [](double t, const Frequency& x) { return std::polar(1.0, t + x[0]); });
  const auto v = sample_space_time(time, grid, [](double t, const Frequency& x) { return std::polar(1.0, t - x[0]); });
  EXPECT_LT(null_identity_residual(u, v), 1e-10);
  const auto constant = sample_space_time(time, grid, [](double, const Frequency&) { return Complex{1.0, 0.0}; });
  EXPECT_EQ(null_identity_residual(constant, constant), 0.0);
}

TEST(NullIdentity, RandomTrigonometricFields) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const TimeGrid time(0.0, 2.0 * pi / 32.0, 32);
  RandomStream rng(101);
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = random_trigonometric(grid, time, rng);
    const auto v = random_trigonometric(grid, time, rng);
    EXPECT_LT(null_identity_residual(u, v), 1e-8);
  }
}

TEST(WaveMapsRhs, ClosedForms) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const auto point = vector_field(grid, [](const Frequency&) { return std::array<double, 3>{0.0, 0.6, 0.8}; });
  EXPECT_LT(l2_norm(wave_maps_rhs(point, point.zeros_like())), 1e-12);
  for (double k : {1.0, 2.0, 3.0}) {
    const auto phi = equator(grid, k, 0.0, 0.0);
    EXPECT_LT(l2_distance(wave_maps_rhs(phi, phi.zeros_like()), phi * Complex{k * k, 0.0}), 1e-11);
  }
  // -phi Q_0(phi, phi) with closed-form derivatives of the travelling map.
  const double k = 2.0, w = 3.0, t = 0.4;
  const auto phi = equator(grid, k, w, t);
  const auto phi_t = equator_velocity(grid, k, w, t);
  EXPECT_LT(l2_distance(wave_maps_rhs(phi, phi_t), phi * Complex{k * k - w * w, 0.0}), 1e-11);
  EXPECT_THROW(wave_maps_rhs(SpatialField(grid, 1), SpatialField(grid, 1)), ShapeError);
}

TEST(Sphere, Constrain) {
  const FrequencyGrid grid(2, 8, 2.0 * pi);
  const auto twice = vector_field(grid, [](const Frequency&) { return std::array<double, 3>{0.0, 1.2, 1.6}; });
  const auto projected = sphere_constrain(twice, twice.zeros_like());
  EXPECT_NEAR(projected.f.at(1, 3).real(), 0.6, 1e-15);
  EXPECT_NEAR(projected.f.at(2, 3).real(), 0.8, 1e-15);
  const auto again = sphere_constrain(projected.f, projected.g);
  EXPECT_LT(l2_distance(again.f, projected.f), 1e-15);

  RandomStream rng(102);
  auto f = random_band_limited(grid, 3, 2, rng, false, true);
  for (std::size_t i = 0; i < grid.size(); ++i) f.at(0, i) += 10.0;
  const auto data = sphere_constrain(f, random_band_limited(grid, 3, 2, rng, false, true));
  EXPECT_LT(constraint_defect(data.f), 1e-12);
  EXPECT_LT(tangency_defect(data), 1e-12);
  EXPECT_THROW(sphere_constrain(twice.zeros_like(), twice), DegenerateInputError);
}

TEST(Energy, ClosedForms) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const auto phi = equator(grid, 1.0, 0.0, 0.0);
  EXPECT_NEAR(energy(phi, phi.zeros_like()), 2.0 * pi * pi, 1e-11);
  const auto point = vector_field(grid, [](const Frequency&) { return std::array<double, 3>{1.0, 0.0, 0.0}; });
  EXPECT_EQ(energy(point, point.zeros_like()), 0.0);
  RandomStream rng(103);
  const auto f = random_band_limited(grid, 3, 5, rng, true, true);
  const auto g = random_band_limited(grid, 3, 5, rng, true, true);
  const double initial = energy(f, g);
  for (double t : {0.3, 1.7, 5.0}) {
    const auto state = homogeneous_wave(f, g, t);
    EXPECT_NEAR(energy(state.value, state.velocity), initial, 1e-12 * initial);
  }
}

TEST(HalfWavePair, Reconstruction) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  RandomStream rng(104);
  const auto u = random_band_limited(grid, 3, 6, rng, false, true);
  const auto ut = random_band_limited(grid, 3, 6, rng, true, true);
  const auto back = reconstruct(half_wave_pair(u, ut));
  EXPECT_LT(l2_distance(back.value, u), 1e-12);
  EXPECT_LT(l2_distance(back.velocity, ut), 1e-12);
}

TEST(Duhamel, ClosedForms) {
  const FrequencyGrid grid(2, 8, 2.0 * pi);
  const TimeGrid time(-0.5, 0.01, 251);
  const auto plane = sample_space_time(time, grid, [](double, const Frequency& x) { return std::polar(1.0, x[1]); });
  const auto result = duhamel(plane);
  double worst = 0.0;
  for (std::size_t j = 0; j < time.samples(); ++j) {
    const double t = std::max(time.time(j), 0.0);
    const auto expected = sample_field(grid, [&](const Frequency& x) { return (1.0 - std::cos(t)) * std::polar(1.0, x[1]); });
    worst = std::max(worst, l2_distance(result.value[j], expected));
  }
  EXPECT_LT(worst, 1e-10);

  const auto constant = sample_space_time(time, grid, [](double, const Frequency&) { return Complex{1.0, 0.0}; });
  const auto quadratic = duhamel(constant);
  EXPECT_NEAR(quadratic.value[time.samples() - 1].at(0, 5).real(), 0.5 * 2.0 * 2.0, 1e-12);
  EXPECT_NEAR(quadratic.velocity[time.samples() - 1].at(0, 5).real(), 2.0, 1e-12);

  const auto zero = duhamel(plane.zeros_like());
  EXPECT_EQ(detail::space_time_l2(zero.value), 0.0);
  EXPECT_THROW(duhamel(SpaceTimeField(TimeGrid(0.005, 0.01, 10), grid, 1)), PreconditionError);
}

TEST(Duhamel, WaveOperatorInverts) {
  const FrequencyGrid grid(2, 8, 2.0 * pi);
  const TimeGrid time(0.0, 1e-3, 1001);
  RandomStream rng(105);
  const auto a = random_band_limited(grid, 1, 2, rng, false, false);
  const auto b = random_band_limited(grid, 1, 2, rng, false, false);
  SpaceTimeField forcing(time, grid, 1);
  for (std::size_t j = 0; j < time.samples(); ++j) {
    const double t = time.time(j);
    forcing[j] = a * Complex{std::cos(3.0 * t), 0.0} + b * Complex{t * t, 0.0};
  }
  const auto result = duhamel(forcing);
  const auto box = wave_operator(result.value, TimeDerivativeMode::FiniteDifference);
  double worst = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < time.samples(); ++j) {
    worst = std::max(worst, l2_distance(box[j], forcing[j]));
    scale = std::max(scale, l2_norm(forcing[j]));
  }
  EXPECT_LT(worst / scale, 1e-6);
  EXPECT_LT(l2_norm(result.value[0]), 1e-15);
  EXPECT_LT(l2_norm(result.velocity[0]), 1e-15);
}

TEST(Evolve, ConstantMapIsStationary) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const auto point = vector_field(grid, [](const Frequency&) { return std::array<double, 3>{0.0, 0.6, 0.8}; });
  const auto trajectory = evolve({point, point.zeros_like()}, 0.1, 0.01);
  EXPECT_LT(l2_distance(trajectory.phi[10], point), 1e-13);
  EXPECT_EQ(trajectory.diagnostics.size(), 11u);
}

TEST(Evolve, TravellingEquatorMap) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  for (auto [k, w] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {2.0, 1.0}, {1.0, 0.0}}) {
    const CauchyData data{equator(grid, k, w, 0.0), equator_velocity(grid, k, w, 0.0)};
    const auto trajectory = evolve(data, 0.2, 0.002, {.record_stride = 25});
    EXPECT_EQ(trajectory.phi.samples(), 5u);
    EXPECT_LT(l2_distance(trajectory.phi[4], equator(grid, k, w, 0.2)), 1e-10);
    EXPECT_LT(l2_distance(trajectory.phi_t[4], equator_velocity(grid, k, w, 0.2)), 1e-9);
  }
}

TEST(Evolve, SmallDataConservesEnergyAndConstraint) {
  const FrequencyGrid grid(2, 32, 2.0 * pi);
  RandomStream rng(106);
  const auto data = small_data(grid, rng, 1e-2);
  const auto trajectory = evolve(data, 0.2, 0.01);
  const double initial = trajectory.diagnostics.front().energy;
  for (const auto& d : trajectory.diagnostics) {
    EXPECT_LT(std::abs(d.energy - initial), 1e-6 * initial);
    EXPECT_LT(d.constraint, 1e-6);
  }
  std::ostringstream csv;
  write_diagnostics_csv(csv, trajectory);
  EXPECT_EQ(csv.str().rfind("t,energy,constraint_sup,step_residual\n", 0), 0u);
}

TEST(Evolve, TimeReversal) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  RandomStream rng(107);
  const auto data = small_data(grid, rng, 5e-2);
  const auto forward_run = evolve(data, 0.3, 0.01);
  const std::size_t last = forward_run.phi.samples() - 1;
  const auto backward_run = evolve({forward_run.phi[last], forward_run.phi_t[last] * Complex{-1.0, 0.0}}, 0.3, 0.01);
  EXPECT_LT(l2_distance(backward_run.phi[last], data.f), 1e-9);
  EXPECT_LT(l2_distance(backward_run.phi_t[last] * Complex{-1.0, 0.0}, data.g), 1e-9);
}

TEST(Evolve, RungeKuttaOrders) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const CauchyData data{equator(grid, 1.0, 2.0, 0.0), equator_velocity(grid, 1.0, 2.0, 0.0)};
  const auto coarse = evolve(data, 0.2, 0.02, {.scheme = Scheme::LawsonRK2});
  const auto fine = evolve(data, 0.2, 0.01, {.scheme = Scheme::LawsonRK2});
  const auto exact = equator(grid, 1.0, 2.0, 0.2);
  const double ratio = l2_distance(coarse.phi[10], exact) / l2_distance(fine.phi[20], exact);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(Evolve, DivergenceIsReported) {
  const FrequencyGrid grid(2, 8, 2.0 * pi);
  auto f = vector_field(grid, [](const Frequency&) { return std::array<double, 3>{1.0, 0.0, 0.0}; });
  f.at(0, 3) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(evolve({f, f.zeros_like()}, 0.02, 0.01), DivergenceError);
}

TEST(Picard, ZeroDataAndContraction) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const TimeGrid time(0.0, 0.01, 21);
  const SpatialField zero(grid, 3);
  const auto fixed = picard_map(truncated_free_wave({zero, zero}, time), {zero, zero});
  EXPECT_EQ(detail::space_time_l2(fixed.phi), 0.0);

  RandomStream rng(108);
  const auto data = small_data(grid, rng, 1e-2);
  const auto run = picard_iterate(data, time, 6);
  ASSERT_FALSE(run.ratios.empty());
  EXPECT_LT(run.contraction(), 1.0);
  const auto reference = evolve(data, 0.2, 0.01);
  EXPECT_LT(sup_l2_distance(run.solution.phi, reference.phi), 1e-8);
}

TEST(Picard, CutoffBeforeZero) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  const TimeGrid time(-1.0, 0.01, 201);
  RandomStream rng(109);
  const auto data = small_data(grid, rng, 1e-2);
  const auto linear = truncated_free_wave(data, time);
  // chi(t|k|) vanishes for t <= -1/|k|; only the zero mode survives at t = -1.
  const auto early = forward(linear.phi[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_EQ(std::abs(early.at(0, i)), 0.0);
  const auto state = homogeneous_wave(data.f, data.g, 0.5);
  EXPECT_LT(l2_distance(linear.phi[150], state.value), 1e-12);
}

TEST(Scattering, LinearProfilesAreConstant) {
  const FrequencyGrid grid(2, 16, 2.0 * pi);
  RandomStream rng(110);
  const auto f = random_band_limited(grid, 3, 5, rng, true, true);
  const auto g = random_band_limited(grid, 3, 5, rng, true, true);
  const auto linear = truncated_free_wave({f, g}, TimeGrid(0.0, 0.05, 41));
  const auto state = scattering_extract(linear, {0.5, 1.0, 2.0});
  for (double d : state.cauchy_profile) EXPECT_LT(d, 1e-12);
  EXPECT_LT(l2_distance(state.f_infinity, f), 1e-12);
  EXPECT_LT(l2_distance(state.g_infinity, g), 1e-12);

  const auto zero = truncated_free_wave({f.zeros_like(), g.zeros_like()}, TimeGrid(0.0, 0.05, 41));
  EXPECT_EQ(l2_norm(scattering_extract(zero, {0.5, 1.0, 2.0}).f_infinity), 0.0);
  EXPECT_THROW(scattering_extract(linear, {0.5, 1.0}), ArityError);
}
