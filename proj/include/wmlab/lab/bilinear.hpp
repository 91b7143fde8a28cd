#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wmlab/lab/parallel.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/lab/sampling.hpp"
#include "wmlab/multipliers/profiles.hpp"
#include "wmlab/multipliers/spatial.hpp"

namespace wmlab {

/// Free wave e^{-is(t - focus)|grad|} f whose spectrum sits near `carrier`, stored as the slowly varying envelope
/// U with u(t,x) = e^{i(carrier.x - s(t - focus)|carrier|)} U(t,x); in particular |u| = |U|.
class EnvelopeWave {
 public:
  EnvelopeWave(Frequency carrier, WaveSign sign, SpectralField envelope, double focus = 0.0)
      : sign_(sign), focus_(focus), envelope_(std::move(envelope)), dispersion_(envelope_.grid().size()) {
    const auto& grid = envelope_.grid();
    const double base = std::hypot(carrier[0], carrier[1], carrier[2]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto eta = grid.frequency(i);
      dispersion_[i] = std::hypot(carrier[0] + eta[0], carrier[1] + eta[1], carrier[2] + eta[2]) - base;
    }
  }

  SpatialField envelope_at(double t) const {
    auto spectrum = envelope_;
    const double s = sign_value(sign_) * (t - focus_);
    for (std::size_t c = 0; c < spectrum.components(); ++c)
      for (std::size_t i = 0; i < spectrum.points(); ++i) spectrum.at(c, i) *= std::polar(1.0, -s * dispersion_[i]);
    return inverse(spectrum);
  }

  /// ||u(t)||_{L^2}, constant in t.
  double norm() const { return l2_norm(envelope_); }

 private:
  WaveSign sign_;
  double focus_;
  SpectralField envelope_;
  std::vector<double> dispersion_;
};

/// Sum of `packets` smooth bumps inside the ball |eta| < radius, each with a random sub-center, width,
/// amplitude and spatial offset up to `offset`.
inline SpectralField random_packets(const FrequencyGrid& grid, double radius, std::size_t packets, double offset,
                                    RandomStream& rng) {
  if (radius < 2.0 * grid.dual_step()) throw ResolutionError("frequency ball narrower than two lattice steps");
  SpectralField spectrum(grid, 1);
  for (std::size_t j = 0; j < packets; ++j) {
    const double width = radius * rng.uniform(0.5, 0.9);
    const double reach = (radius - width) * std::sqrt(rng.uniform());
    const double turn = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Frequency center{reach * std::cos(turn), reach * std::sin(turn), 0.0};
    Frequency shift{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dimension(); ++a) shift[static_cast<std::size_t>(a)] = rng.uniform(-offset, offset);
    const Complex amplitude = rng.complex_normal();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto eta = grid.frequency(i);
      const double r = std::hypot(eta[0] - center[0], eta[1] - center[1], eta[2] - center[2]);
      const double bump = profile::lattice_bump(r / width);
      if (bump == 0.0) continue;
      const double phase = -(eta[0] * shift[0] + eta[1] * shift[1] + eta[2] * shift[2]);
      spectrum.at(0, i) += amplitude * bump * std::polar(1.0, phase);
    }
  }
  return spectrum;
}

/// Step function in t whose piece on the k-th interval of `partition` is `pieces[k]`.
struct AtomicWave {
  Partition partition;
  std::vector<EnvelopeWave> pieces;

  SpatialField envelope_at(std::size_t sample) const {
    const auto k = partition.interval_of(sample);
    if (!k) throw RangeError("sample precedes the first partition point");
    return pieces[*k].envelope_at(partition.time().time(sample));
  }

  /// (sum_I ||f_I||^a)^{1/a}
  double step_norm(double a) const {
    double total = 0.0;
    for (const auto& piece : pieces) total += std::pow(piece.norm(), a);
    return std::pow(total, 1.0 / a);
  }
};

/// ||u v||_{L^2} over the window and the periodic box, trapezoidal in t.
template <class First, class Second>
double product_l2(const TimeGrid& window, First&& first, Second&& second) {
  double total = 0.0;
  for (std::size_t j = 0; j < window.samples(); ++j) {
    const auto a = first(j);
    const auto b = second(j);
    double slice = 0.0;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) slice += std::norm(av[i] * bv[i]);
    const double weight = (j == 0 || j + 1 == window.samples()) ? 0.5 : 1.0;
    total += weight * slice * a.grid().cell_volume();
  }
  return std::sqrt(total * window.step());
}

struct BilinearOptions {
  std::size_t points = 128;
  double period = 2048.0;
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0, 16.0};
  std::size_t window_samples = 301;  // the window is [-T/2, T/2] with T = SamplingSpec::window
  double unit_radius = 0.01;         // Lambda_1 radius; Lambda_2 has radius lambda * unit_radius
  std::size_t packets = 3;
  double offset = 20.0;
  double spread_limit = 8.0;
  std::size_t max_pieces = 6;
  double slope_allowance = 0.3;
  Bracket bracket = Bracket::one_sided(20.0);
};

/// The setting shared by the two bilinear checks.
struct BilinearSetting {
  FrequencyGrid grid;
  TimeGrid window;

  BilinearSetting(const SamplingSpec& spec, const BilinearOptions& options)
      : grid(spec.dimension, options.points, options.period),
        window(-0.5 * spec.window, spec.window / static_cast<double>(options.window_samples - 1),
               options.window_samples) {
    if (options.window_samples < 2) throw ConfigError("bilinear window needs at least two samples");
    if (2.0 * options.unit_radius < 2.0 * grid.dual_step())
      throw ResolutionError("grid does not resolve the unit-scale frequency ball");
  }

  void require_scale(double lambda, double unit_radius) const {
    if (!(lambda >= 1.0)) throw RangeError("bilinear scale must be at least 1");
    if ((1.0 + lambda) * unit_radius >= grid.nyquist())
      throw RangeError("frequency ball of scale " + std::to_string(lambda) + " exceeds the grid");
  }

  static Frequency low_carrier() { return {1.0, 0.0, 0.0}; }
  static Frequency high_carrier(double lambda, WaveSign sign) { return {0.0, sign_value(sign) * lambda, 0.0}; }
};

/// ||e^{-it|grad|} f e^{-+it|grad|} g||_{L^2(window)} / (||f|| ||g||).
inline double bilinear_free_ratio(const BilinearSetting& setting, const EnvelopeWave& u, const EnvelopeWave& v) {
  const double norms = u.norm() * v.norm();
  if (norms == 0.0) return 0.0;
  const auto& w = setting.window;
  return product_l2(w, [&](std::size_t j) { return u.envelope_at(w.time(j)); },
                    [&](std::size_t j) { return v.envelope_at(w.time(j)); }) /
         norms;
}

/// Free-wave bilinear bound for f^ in Lambda_1, g^ in Lambda_2 across lambda.
inline EstimateReport check_bilinear_free(const SamplingSpec& spec, const BilinearOptions& options = {}) {
  const BilinearSetting setting(spec, options);
  for (double lambda : options.lambdas) setting.require_scale(lambda, options.unit_radius);
  EstimateReport report;
  report.id = "bilinear-free";
  report.bracket = options.bracket;
  report.parameters = {{"dimension", spec.dimension},
                       {"points", static_cast<double>(options.points)},
                       {"period", options.period},
                       {"window", spec.window},
                       {"window_samples", static_cast<double>(options.window_samples)},
                       {"unit_radius", options.unit_radius},
                       {"trials_per_scale", static_cast<double>(spec.samples)},
                       {"seed", static_cast<double>(spec.seed)}};
  const std::size_t per = spec.samples;
  const auto ratios = parallel_map<double>(options.lambdas.size() * per, [&](std::size_t job) {
    const double lambda = options.lambdas[job / per];
    RandomStream rng(spec.seed, job);
    const WaveSign sign = job % 2 == 0 ? WaveSign::Plus : WaveSign::Minus;
    const EnvelopeWave u(BilinearSetting::low_carrier(), WaveSign::Plus,
                         random_packets(setting.grid, options.unit_radius, options.packets, options.offset, rng));
    const EnvelopeWave v(BilinearSetting::high_carrier(lambda, sign), sign,
                         random_packets(setting.grid, lambda * options.unit_radius, options.packets, options.offset, rng));
    return bilinear_free_ratio(setting, u, v);
  });
  report.ratios = ratios;
  for (std::size_t l = 0; l < options.lambdas.size(); ++l) {
    const std::vector<double> row(ratios.begin() + static_cast<long>(l * per), ratios.begin() + static_cast<long>((l + 1) * per));
    report.table.push_back({"lambda " + dyadic_label({options.lambdas[l]}), {options.lambdas[l]}, RatioStats::of(row), true});
  }
  report.summarize();
  const double spread = report.stats.min > 0.0 ? report.stats.max / report.stats.min : INFINITY;
  report.require("max_over_min", spread, options.spread_limit, spread < options.spread_limit);
  return report;
}

/// Exponent conditions 1/(n+1) < 1/b <= 1/a <= 1/2 and 1/a + 1/b >= 1/2.
inline void require_bilinear_exponents(int n, double a, double b) {
  const bool valid = 1.0 / (n + 1.0) < 1.0 / b && 1.0 / b <= 1.0 / a && 1.0 / a <= 0.5 && 1.0 / a + 1.0 / b >= 0.5;
  if (!valid)
    throw ConfigError("exponents a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                      " violate 1/(n+1) < 1/b <= 1/a <= 1/2, 1/a + 1/b >= 1/2");
}

/// lambda^{(n+1)(1/2 - 1/a)}
inline double bilinear_exponent(int n, double a) { return (n + 1.0) * (0.5 - 1.0 / a); }

namespace detail {

/// Each piece focuses its packets at a random time inside its interval.
inline AtomicWave random_atomic_wave(const TimeGrid& window, const FrequencyGrid& grid, Frequency carrier,
                                     WaveSign sign, double radius, const BilinearOptions& options, RandomStream& rng) {
  AtomicWave wave{random_partition(window, options.max_pieces, rng), {}};
  for (std::size_t k = 0; k < wave.partition.size(); ++k) {
    const double start = window.time(wave.partition[k]);
    const double end = k + 1 < wave.partition.size() ? window.time(wave.partition[k + 1]) : window.end();
    wave.pieces.emplace_back(carrier, sign, random_packets(grid, radius, options.packets, options.offset, rng),
                             rng.uniform(start, end));
  }
  return wave;
}

}  // namespace detail

/// Atomic bilinear bound across lambda; the normalized ratio divides by lambda^{(n+1)(1/2-1/a)}.
inline EstimateReport check_bilinear_atomic(const SamplingSpec& spec, double a, double b,
                                            const BilinearOptions& options = {}) {
  require_bilinear_exponents(spec.dimension, a, b);
  if (options.lambdas.size() < 2) throw ConfigError("slope fit needs at least two scales");
  const BilinearSetting setting(spec, options);
  for (double lambda : options.lambdas) setting.require_scale(lambda, options.unit_radius);
  EstimateReport report;
  report.id = "bilinear-atomic";
  report.bracket = options.bracket;
  const double exponent = bilinear_exponent(spec.dimension, a);
  report.parameters = {{"dimension", spec.dimension},
                       {"a", a},
                       {"b", b},
                       {"exponent", exponent},
                       {"points", static_cast<double>(options.points)},
                       {"period", options.period},
                       {"window", spec.window},
                       {"max_pieces", static_cast<double>(options.max_pieces)},
                       {"trials_per_scale", static_cast<double>(spec.samples)},
                       {"seed", static_cast<double>(spec.seed)}};
  const std::size_t per = spec.samples;
  const auto raw = parallel_map<double>(options.lambdas.size() * per, [&](std::size_t job) {
    const double lambda = options.lambdas[job / per];
    RandomStream rng(spec.seed, job);
    const WaveSign sign = job % 2 == 0 ? WaveSign::Plus : WaveSign::Minus;
    const auto u = detail::random_atomic_wave(setting.window, setting.grid, BilinearSetting::low_carrier(),
                                              WaveSign::Plus, options.unit_radius, options, rng);
    const auto v = detail::random_atomic_wave(setting.window, setting.grid, BilinearSetting::high_carrier(lambda, sign),
                                              sign, lambda * options.unit_radius, options, rng);
    const double norms = u.step_norm(a) * v.step_norm(b);
    if (norms == 0.0) return 0.0;
    return product_l2(setting.window, [&](std::size_t j) { return u.envelope_at(j); },
                      [&](std::size_t j) { return v.envelope_at(j); }) /
           norms;
  });
  std::vector<double> medians;
  for (std::size_t l = 0; l < options.lambdas.size(); ++l) {
    const double lambda = options.lambdas[l];
    std::vector<double> row;
    for (std::size_t k = 0; k < per; ++k) row.push_back(raw[l * per + k] / std::pow(lambda, exponent));
    report.ratios.insert(report.ratios.end(), row.begin(), row.end());
    std::vector<double> unnormalized(raw.begin() + static_cast<long>(l * per), raw.begin() + static_cast<long>((l + 1) * per));
    medians.push_back(RatioStats::of(unnormalized).median);
    report.table.push_back({"lambda " + dyadic_label({lambda}), {lambda}, RatioStats::of(row), true});
  }
  report.slope = fit_log2_slope(options.lambdas, medians);
  report.summarize();
  report.require("slope", report.slope->slope, exponent + options.slope_allowance,
                 report.slope->slope <= exponent + options.slope_allowance);
  return report;
}

}  // namespace wmlab
