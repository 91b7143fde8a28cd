#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "wmlab/fourier/fft.hpp"

namespace wmlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of trial `trial` under run seed `seed`; independent of evaluation order.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
}

/// mt19937_64 with hand-rolled distributions so streams are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t seed, std::uint64_t trial) : engine_(stream_seed(seed, trial)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t count) { return static_cast<std::size_t>(uniform() * static_cast<double>(count)) % count; }
  bool coin() { return (engine_() >> 63) != 0; }
  double sign() { return coin() ? 1.0 : -1.0; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Random trigonometric polynomial with integer wavenumbers |k_i| <= max_wavenumber.
inline SpatialField random_band_limited(const FrequencyGrid& grid, std::size_t components, long max_wavenumber,
                                        RandomStream& rng, bool zero_mean = false, bool real_valued = false) {
  SpectralField spectrum(grid, components);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = grid.wavevector(i);
    bool inside = true;
    for (int axis = 0; axis < grid.dimension(); ++axis)
      inside = inside && std::labs(k[static_cast<std::size_t>(axis)]) <= max_wavenumber;
    if (!inside || (zero_mean && i == 0)) continue;
    for (std::size_t c = 0; c < components; ++c) spectrum.at(c, i) = rng.complex_normal();
  }
  auto field = inverse(spectrum);
  if (real_valued)
    for (auto& v : field.values()) v = v.real();
  return field;
}

}  // namespace wmlab
