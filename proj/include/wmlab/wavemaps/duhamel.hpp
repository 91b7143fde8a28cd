#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "wmlab/fourier.hpp"

namespace wmlab {

struct DuhamelResult {
  SpaceTimeField value;     // Box^{-1} F
  SpaceTimeField velocity;  // d_t Box^{-1} F
};

namespace detail {

inline std::size_t zero_sample(const TimeGrid& time) {
  const long j = time.floor_index(0.0);
  if (j < 0 || std::abs(time.time(static_cast<std::size_t>(j))) > 1e-9 * time.step())
    throw PreconditionError("the time window must contain t = 0 as a sample");
  return static_cast<std::size_t>(j);
}

/// Lagrange weights at x for nodes 0..count-1 (unit spacing).
inline std::array<double, 4> lagrange_weights(double x, std::size_t count) {
  std::array<double, 4> w{0.0, 0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < count; ++a) {
    double value = 1.0;
    for (std::size_t b = 0; b < count; ++b)
      if (b != a) value *= (x - static_cast<double>(b)) / (static_cast<double>(a) - static_cast<double>(b));
    w[a] = value;
  }
  return w;
}

}  // namespace detail

/// Retarded solution of Box U = F with U(0) = d_t U(0) = 0, zero before t = 0.
/// Mode-wise: U = (e^{ikt} W_- - e^{-ikt} W_+)/(2ik), W_-+ = int_0^t e^{-+iks} F ds, with 4-point Gauss-Legendre
/// on each step and cubic interpolation of F; the zero mode is t int F - int s F.
inline DuhamelResult duhamel(const SpaceTimeField& forcing) {
  const auto& time = forcing.time();
  const auto& grid = forcing.grid();
  const std::size_t m = time.samples();
  const std::size_t start = detail::zero_sample(time);
  const std::size_t comps = forcing.components();
  DuhamelResult result{forcing.zeros_like(), forcing.zeros_like()};

  std::vector<SpectralField> spectra;
  spectra.reserve(m);
  for (std::size_t j = 0; j < m; ++j) spectra.push_back(j >= start ? forward(forcing[j]) : SpectralField(grid, comps));

  const std::size_t columns = comps * grid.size();
  std::vector<Complex> w_minus(columns), w_plus(columns);
  const double h = time.step();
  static constexpr std::array<double, 4> nodes{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                               0.8611363115940526};
  static constexpr std::array<double, 4> weights{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                 0.3478548451374538};
  const std::size_t available = m - start;
  const std::size_t order = std::min<std::size_t>(4, available);

  auto emit = [&](std::size_t j) {
    const double t = time.time(j);
    SpectralField value(grid, comps), velocity(grid, comps);
    for (std::size_t c = 0; c < comps; ++c)
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t col = c * grid.size() + i;
        const double k = grid.frequency_norm(i);
        if (k == 0.0) {
          value.at(c, i) = t * w_minus[col] - w_plus[col];
          velocity.at(c, i) = w_minus[col];
          continue;
        }
        const Complex ahead = std::polar(1.0, k * t) * w_minus[col];
        const Complex behind = std::polar(1.0, -k * t) * w_plus[col];
        value.at(c, i) = (ahead - behind) / Complex{0.0, 2.0 * k};
        velocity.at(c, i) = 0.5 * (ahead + behind);
      }
    result.value[j] = inverse(value);
    result.velocity[j] = inverse(velocity);
  };

  emit(start);
  for (std::size_t j = start; j + 1 < m; ++j) {
    std::size_t base = j > start ? j - 1 : start;
    if (base + order > m) base = m - order;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double s = time.time(j) + 0.5 * h * (1.0 + nodes[q]);
      const double x = (s - time.time(base)) / h;
      const auto lw = detail::lagrange_weights(x, order);
      const double weight = 0.5 * h * weights[q];
      for (std::size_t c = 0; c < comps; ++c)
        for (std::size_t i = 0; i < grid.size(); ++i) {
          Complex f{0.0, 0.0};
          for (std::size_t a = 0; a < order; ++a) f += lw[a] * spectra[base + a].at(c, i);
          const std::size_t col = c * grid.size() + i;
          const double k = grid.frequency_norm(i);
          if (k == 0.0) {
            w_minus[col] += weight * f;
            w_plus[col] += weight * s * f;
          } else {
            const Complex phase = std::polar(1.0, -k * s);
            w_minus[col] += weight * phase * f;
            w_plus[col] += weight * std::conj(phase) * f;
          }
        }
    }
    emit(j + 1);
  }
  return result;
}

}  // namespace wmlab
