#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

namespace wmlab::profile {

/// e^{-1/x} for x > 0, else 0.
inline double flat_exponential(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

/// C^infinity step: 0 for x <= 0, 1 for x >= 1, and step(x) + step(1 - x) = 1.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double rise = flat_exponential(x);
  return rise / (rise + flat_exponential(1.0 - x));
}

/// theta(r) = 1 on [0,1], 0 on [2,inf).
inline double low_pass(double r) { return smooth_step(2.0 - std::abs(r)); }

/// psi(r) = theta(r) - theta(2r), supported in [1/2, 2] with psi(1) = 1.
inline double dyadic_band(double r) { return low_pass(r) - low_pass(2.0 * r); }

/// chi = 0 on (-inf,-1], 1 on [0,inf).
inline double causal_cutoff(double s) { return smooth_step(s + 1.0); }
inline double causal_cutoff_derivative(double s) {
  const double x = s + 1.0;
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = flat_exponential(x);
  const double b = flat_exponential(1.0 - x);
  const double da = a / (x * x);
  const double db = -b / ((1.0 - x) * (1.0 - x));
  return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

/// Integer-lattice partition of unity: beta(y) + beta(y - 1) = 1 on [0,1], beta(0) = 1, supp in (-1,1).
inline double lattice_bump(double y) { return smooth_step(1.0 - std::abs(y)); }

/// Hann weight on sample j of m.
inline double hann(std::size_t j, std::size_t m) {
  if (m < 2) return 1.0;
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m - 1);
  return 0.5 * (1.0 - std::cos(phase));
}

}  // namespace wmlab::profile
