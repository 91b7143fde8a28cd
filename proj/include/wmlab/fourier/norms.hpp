#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wmlab/fourier/fields.hpp"

namespace wmlab {

inline constexpr double infinity_exponent = std::numeric_limits<double>::infinity();

/// L^2 norm of every snapshot.
inline std::vector<double> snapshot_norms(const SpaceTimeField& u) {
  std::vector<double> norms(u.samples());
  for (std::size_t j = 0; j < u.samples(); ++j) norms[j] = l2_norm(u[j]);
  return norms;
}

/// Trapezoidal L^p_t of a sampled magnitude sequence; exact max for p = infinity.
inline double lp_of_samples(const std::vector<double>& magnitudes, double dt, double p) {
  if (magnitudes.empty()) return 0.0;
  if (std::isinf(p)) return *std::max_element(magnitudes.begin(), magnitudes.end());
  if (magnitudes.size() == 1) return 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < magnitudes.size(); ++j) {
    const double weight = (j == 0 || j + 1 == magnitudes.size()) ? 0.5 : 1.0;
    total += weight * std::pow(magnitudes[j], p);
  }
  return std::pow(total * dt, 1.0 / p);
}

/// ||u||_{L^p_t L^2_x} over the sampled window.
inline double mixed_norm(const SpaceTimeField& u, double p) {
  if (!(p >= 1.0)) throw RangeError("mixed_norm exponent must lie in [1, inf]");
  return lp_of_samples(snapshot_norms(u), u.time().step(), p);
}

}  // namespace wmlab
