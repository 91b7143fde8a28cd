#pragma once

#include <cmath>

#include "wmlab/wavemaps/null_form.hpp"

namespace wmlab {

struct CauchyData {
  SpatialField f;  // phi(0), three components
  SpatialField g;  // d_t phi(0)
};

inline void require_sphere_valued(const SpatialField& field) {
  if (field.components() != 3) throw ShapeError("sphere-valued fields need three components");
}

/// f <- f/|f| and g <- g - (g.f) f pointwise.
inline CauchyData sphere_constrain(const SpatialField& f, const SpatialField& g) {
  require_sphere_valued(f);
  f.require_same_shape(g);
  CauchyData data{f, g};
  for (std::size_t i = 0; i < f.points(); ++i) {
    double length = 0.0;
    for (std::size_t c = 0; c < 3; ++c) length += std::norm(f.at(c, i));
    length = std::sqrt(length);
    if (length < 1e-8) throw DegenerateInputError("cannot project a vanishing value onto the sphere");
    for (std::size_t c = 0; c < 3; ++c) data.f.at(c, i) = f.at(c, i).real() / length;
    double normal = 0.0;
    for (std::size_t c = 0; c < 3; ++c) normal += g.at(c, i).real() * data.f.at(c, i).real();
    for (std::size_t c = 0; c < 3; ++c) data.g.at(c, i) = g.at(c, i).real() - normal * data.f.at(c, i).real();
  }
  return data;
}

/// sup_x ||phi(x)| - 1|
inline double constraint_defect(const SpatialField& phi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < phi.points(); ++i) {
    double length = 0.0;
    for (std::size_t c = 0; c < phi.components(); ++c) length += std::norm(phi.at(c, i));
    worst = std::max(worst, std::abs(std::sqrt(length) - 1.0));
  }
  return worst;
}

/// sup_x |g(x).f(x)|
inline double tangency_defect(const CauchyData& data) {
  const auto normal = detail::dot(data.f, data.g);
  double worst = 0.0;
  for (const auto& v : normal.values()) worst = std::max(worst, std::abs(v));
  return worst;
}

/// phi (|grad phi|^2 - |d_t phi|^2)
inline SpatialField wave_maps_rhs(const SpatialField& phi, const SpatialField& phi_t) {
  require_sphere_valued(phi);
  phi.require_same_shape(phi_t);
  auto density = detail::dot(phi_t, phi_t) * Complex{-1.0, 0.0};
  for (int axis = 0; axis < phi.grid().dimension(); ++axis) {
    const auto d = partial_derivative(phi, axis);
    density += detail::dot(d, d);
  }
  return detail::scale_components(density, phi);
}

/// Zeroes modes with some |k_axis| > N/3.
inline void dealias(SpectralField& spectrum) {
  const auto& grid = spectrum.grid();
  const long cutoff = static_cast<long>(grid.points()) / 3;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = grid.wavevector(i);
    bool keep = true;
    for (int axis = 0; axis < grid.dimension(); ++axis) keep = keep && std::labs(k[static_cast<std::size_t>(axis)]) <= cutoff;
    if (!keep)
      for (std::size_t c = 0; c < spectrum.components(); ++c) spectrum.at(c, i) = 0.0;
  }
}

/// Spectrum of the right-hand side from the spectra of phi and d_t phi, real part taken, 2/3 rule applied.
inline SpectralField wave_maps_rhs_spectral(const SpectralField& phi_hat, const SpectralField& phi_t_hat) {
  const auto phi = inverse(phi_hat);
  const auto phi_t = inverse(phi_t_hat);
  auto density = detail::dot(phi_t, phi_t) * Complex{-1.0, 0.0};
  for (int axis = 0; axis < phi.grid().dimension(); ++axis) {
    const auto d = inverse(partial_derivative(phi_hat, axis));
    density += detail::dot(d, d);
  }
  auto product = detail::scale_components(density, phi);
  for (auto& v : product.values()) v = v.real();
  auto spectrum = forward(product);
  dealias(spectrum);
  return spectrum;
}

/// E = 1/2 int |d_t phi|^2 + |grad phi|^2, by Parseval.
inline double energy(const SpectralField& phi_hat, const SpectralField& phi_t_hat) {
  phi_hat.require_same_shape(phi_t_hat);
  const auto& grid = phi_hat.grid();
  double total = 0.0;
  for (std::size_t c = 0; c < phi_hat.components(); ++c)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double k = grid.frequency_norm(i);
      total += std::norm(phi_t_hat.at(c, i)) + k * k * std::norm(phi_hat.at(c, i));
    }
  return 0.5 * grid.cell_volume() * total;
}

inline double energy(const SpatialField& phi, const SpatialField& phi_t) { return energy(forward(phi), forward(phi_t)); }

}  // namespace wmlab
