#pragma once

#include <cmath>

#include "wmlab/fourier.hpp"

namespace wmlab {

namespace detail {

/// sum_c a_c b_c pointwise (bilinear, no conjugation).
inline SpatialField dot(const SpatialField& a, const SpatialField& b) {
  a.require_same_shape(b);
  SpatialField out(a.grid(), 1);
  for (std::size_t c = 0; c < a.components(); ++c)
    for (std::size_t i = 0; i < a.points(); ++i) out.at(0, i) += a.at(c, i) * b.at(c, i);
  return out;
}

/// Pointwise product of a scalar field with every component of v.
inline SpatialField scale_components(const SpatialField& scalar, const SpatialField& v) {
  SpatialField out = v;
  for (std::size_t c = 0; c < v.components(); ++c)
    for (std::size_t i = 0; i < v.points(); ++i) out.at(c, i) *= scalar.at(0, i);
  return out;
}

inline double space_time_l2(const SpaceTimeField& u) {
  double total = 0.0;
  for (const auto& snapshot : u.snapshots()) total += snapshot.squared_sum();
  return std::sqrt(total);
}

}  // namespace detail

/// Q_0(u,v) = d_t u . d_t v - sum_j d_j u . d_j v, components paired by the dot product.
inline SpaceTimeField null_form(const SpaceTimeField& u, const SpaceTimeField& v,
                                TimeDerivativeMode mode = TimeDerivativeMode::Spectral) {
  u.require_same_shape(v);
  const auto ut = time_derivative(u, mode);
  const auto vt = time_derivative(v, mode);
  SpaceTimeField out(u.time(), u.grid(), 1);
  for (std::size_t j = 0; j < u.samples(); ++j) {
    out[j] = detail::dot(ut[j], vt[j]);
    for (int axis = 0; axis < u.grid().dimension(); ++axis)
      out[j] -= detail::dot(partial_derivative(u[j], axis), partial_derivative(v[j], axis));
  }
  return out;
}

/// Box u = d_tt u - Laplacian u.
inline SpaceTimeField wave_operator(const SpaceTimeField& u, TimeDerivativeMode mode = TimeDerivativeMode::Spectral) {
  auto out = second_time_derivative(u, mode);
  for (std::size_t j = 0; j < u.samples(); ++j) out[j] -= laplacian(u[j]);
  return out;
}

/// |2 Q_0(u,v) - [Box(uv) - (Box u) v - u Box v]| / max(|2 Q_0(u,v)|, floor), l^2 over all samples.
inline double null_identity_residual(const SpaceTimeField& u, const SpaceTimeField& v,
                                     TimeDerivativeMode mode = TimeDerivativeMode::Spectral, double floor = 1e-300) {
  u.require_same_shape(v);
  const auto lhs = Complex{2.0, 0.0} * null_form(u, v, mode);
  SpaceTimeField product(u.time(), u.grid(), 1);
  for (std::size_t j = 0; j < u.samples(); ++j) product[j] = detail::dot(u[j], v[j]);
  const auto box_u = wave_operator(u, mode);
  const auto box_v = wave_operator(v, mode);
  auto rhs = wave_operator(product, mode);
  for (std::size_t j = 0; j < u.samples(); ++j) {
    rhs[j] -= detail::dot(box_u[j], v[j]);
    rhs[j] -= detail::dot(u[j], box_v[j]);
  }
  const double scale = std::max(detail::space_time_l2(lhs), floor);
  return detail::space_time_l2(lhs - rhs) / scale;
}

}  // namespace wmlab
