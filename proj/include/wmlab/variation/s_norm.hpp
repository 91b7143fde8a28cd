#pragma once

#include <map>
#include <string>
#include <vector>

#include "wmlab/multipliers/spatial.hpp"
#include "wmlab/variation/pairing.hpp"

namespace wmlab {

struct NormReport {
  std::string quantity;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::string> methods;
  std::map<std::string, double> parameters;

  void require_ordered() const {
    if (lower > upper * (1.0 + 1e-12) + 1e-300) throw PreconditionError(quantity + ": lower bound exceeds upper bound");
  }
};

/// Certified U^p bounds of a series: lower from the dual pairing and the V^p embedding, upper from atoms;
/// the Besov sum is reported alongside and used when it is smaller.
inline NormReport up_norm_report(const std::string& name, const SpaceTimeField& w, double p,
                                 const DualityOptions& duality = {}) {
  NormReport report;
  report.quantity = name;
  const double sup = sup_norm(w);
  const double anchored = p_variation(w, p, Anchor::Anchored);
  const double duality_bound = up_lower_bound(w, p, duality);
  report.lower = std::max({sup, 0.5 * anchored, duality_bound});
  const auto atoms = atomic_upper_bound(w, p);
  report.upper = atoms.value();
  report.methods = {"sup", "variation/2", "duality", "atomic"};
  report.parameters["p"] = p;
  report.parameters["sup"] = sup;
  report.parameters["variation"] = p_variation(w, p);
  report.parameters["anchored_variation"] = anchored;
  report.parameters["duality"] = duality_bound;
  report.parameters["atomic"] = atoms.value();
  if (w.samples() >= 2) {
    const auto besov = besov_sum(w, p);
    report.parameters["besov"] = besov.value;
    report.parameters["besov_constant"] = besov.constant;
    if (besov.constant * besov.value >= report.lower && besov.constant * besov.value < report.upper) {
      report.upper = besov.constant * besov.value;
      report.methods.push_back("besov");
    }
  }
  report.require_ordered();
  return report;
}

struct SNormProxy {
  NormReport plus;      // u + i|grad|^{-1} u_t in U^2_+
  NormReport minus;     // u - i|grad|^{-1} u_t in U^2_-
  NormReport s_norm;    // sum of the two pieces
  NormReport s_weak;    // V^2_+ + V^2_- upper bound for u
  bool nonzero_mean = false;
};

namespace detail {

/// e^{+it|grad|} P^(t)_- v and e^{-it|grad|} P^(t)_+ v; tau = 0 is shared equally.
inline std::pair<SpaceTimeField, SpaceTimeField> temporal_sign_split(const SpaceTimeField& v) {
  SpectralHistory negative(v);
  negative.temporal_forward();
  SpectralHistory positive = negative;
  for (std::size_t r = 0; r < v.samples(); ++r) {
    const double tau = v.time().temporal_frequency(r);
    const double keep_negative = tau < 0.0 ? 1.0 : (tau == 0.0 ? 0.5 : 0.0);
    for (auto& x : negative.row(r)) x *= keep_negative;
    for (auto& x : positive.row(r)) x *= 1.0 - keep_negative;
  }
  negative.temporal_inverse();
  positive.temporal_inverse();
  const auto phase = cone_phase(v.grid());
  return {adapted_conjugate(negative.to_field(), phase, WaveSign::Plus),
          adapted_conjugate(positive.to_field(), phase, WaveSign::Minus)};
}

}  // namespace detail

inline SNormProxy s_norm_proxy(const SpaceTimeField& u, const SpaceTimeField& ut, const DualityOptions& duality = {}) {
  u.require_same_shape(ut);
  SNormProxy proxy;
  for (std::size_t j = 0; j < u.samples() && !proxy.nonzero_mean; ++j) {
    const auto spectrum = forward(ut[j]);
    for (std::size_t c = 0; c < spectrum.components(); ++c)
      if (std::abs(spectrum.at(c, 0)) > 1e-12 * std::max(1.0, coefficient_norm(spectrum))) proxy.nonzero_mean = true;
  }
  const auto inverse_gradient = map_snapshots(ut, [](const SpatialField& f) { return gradient_power(f, -1.0); });
  const SpaceTimeField plus_piece = u + Complex{0.0, 1.0} * inverse_gradient;
  const SpaceTimeField minus_piece = u - Complex{0.0, 1.0} * inverse_gradient;
  const auto phase = cone_phase(u.grid());
  const auto plus_profile = adapted_conjugate(plus_piece, phase, WaveSign::Plus);
  const auto minus_profile = adapted_conjugate(minus_piece, phase, WaveSign::Minus);

  proxy.plus = up_norm_report("U2+ piece", plus_profile, 2.0, duality);
  proxy.minus = up_norm_report("U2- piece", minus_profile, 2.0, duality);
  proxy.s_norm.quantity = "S";
  proxy.s_norm.lower = proxy.plus.lower + proxy.minus.lower;
  proxy.s_norm.upper = proxy.plus.upper + proxy.minus.upper;
  proxy.s_norm.methods = {"half-wave pieces"};
  proxy.s_norm.parameters["nonzero_mean"] = proxy.nonzero_mean ? 1.0 : 0.0;

  // u = (u_+ + u_-)/2, or the temporal sign splitting.
  const double halves = 0.5 * (vp_norm(plus_profile, 2.0, Anchor::Anchored) + vp_norm(minus_profile, 2.0, Anchor::Anchored));
  double splitting = halves;
  if (u.samples() >= 2) {
    const auto [negative, positive] = detail::temporal_sign_split(u);
    splitting = vp_norm(negative, 2.0, Anchor::Anchored) + vp_norm(positive, 2.0, Anchor::Anchored);
  }
  proxy.s_weak.quantity = "S_w";
  proxy.s_weak.lower = sup_norm(u);
  proxy.s_weak.upper = std::min(halves, splitting);
  proxy.s_weak.methods = {"sup", "half-wave halves", "temporal sign split"};
  proxy.s_weak.parameters["halves"] = halves;
  proxy.s_weak.parameters["sign_split"] = splitting;
  return proxy;
}

}  // namespace wmlab
