#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wmlab/fourier/calculus.hpp"
#include "wmlab/multipliers/profiles.hpp"
#include "wmlab/multipliers/spec.hpp"

namespace wmlab {

/// A scale 2^exponent (frequency lambda or modulation d).
struct DyadicScale {
  int exponent = 0;

  double value() const { return std::ldexp(1.0, exponent); }

  static DyadicScale of(double scale) {
    int exponent = 0;
    const double mantissa = std::frexp(scale, &exponent);
    if (!(scale > 0.0) || mantissa != 0.5) throw RangeError("scale is not a power of two");
    return DyadicScale{exponent - 1};
  }
  bool operator==(const DyadicScale&) const = default;
};

struct DyadicRange {
  int lowest = 0;
  int highest = 0;
  bool contains(DyadicScale s) const { return s.exponent >= lowest && s.exponent <= highest; }
  std::vector<DyadicScale> scales() const {
    std::vector<DyadicScale> out;
    for (int e = lowest; e <= highest; ++e) out.push_back(DyadicScale{e});
    return out;
  }
};

/// Dyadic frequencies whose bands meet the nonzero lattice; their symbols sum to 1 off the zero mode.
inline DyadicRange spatial_dyadic_range(const FrequencyGrid& grid) {
  return {static_cast<int>(std::floor(std::log2(grid.dual_step()))),
          static_cast<int>(std::ceil(std::log2(grid.max_frequency_norm())))};
}

inline MultiplierSpec littlewood_paley_spec(const FrequencyGrid& grid, DyadicScale scale) {
  if (!spatial_dyadic_range(grid).contains(scale)) throw RangeError("frequency scale outside the grid range");
  const double lambda = scale.value();
  return spatial_spec(grid, "psi(|xi|/lambda)", [lambda](const Frequency&, double norm) {
    return profile::dyadic_band(norm / lambda);
  });
}

/// Smooth cutoff to |xi| <= 2 lambda (theta(|xi|/lambda)).
inline MultiplierSpec low_frequency_spec(const FrequencyGrid& grid, double lambda) {
  return spatial_spec(grid, "theta(|xi|/lambda)", [lambda](const Frequency&, double norm) {
    return profile::low_pass(norm / lambda);
  });
}

inline SpatialField littlewood_paley(const SpatialField& u, DyadicScale scale) {
  return apply(littlewood_paley_spec(u.grid(), scale), u);
}

inline double angle_between(const Frequency& a, const Frequency& b) {
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  const double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::acos(std::clamp(dot / (na * nb), -1.0, 1.0));
}

struct Cap {
  double radius = 1.0;
  Frequency center{1.0, 0.0, 0.0};
  bool contains(const Frequency& xi) const { return angle_between(xi, center) < radius; }
};

/// Finitely overlapping caps of one radius with a smooth angular partition of unity.
/// n=2 uses an exact periodic partition in the polar angle; n=3 normalizes flat-top bumps over a
/// spherical Fibonacci set. The zero mode is assigned to cap 0.
class CapCover {
 public:
  CapCover(int dimension, double radius) : dimension_(dimension), radius_(radius) {
    if (!(radius > 0.0) || radius > 1.0 + 1e-12) throw RangeError("cap radius must lie in (0,1]");
    if (dimension == 1) {
      caps_ = {Cap{radius, {1.0, 0.0, 0.0}}, Cap{radius, {-1.0, 0.0, 0.0}}};
      overlap_ = 1;
    } else if (dimension == 2) {
      count_ = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / radius - 1e-12));
      count_ = std::max<std::size_t>(count_, 7);
      const double spacing = 2.0 * std::numbers::pi / static_cast<double>(count_);
      for (std::size_t j = 0; j < count_; ++j) {
        const double angle = spacing * static_cast<double>(j);
        caps_.push_back(Cap{radius, {std::cos(angle), std::sin(angle), 0.0}});
      }
      overlap_ = 2;
    } else if (dimension == 3) {
      build_sphere_cover();
    } else {
      throw RangeError("cap covers exist for n = 1, 2, 3");
    }
  }

  int dimension() const { return dimension_; }
  double radius() const { return radius_; }
  std::size_t size() const { return caps_.size(); }
  const Cap& operator[](std::size_t j) const { return caps_[j]; }
  // Largest number of caps whose symbols are nonzero at one direction.
  std::size_t overlap() const { return overlap_; }

  /// Weight of cap j at frequency xi; weights over the cover sum to 1.
  double weight(std::size_t j, const Frequency& xi) const {
    const double norm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    if (norm == 0.0) return j == 0 ? 1.0 : 0.0;
    if (dimension_ == 1) return (xi[0] > 0.0) == (caps_[j].center[0] > 0.0) ? 1.0 : 0.0;
    if (dimension_ == 2) {
      const double spacing = 2.0 * std::numbers::pi / static_cast<double>(count_);
      double offset = std::atan2(xi[1], xi[0]) - spacing * static_cast<double>(j);
      offset = std::remainder(offset, 2.0 * std::numbers::pi);
      return profile::lattice_bump(offset / spacing);
    }
    double total = 0.0;
    double own = 0.0;
    for (std::size_t i = 0; i < caps_.size(); ++i) {
      const double b = sphere_bump(angle_between(xi, caps_[i].center));
      total += b;
      if (i == j) own = b;
    }
    return own / total;
  }

  MultiplierSpec spec(const FrequencyGrid& grid, std::size_t j) const {
    if (grid.dimension() != dimension_) throw ShapeError("cap cover dimension differs from the grid");
    return spatial_spec(grid, "angular partition", [&](const Frequency& xi, double) { return weight(j, xi); });
  }

 private:
  double sphere_bump(double angle) const { return profile::low_pass(2.0 * angle / radius_); }

  void build_sphere_cover() {
    // Largest Fibonacci set whose minimal separation still reaches the radius.
    auto fibonacci = [](std::size_t count) {
      std::vector<Cap> points;
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (std::size_t j = 0; j < count; ++j) {
        const double z = 1.0 - (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(count);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(j);
        points.push_back(Cap{0.0, {r * std::cos(phi), r * std::sin(phi), z}});
      }
      return points;
    };
    auto separation = [](const std::vector<Cap>& pts) {
      double best = std::numbers::pi;
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) best = std::min(best, angle_between(pts[a].center, pts[b].center));
      return best;
    };
    std::size_t count = 2;
    while (separation(fibonacci(count + 1)) >= radius_) ++count;
    caps_ = fibonacci(count);
    for (auto& cap : caps_) cap.radius = radius_;
    count_ = count;
    overlap_ = 1;
    const std::size_t probes = 4000;
    for (const auto& probe : fibonacci(probes)) {
      std::size_t hits = 0;
      for (const auto& cap : caps_) hits += sphere_bump(angle_between(probe.center, cap.center)) > 0.0 ? 1 : 0;
      overlap_ = std::max(overlap_, hits);
      if (hits == 0) throw RangeError("cap cover construction left a gap");
    }
  }

  int dimension_;
  double radius_;
  std::size_t count_ = 0;
  std::vector<Cap> caps_;
  std::size_t overlap_ = 1;
};

inline SpatialField angular_cap(const SpatialField& u, const CapCover& cover, std::size_t cap) {
  return apply(cover.spec(u.grid(), cap), u);
}

struct Cube {
  double side = 1.0;
  std::array<long, 3> center_index{0, 0, 0};  // center = side * center_index
};

/// Product partition of unity over the side-mu lattice; each symbol lives in the cube of side 2 mu
/// around its center.
class CubeCover {
 public:
  CubeCover(const FrequencyGrid& grid, double side) : grid_(grid), side_(side) {
    if (!(side > 0.0)) throw RangeError("cube side must be positive");
    const long reach = static_cast<long>(std::ceil(grid.nyquist() / side)) + 1;
    std::array<long, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < grid.dimension(); ++a) {
      lo[static_cast<std::size_t>(a)] = -reach;
      hi[static_cast<std::size_t>(a)] = reach;
    }
    for (long i = lo[0]; i <= hi[0]; ++i)
      for (long j = lo[1]; j <= hi[1]; ++j)
        for (long k = lo[2]; k <= hi[2]; ++k) cubes_.push_back(Cube{side, {i, j, k}});
  }

  std::size_t size() const { return cubes_.size(); }
  const Cube& operator[](std::size_t j) const { return cubes_[j]; }
  std::size_t overlap() const { return std::size_t{1} << grid_.dimension(); }

  double weight(const Cube& cube, const Frequency& xi) const {
    double w = 1.0;
    for (int a = 0; a < grid_.dimension(); ++a) {
      const auto axis = static_cast<std::size_t>(a);
      w *= profile::lattice_bump(xi[axis] / side_ - static_cast<double>(cube.center_index[axis]));
    }
    return w;
  }

  MultiplierSpec spec(std::size_t j) const {
    const Cube cube = cubes_[j];
    return spatial_spec(grid_, "cube partition", [&](const Frequency& xi, double) { return weight(cube, xi); });
  }

 private:
  FrequencyGrid grid_;
  double side_;
  std::vector<Cube> cubes_;
};

inline SpatialField cube_project(const SpatialField& u, const CubeCover& cover, std::size_t cube) {
  return apply(cover.spec(cube), u);
}

enum class WaveSign { Plus, Minus };

inline double sign_value(WaveSign sign) { return sign == WaveSign::Plus ? 1.0 : -1.0; }

/// e^{-it|grad|} for Plus, e^{+it|grad|} for Minus.
inline SpectralField half_wave(SpectralField spectrum, double t, WaveSign sign) {
  const double s = sign_value(sign);
  apply_symbol(spectrum, [t, s](const Frequency&, double norm) { return std::polar(1.0, -s * t * norm); });
  return spectrum;
}

inline SpatialField half_wave(const SpatialField& f, double t, WaveSign sign) {
  if (t == 0.0) return f;
  return inverse(half_wave(forward(f), t, sign));
}

struct WaveState {
  SpatialField value;
  SpatialField velocity;
};

struct SpectralWaveState {
  SpectralField value;
  SpectralField velocity;
};

/// V(t)(f,g) = cos(t|xi|) f + sin(t|xi|)/|xi| g, with the limit t g at xi = 0.
inline SpectralWaveState homogeneous_wave(const SpectralField& f, const SpectralField& g, double t) {
  f.require_same_shape(g);
  SpectralWaveState out{f.zeros_like(), f.zeros_like()};
  const auto& grid = f.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.frequency_norm(i);
    const double c = std::cos(t * k);
    const double sinc_t = k == 0.0 ? t : std::sin(t * k) / k;
    const double ks = k * std::sin(t * k);
    for (std::size_t comp = 0; comp < f.components(); ++comp) {
      out.value.at(comp, i) = c * f.at(comp, i) + sinc_t * g.at(comp, i);
      out.velocity.at(comp, i) = -ks * f.at(comp, i) + c * g.at(comp, i);
    }
  }
  return out;
}

inline WaveState homogeneous_wave(const SpatialField& f, const SpatialField& g, double t) {
  auto spectral = homogeneous_wave(forward(f), forward(g), t);
  return {inverse(spectral.value), inverse(spectral.velocity)};
}

/// Whether g carries a zero mode (propagated by the limit t g rather than dropped).
inline bool has_zero_mode(const SpatialField& g, double tolerance = 1e-12) {
  const auto spectrum = forward(g);
  for (std::size_t c = 0; c < g.components(); ++c)
    if (std::abs(spectrum.at(c, 0)) > tolerance * std::max(1.0, coefficient_norm(spectrum))) return true;
  return false;
}

/// Snapshot-wise e^{+- i t Phi(xi)}; `phase` holds Phi on the lattice.
inline SpaceTimeField adapted_conjugate(const SpaceTimeField& u, const std::vector<double>& phase, WaveSign sign) {
  if (phase.size() != u.grid().size()) throw ShapeError("phase symbol does not match the grid");
  const double s = sign_value(sign);
  SpaceTimeField out = u.zeros_like();
  for (std::size_t j = 0; j < u.samples(); ++j) {
    const double t = u.time().time(j);
    auto spectrum = forward(u[j]);
    for (std::size_t c = 0; c < spectrum.components(); ++c)
      for (std::size_t i = 0; i < spectrum.points(); ++i) spectrum.at(c, i) *= std::polar(1.0, s * t * phase[i]);
    out[j] = inverse(spectrum);
  }
  return out;
}

inline std::vector<double> cone_phase(const FrequencyGrid& grid) {
  std::vector<double> phase(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) phase[i] = grid.frequency_norm(i);
  return phase;
}

}  // namespace wmlab
