#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "wmlab/fourier/fft.hpp"
#include "wmlab/fourier/io.hpp"

namespace wmlab {

enum class SymbolDomain { Spatial, Temporal, SpaceTime };

inline const char* to_string(SymbolDomain domain) {
  switch (domain) {
    case SymbolDomain::Spatial: return "spatial";
    case SymbolDomain::Temporal: return "temporal";
    case SymbolDomain::SpaceTime: return "space-time";
  }
  return "?";
}

/// Symbol values on a frequency lattice.
/// Spatial: one value per mode. Temporal: one value per temporal frequency.
/// Space-time: rows of temporal frequencies (possibly shifted per mode), one row per mode.
struct MultiplierSpec {
  SymbolDomain domain = SymbolDomain::Spatial;
  std::string profile;
  FrequencyGrid grid;
  TimeGrid time;
  std::vector<double> tau;     // temporal frequency of each entry (temporal and space-time)
  std::vector<double> values;  // symbol value of each entry

  std::size_t temporal_count() const { return time.samples(); }

  double max_magnitude() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, std::abs(v));
    return best;
  }
};

template <class Symbol>
MultiplierSpec spatial_spec(const FrequencyGrid& grid, std::string profile, Symbol&& symbol) {
  MultiplierSpec spec;
  spec.domain = SymbolDomain::Spatial;
  spec.profile = std::move(profile);
  spec.grid = grid;
  spec.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) spec.values[i] = symbol(grid.frequency(i), grid.frequency_norm(i));
  return spec;
}

inline SpectralField apply(const MultiplierSpec& spec, SpectralField spectrum) {
  if (spec.domain != SymbolDomain::Spatial) throw ShapeError("spatial application of a non-spatial symbol");
  if (!(spec.grid == spectrum.grid())) throw ShapeError("symbol and field live on different grids");
  for (std::size_t c = 0; c < spectrum.components(); ++c)
    for (std::size_t i = 0; i < spectrum.points(); ++i) spectrum.at(c, i) *= spec.values[i];
  return spectrum;
}

inline SpatialField apply(const MultiplierSpec& spec, const SpatialField& field) {
  return inverse(apply(spec, forward(field)));
}

/// Columns: entry, mode, wavenumbers, xi, |xi|, tau, value.
inline void write_csv(std::ostream& out, const MultiplierSpec& spec) {
  out << "# domain=" << to_string(spec.domain) << " profile=" << spec.profile << " grid=" << spec.grid.describe()
      << "\n";
  out << "entry,mode,k0,k1,k2,xi0,xi1,xi2,xi_norm,tau,value\n";
  const std::size_t modes = spec.domain == SymbolDomain::Temporal ? 1 : spec.grid.size();
  const std::size_t per_mode = spec.domain == SymbolDomain::Spatial ? 1 : spec.temporal_count();
  for (std::size_t i = 0; i < modes; ++i)
    for (std::size_t m = 0; m < per_mode; ++m) {
      const std::size_t entry = i * per_mode + m;
      const auto k = spec.domain == SymbolDomain::Temporal ? std::array<long, 3>{0, 0, 0} : spec.grid.wavevector(i);
      const auto xi = spec.domain == SymbolDomain::Temporal ? Frequency{0, 0, 0} : spec.grid.frequency(i);
      const double norm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
      const double tau = spec.domain == SymbolDomain::Spatial ? 0.0 : spec.tau[entry];
      out << entry << ',' << i << ',' << k[0] << ',' << k[1] << ',' << k[2] << ',' << format_real(xi[0]) << ','
          << format_real(xi[1]) << ',' << format_real(xi[2]) << ',' << format_real(norm) << ',' << format_real(tau)
          << ',' << format_real(spec.values[entry]) << '\n';
    }
}

}  // namespace wmlab
