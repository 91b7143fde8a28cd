#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wmlab/lab/parallel.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/lab/sampling.hpp"
#include "wmlab/multipliers/spatial.hpp"
#include "wmlab/variation/p_variation.hpp"

namespace wmlab {

/// Fixed-time symbols of a family T_k on one grid with its square-sum and overlap constants.
struct SymbolFamily {
  std::vector<MultiplierSpec> symbols;
  double lower = 0.0;       // M_1 = min over modes of (sum_k |m_k|^2)^{1/2}
  double upper = 0.0;       // M_2 = max over modes of (sum_k |m_k|^2)^{1/2}
  std::size_t overlap = 0;  // max over modes of #{k : m_k != 0}

  explicit SymbolFamily(std::vector<MultiplierSpec> family) : symbols(std::move(family)) {
    if (symbols.empty()) throw ArityError("symbol family is empty");
    const std::size_t modes = symbols.front().values.size();
    lower = INFINITY;
    for (std::size_t i = 0; i < modes; ++i) {
      double square = 0.0;
      std::size_t hits = 0;
      for (const auto& s : symbols) {
        square += s.values[i] * s.values[i];
        hits += s.values[i] != 0.0 ? 1 : 0;
      }
      lower = std::min(lower, std::sqrt(square));
      upper = std::max(upper, std::sqrt(square));
      overlap = std::max(overlap, hits);
    }
  }

  static SymbolFamily caps(const FrequencyGrid& grid, const CapCover& cover) {
    std::vector<MultiplierSpec> family;
    for (std::size_t k = 0; k < cover.size(); ++k) family.push_back(cover.spec(grid, k));
    return SymbolFamily(std::move(family));
  }

  /// Cubes meeting the lattice only.
  static SymbolFamily cubes(const CubeCover& cover) {
    std::vector<MultiplierSpec> family;
    for (std::size_t k = 0; k < cover.size(); ++k) {
      auto spec = cover.spec(k);
      if (spec.max_magnitude() > 0.0) family.push_back(std::move(spec));
    }
    return SymbolFamily(std::move(family));
  }
};

/// (sum_k (sum_I ||T_k f_I||^p)^{2/p})^{1/2} / M_2 for an atom; at most 1 when p <= 2.
inline double atomic_square_sum_ratio(const UpAtom& atom, const SymbolFamily& family) {
  const double p = atom.exponent();
  std::vector<SpectralField> spectra;
  for (const auto& value : atom.step().values()) spectra.push_back(forward(value));
  double total = 0.0;
  for (const auto& symbol : family.symbols) {
    double inner = 0.0;
    for (const auto& spectrum : spectra) inner += std::pow(l2_norm(apply(symbol, spectrum)), p);
    total += std::pow(inner, 2.0 / p);
  }
  return std::sqrt(total) / family.upper;
}

/// ||sum_k T_k v||_{V^p} / (overlap^{1/2} (sum_k ||T_k v||_{V^p}^2)^{1/2}); at most 1 when p >= 2.
inline double variation_synthesis_ratio(const SpaceTimeField& v, double p, const SymbolFamily& family) {
  std::vector<SpectralField> spectra;
  for (const auto& snapshot : v.snapshots()) spectra.push_back(forward(snapshot));
  auto synthesis = v.zeros_like();
  double squares = 0.0;
  for (const auto& symbol : family.symbols) {
    auto piece = v.zeros_like();
    for (std::size_t j = 0; j < v.samples(); ++j) piece[j] = inverse(apply(symbol, spectra[j]));
    synthesis += piece;
    const double norm = vp_norm(piece, p);
    squares += norm * norm;
  }
  const double denominator = std::sqrt(static_cast<double>(family.overlap) * squares);
  return denominator == 0.0 ? 0.0 : vp_norm(synthesis, p) / denominator;
}

struct OrthogonalityOptions {
  std::size_t points = 16;
  double period = 2.0 * std::numbers::pi;
  long band = 6;
  std::size_t time_samples = 32;
  double dt = 0.1;
  std::size_t caps = 64;
  double cube_side = 2.0;
  std::size_t max_pieces = 6;
  double up_exponent = 2.0;  // U^p branch, p in [1,2]
  double vp_exponent = 2.0;  // V^p branch, p >= 2
  double slack = 1e-12;
};

/// Square-sum bounds for cap and cube families: atomic U^p branch and DP V^p branch, both with exact constants.
inline EstimateReport check_orthogonality(const SamplingSpec& spec, const OrthogonalityOptions& options = {}) {
  if (options.up_exponent < 1.0 || options.up_exponent > 2.0) throw ConfigError("U^p branch needs p in [1,2]");
  if (options.vp_exponent < 2.0) throw ConfigError("V^p branch needs p >= 2");
  if (spec.dimension != 2) throw ConfigError("orthogonality check runs in dimension 2");
  const FrequencyGrid grid(spec.dimension, options.points, options.period);
  const TimeGrid time(0.0, options.dt, options.time_samples);
  const std::vector<SymbolFamily> families{
      SymbolFamily::caps(grid, CapCover(2, 2.0 * std::numbers::pi / static_cast<double>(options.caps))),
      SymbolFamily::cubes(CubeCover(grid, options.cube_side))};
  const std::vector<std::string> names{"caps", "cubes"};
  EstimateReport report;
  report.id = "orthogonality";
  report.bracket = Bracket::one_sided(1.0 + options.slack);
  report.parameters = {{"points", static_cast<double>(options.points)},
                       {"caps", static_cast<double>(families[0].symbols.size())},
                       {"cap_M1", families[0].lower},
                       {"cap_M2", families[0].upper},
                       {"cap_overlap", static_cast<double>(families[0].overlap)},
                       {"cubes", static_cast<double>(families[1].symbols.size())},
                       {"cube_M1", families[1].lower},
                       {"cube_M2", families[1].upper},
                       {"cube_overlap", static_cast<double>(families[1].overlap)},
                       {"up_exponent", options.up_exponent},
                       {"vp_exponent", options.vp_exponent},
                       {"trials", static_cast<double>(spec.samples)},
                       {"seed", static_cast<double>(spec.seed)}};
  const std::size_t per = spec.samples;
  const auto ratios = parallel_map<double>(4 * per, [&](std::size_t job) {
    RandomStream rng(spec.seed, job);
    const auto& family = families[(job / per) % 2];
    if (job < 2 * per)
      return atomic_square_sum_ratio(random_atom(time, grid, options.band, options.max_pieces, options.up_exponent, rng),
                                     family);
    return variation_synthesis_ratio(random_space_time(time, grid, options.band, rng), options.vp_exponent, family);
  });
  report.ratios = ratios;
  const std::vector<std::string> branches{"U", "V"};
  for (std::size_t block = 0; block < 4; ++block) {
    const std::vector<double> row(ratios.begin() + static_cast<long>(block * per),
                                  ratios.begin() + static_cast<long>((block + 1) * per));
    report.table.push_back({branches[block / 2] + " " + names[block % 2], {}, RatioStats::of(row), true});
  }
  report.summarize();
  return report;
}

}  // namespace wmlab
