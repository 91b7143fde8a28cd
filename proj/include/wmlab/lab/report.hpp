#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wmlab/errors.hpp"

namespace wmlab {

/// Scales and sampling controls shared by the estimate checks.
struct SamplingSpec {
  int dimension = 2;
  double lambda0 = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double modulation = 1.0;  // d
  double angle = 1.0;       // alpha
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  double window = 600.0;

  double mu() const { return std::min({lambda0, lambda1, lambda2}); }

  void validate() const {
    if (dimension < 2 || dimension > 3) throw ConfigError("estimate checks need dimension 2 or 3");
    for (double scale : {lambda0, lambda1, lambda2, modulation}) {
      if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("scales must be positive");
      const double exponent = std::log2(scale);
      if (std::abs(exponent - std::round(exponent)) > 1e-12) throw ConfigError("scales must be dyadic");
    }
    if (!(angle > 0.0) || angle > 1.0) throw ConfigError("angle scale must lie in (0,1]");
    if (samples == 0) throw ConfigError("sample count must be positive");
    if (!(window > 0.0)) throw ConfigError("window length must be positive");
  }
};

struct Bracket {
  double lower = 0.05;
  double upper = 20.0;

  bool contains(double value) const { return value >= lower && value <= upper; }
  static Bracket one_sided(double upper) { return {0.0, upper}; }
};

struct RatioStats {
  std::size_t count = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;

  static RatioStats of(std::vector<double> values) {
    RatioStats stats;
    stats.count = values.size();
    if (values.empty()) return stats;
    std::sort(values.begin(), values.end());
    stats.min = values.front();
    stats.max = values.back();
    const std::size_t mid = values.size() / 2;
    stats.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    return stats;
  }
};

/// Least-squares line through (log2 x, log2 y); residual is the rms deviation.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::size_t points = 0;
};

inline SlopeFit fit_log2_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ShapeError("slope fit needs paired samples");
  if (x.size() < 2) throw ArityError("slope fit needs at least two points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DegenerateInputError("slope fit needs positive data");
    lx.push_back(std::log2(x[i]));
    ly.push_back(std::log2(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DegenerateInputError("slope fit needs distinct abscissae");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = lx.size();
  double squares = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    squares += e * e;
  }
  fit.residual = std::sqrt(squares / n);
  return fit;
}

/// One row of a sweep table, e.g. one lambda or one dyadic triple.
struct TableRow {
  std::string label;
  std::vector<double> scales;
  RatioStats stats;
  bool feasible = true;
};

/// A named pass condition beyond the ratio bracket, e.g. a slope limit.
struct Condition {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct EstimateReport {
  std::string id;
  std::map<std::string, double> parameters;
  std::vector<double> ratios;
  RatioStats stats;
  Bracket bracket;
  std::size_t violations = 0;
  std::optional<SlopeFit> slope;
  std::vector<TableRow> table;
  std::vector<Condition> conditions;
  std::vector<std::string> notes;

  bool pass() const {
    return violations == 0 && std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.passed; });
  }

  /// Recomputes statistics and bracket violations from `ratios`.
  void summarize() {
    stats = RatioStats::of(ratios);
    violations = static_cast<std::size_t>(
        std::count_if(ratios.begin(), ratios.end(), [this](double r) { return !bracket.contains(r); }));
  }

  void require(std::string name, double value, double limit, bool passed) {
    conditions.push_back({std::move(name), value, limit, passed});
  }
};

inline std::string dyadic_label(const std::vector<double>& scales) {
  std::string label;
  for (double s : scales) {
    if (!label.empty()) label += '/';
    const double e = std::log2(s);
    label += std::abs(e - std::round(e)) < 1e-12 ? "2^" + std::to_string(static_cast<long>(std::round(e)))
                                                   : std::to_string(s);
  }
  return label;
}

}  // namespace wmlab
