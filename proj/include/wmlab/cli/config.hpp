#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wmlab/errors.hpp"
#include "wmlab/fourier/grid.hpp"
#include "wmlab/fourier/io.hpp"

namespace wmlab {

/// Typed access to "section.key" strings; remembers which keys were read.
class Parameters {
 public:
  Parameters() = default;
  explicit Parameters(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.contains(key); }

  std::string text(const std::string& key, const std::string& fallback) const {
    return lookup(key).value_or(fallback);
  }

  double real(const std::string& key, double fallback) const {
    const auto raw = lookup(key);
    return raw ? parse_real(key, *raw) : fallback;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const auto raw = lookup(key);
    if (!raw) return fallback;
    const double value = parse_real(key, *raw);
    if (value < 0.0 || value != std::floor(value) || value > 9.0e15) throw ConfigError(key + " must be a nonnegative integer");
    return static_cast<std::size_t>(value);
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto raw = lookup(key);
    if (!raw) return fallback;
    if (*raw == "true" || *raw == "yes" || *raw == "1") return true;
    if (*raw == "false" || *raw == "no" || *raw == "0") return false;
    throw ConfigError(key + " must be true or false, got '" + *raw + "'");
  }

  /// Comma- or space-separated reals.
  std::vector<double> reals(const std::string& key, std::vector<double> fallback) const {
    const auto raw = lookup(key);
    if (!raw) return fallback;
    std::string spaced = *raw;
    for (auto& c : spaced)
      if (c == ',') c = ' ';
    std::istringstream in(spaced);
    std::vector<double> out;
    std::string token;
    while (in >> token) out.push_back(parse_real(key, token));
    if (out.empty()) throw ConfigError(key + " is an empty list");
    return out;
  }

  /// Keys never read, for typo detection.
  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_)
      if (!used_.contains(key)) out.push_back(key);
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::optional<std::string> lookup(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  static double parse_real(const std::string& key, const std::string& raw) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(raw, &consumed);
    } catch (const std::exception&) {
      throw ConfigError(key + " is not a number: '" + raw + "'");
    }
    if (consumed != raw.size() || !std::isfinite(value)) throw ConfigError(key + " is not a finite number: '" + raw + "'");
    return value;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

struct GridSpec {
  int dimension = 2;
  std::size_t points = 64;
  double period = 0.0;

  FrequencyGrid make() const { return FrequencyGrid(dimension, points, period); }
};

struct TimeSpec {
  double start = 0.0;
  double step = 0.0;
  std::size_t samples = 0;

  TimeGrid make() const { return TimeGrid(start, step, samples); }
  double horizon() const { return step * static_cast<double>(samples - 1); }
};

/// A parsed run: experiment id, seed, output directory, optional grids, and every other key as parameters.
struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string output = "wmlab-out";
  std::optional<GridSpec> grid;
  std::optional<TimeSpec> time;
  Parameters parameters;

  /// Canonical "section.key=value" lines, sorted, with the effective seed and experiment.
  std::string canonical() const {
    std::string text = "run.experiment=" + experiment + "\nrun.seed=" + std::to_string(seed) + "\n";
    if (grid)
      text += "grid.dimension=" + std::to_string(grid->dimension) + "\ngrid.points=" + std::to_string(grid->points) +
              "\ngrid.period=" + format_real(grid->period) + "\n";
    if (time)
      text += "time.start=" + format_real(time->start) + "\ntime.step=" + format_real(time->step) +
              "\ntime.samples=" + std::to_string(time->samples) + "\n";
    for (const auto& [key, value] : parameters.values()) text += key + "=" + value + "\n";
    return text;
  }

  const GridSpec& require_grid() const {
    if (!grid) throw ConfigError(experiment + " needs a [grid] section");
    return *grid;
  }
  const TimeSpec& require_time() const {
    if (!time) throw ConfigError(experiment + " needs a [time] section");
    return *time;
  }
};

namespace detail {

inline std::map<std::string, std::string> flatten_sections(const boost::property_tree::ptree& tree) {
  std::map<std::string, std::string> out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' lies outside any section");
    for (const auto& [key, value] : body) out[section + "." + key] = value.get_value<std::string>();
  }
  return out;
}

inline std::string take(std::map<std::string, std::string>& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end()) return {};
  auto value = it->second;
  values.erase(it);
  return value;
}

}  // namespace detail

/// Parses the line-oriented "[section]\nkey = value" format; ';' and '#' start comment lines.
/// A seed given here replaces run.seed, which is otherwise mandatory.
inline RunConfig parse_config(std::istream& in, const std::string& origin = "config",
                              std::optional<std::uint64_t> seed_override = std::nullopt) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  auto values = detail::flatten_sections(tree);
  RunConfig config;
  config.experiment = detail::take(values, "run.experiment");
  const auto seed = detail::take(values, "run.seed");
  if (seed_override) {
    config.seed = *seed_override;
  } else if (!seed.empty()) {
    std::size_t consumed = 0;
    try {
      config.seed = std::stoull(seed, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != seed.size() || seed.front() == '-') throw ConfigError(origin + ": run.seed is not a nonnegative integer");
  } else {
    throw ConfigError(origin + ": run.seed is mandatory");
  }
  if (auto out = detail::take(values, "run.out"); !out.empty()) config.output = out;

  const Parameters sections(values);
  if (sections.has("grid.points") || sections.has("grid.period") || sections.has("grid.dimension")) {
    GridSpec grid;
    grid.dimension = static_cast<int>(sections.count("grid.dimension", 2));
    grid.points = sections.count("grid.points", 64);
    grid.period = sections.real("grid.period", 2.0 * std::numbers::pi);
    if (grid.dimension < 1 || grid.dimension > 3) throw ConfigError("grid.dimension must be 1, 2 or 3");
    if (grid.points < 2 || grid.points % 2 != 0) throw ConfigError("grid.points must be even and at least 2");
    if (!(grid.period > 0.0)) throw ConfigError("grid.period must be positive");
    config.grid = grid;
  }
  if (sections.has("time.step") || sections.has("time.samples") || sections.has("time.start")) {
    TimeSpec time;
    time.start = sections.real("time.start", 0.0);
    time.step = sections.real("time.step", 0.0);
    time.samples = sections.count("time.samples", 0);
    if (!(time.step > 0.0)) throw ConfigError("time.step must be positive");
    if (time.samples < 2) throw ConfigError("time.samples must be at least 2");
    config.time = time;
  }
  for (const char* key : {"grid.dimension", "grid.points", "grid.period", "time.start", "time.step", "time.samples"})
    values.erase(key);
  for (const auto& [key, value] : values)
    if (key.starts_with("run.")) throw ConfigError(origin + ": unknown key " + key);
  config.parameters = Parameters(std::move(values));
  return config;
}

inline RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  return parse_config(in, path, seed_override);
}

}  // namespace wmlab
