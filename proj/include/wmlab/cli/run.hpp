#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "wmlab/cli/config.hpp"
#include "wmlab/cli/data.hpp"
#include "wmlab/cli/emit.hpp"
#include "wmlab/lab.hpp"
#include "wmlab/variation/s_norm.hpp"
#include "wmlab/wavemaps.hpp"

#ifndef WMLAB_VERSION
#define WMLAB_VERSION "0.0.0"
#endif

namespace wmlab {

inline constexpr const char* artifact_version = WMLAB_VERSION;

struct RunManifest {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string version = artifact_version;
  std::string started;
  std::string finished;
  std::size_t threads = 1;
  std::vector<std::string> files;  // relative to the output directory
  bool pass = false;
};

inline Json to_json(const RunManifest& m) {
  return Json{{"schema", manifest_schema}, {"experiment", m.experiment}, {"seed", m.seed},
              {"config_hash", m.config_hash}, {"version", m.version},   {"started", m.started},
              {"finished", m.finished},       {"threads", m.threads},   {"files", m.files},
              {"verdict", m.pass ? "pass" : "fail"}};
}

inline std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &size, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

inline std::string grid_id(const FrequencyGrid& grid) {
  return "n" + std::to_string(grid.dimension()) + "_N" + std::to_string(grid.points()) + "_L" + format_real(grid.period());
}

/// Output directory plus the list of files written into it.
class RunOutput {
 public:
  explicit RunOutput(std::filesystem::path directory) : directory_(std::move(directory)) {
    std::error_code error;
    std::filesystem::create_directories(directory_, error);
    if (error || !std::filesystem::is_directory(directory_))
      throw IoError("cannot create output directory " + directory_.string() + ": " + error.message());
  }

  std::filesystem::path file(const std::string& name) {
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
    return directory_ / name;
  }

  const std::filesystem::path& directory() const { return directory_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path directory_;
  std::vector<std::string> files_;
};

/// A validated experiment, ready to run; returns the aggregate verdict.
using PreparedRun = std::function<bool(RunOutput&)>;

namespace detail {

inline void require_dyadic(const std::vector<double>& scales, const std::string& key) {
  for (double s : scales) {
    if (!(s > 0.0)) throw ConfigError(key + " must be positive");
    const double e = std::log2(s);
    if (std::abs(e - std::round(e)) > 1e-12) throw ConfigError(key + " must be powers of two");
  }
}

inline Bracket read_bracket(const Parameters& p, const std::string& section, Bracket fallback) {
  Bracket b{p.real(section + ".bracket_lower", fallback.lower), p.real(section + ".bracket_upper", fallback.upper)};
  if (!(b.lower >= 0.0) || !(b.upper > b.lower)) throw ConfigError(section + " bracket must satisfy 0 <= lower < upper");
  return b;
}

inline SamplingSpec read_sampling(const RunConfig& config, const std::string& section) {
  const auto& p = config.parameters;
  SamplingSpec spec;
  spec.dimension = static_cast<int>(p.count("sampling.dimension", 2));
  spec.lambda0 = p.real("sampling.lambda0", spec.lambda0);
  spec.lambda1 = p.real("sampling.lambda1", spec.lambda1);
  spec.lambda2 = p.real("sampling.lambda2", spec.lambda2);
  spec.modulation = p.real("sampling.modulation", spec.modulation);
  spec.angle = p.real("sampling.angle", spec.angle);
  spec.window = p.real("sampling.window", spec.window);
  const std::size_t shared = p.count("sampling.samples", spec.samples);
  spec.samples = p.count(section + ".samples", shared);
  spec.seed = config.seed;
  spec.validate();
  return spec;
}

/// Grid overrides for checks that carry their own small grid.
template <class Options>
void read_grid_overrides(const RunConfig& config, Options& options) {
  if (config.grid) {
    if (config.grid->dimension != 2 && config.grid->dimension != 3)
      throw ConfigError("estimate checks need dimension 2 or 3");
    options.points = config.grid->points;
    options.period = config.grid->period;
  }
}

struct CheckPlan {
  std::string id;
  std::function<std::vector<EstimateRecord>()> run;
};

inline CheckPlan plan_resonance(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto spec = read_sampling(config, "resonance");
  ResonanceOptions o;
  o.scales = p.reals("resonance.scales", o.scales);
  o.high_scales = p.reals("resonance.high_scales", o.high_scales);
  o.per_cell = p.count("resonance.per_cell", o.per_cell);
  o.budget = p.count("resonance.budget", o.budget);
  o.separation = p.real("resonance.separation", o.separation);
  o.conclusion_separation = p.real("resonance.conclusion_separation", o.conclusion_separation);
  o.bracket = read_bracket(p, "resonance", o.bracket);
  require_dyadic(o.scales, "resonance.scales");
  require_dyadic(o.high_scales, "resonance.high_scales");
  if (o.per_cell == 0 || o.budget < o.per_cell) throw ConfigError("resonance budget must cover per_cell > 0");
  if (!(o.separation > 1.0) || !(o.conclusion_separation > 1.0)) throw ConfigError("separations must exceed 1");
  return {"resonance", [spec, o] {
            return std::vector<EstimateRecord>{{check_resonance(spec, o), spec}, {check_resonance_lower(spec, o), spec}};
          }};
}

inline BilinearOptions read_bilinear(const RunConfig& config, const std::string& section, const SamplingSpec& spec) {
  const auto& p = config.parameters;
  BilinearOptions o;
  o.points = p.count(section + ".points", o.points);
  o.period = p.real(section + ".period", o.period);
  o.lambdas = p.reals(section + ".lambdas", o.lambdas);
  o.window_samples = p.count(section + ".window_samples", o.window_samples);
  o.unit_radius = p.real(section + ".unit_radius", o.unit_radius);
  o.packets = p.count(section + ".packets", o.packets);
  o.spread_limit = p.real(section + ".spread_limit", o.spread_limit);
  o.slope_allowance = p.real(section + ".slope_allowance", o.slope_allowance);
  o.bracket = read_bracket(p, section, o.bracket);
  require_dyadic(o.lambdas, section + ".lambdas");
  if (o.lambdas.size() < 2) throw ConfigError(section + ".lambdas needs at least two scales");
  if (o.packets == 0) throw ConfigError(section + ".packets must be positive");
  const BilinearSetting setting(spec, o);
  for (double lambda : o.lambdas) setting.require_scale(lambda, o.unit_radius);
  return o;
}

inline CheckPlan plan_bilinear_free(const RunConfig& config) {
  const auto spec = read_sampling(config, "bilinear-free");
  const auto o = read_bilinear(config, "bilinear-free", spec);
  return {"bilinear-free", [spec, o] { return std::vector<EstimateRecord>{{check_bilinear_free(spec, o), spec}}; }};
}

inline CheckPlan plan_bilinear_atomic(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto spec = read_sampling(config, "bilinear-atomic");
  const auto o = read_bilinear(config, "bilinear-atomic", spec);
  const double a = p.real("bilinear-atomic.a", 2.0);
  const double b = p.real("bilinear-atomic.b", 2.0);
  require_bilinear_exponents(spec.dimension, a, b);
  return {"bilinear-atomic",
          [spec, o, a, b] { return std::vector<EstimateRecord>{{check_bilinear_atomic(spec, a, b, o), spec}}; }};
}

inline CheckPlan plan_besov(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto spec = read_sampling(config, "besov");
  BesovOptions o;
  read_grid_overrides(config, o);
  o.modulations = p.reals("besov.modulations", o.modulations);
  o.exponents = p.reals("besov.exponents", o.exponents);
  o.time_samples = p.count("besov.time_samples", o.time_samples);
  o.dt = p.real("besov.dt", o.dt);
  o.bracket = read_bracket(p, "besov", o.bracket);
  require_dyadic(o.modulations, "besov.modulations");
  for (double q : o.exponents)
    if (!(q >= 1.0)) throw ConfigError("besov.exponents must be at least 1");
  const TimeGrid time(0.0, o.dt, o.time_samples);
  for (double d : o.modulations) require_temporal_scale(time, 0.5 * d);
  return {"besov", [spec, o] { return std::vector<EstimateRecord>{{check_besov(spec, o), spec}}; }};
}

inline CheckPlan plan_highlow(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto spec = read_sampling(config, "highlow");
  HighLowOptions o;
  read_grid_overrides(config, o);
  o.p = p.real("highlow.p", o.p);
  o.constant = p.real("highlow.constant", o.constant);
  o.time_samples = p.count("highlow.time_samples", o.time_samples);
  o.dt = p.real("highlow.dt", o.dt);
  if (!(o.p >= 1.0)) throw ConfigError("highlow.p must be at least 1");
  if (!(o.constant > 0.0)) throw ConfigError("highlow.constant must be positive");
  require_temporal_scale(TimeGrid(0.0, o.dt, o.time_samples), 4.0);
  return {"highlow", [spec, o] { return std::vector<EstimateRecord>{{check_highlow(spec, o), spec}}; }};
}

inline CheckPlan plan_orthogonality(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto spec = read_sampling(config, "orthogonality");
  OrthogonalityOptions o;
  read_grid_overrides(config, o);
  o.caps = p.count("orthogonality.caps", o.caps);
  o.cube_side = p.real("orthogonality.cube_side", o.cube_side);
  o.up_exponent = p.real("orthogonality.up_exponent", o.up_exponent);
  o.vp_exponent = p.real("orthogonality.vp_exponent", o.vp_exponent);
  if (o.up_exponent < 1.0 || o.up_exponent > 2.0) throw ConfigError("orthogonality.up_exponent must lie in [1,2]");
  if (o.vp_exponent < 2.0) throw ConfigError("orthogonality.vp_exponent must be at least 2");
  if (spec.dimension != 2) throw ConfigError("orthogonality check runs in dimension 2");
  if (o.caps == 0 || !(o.cube_side > 0.0)) throw ConfigError("orthogonality cover sizes must be positive");
  return {"orthogonality", [spec, o] { return std::vector<EstimateRecord>{{check_orthogonality(spec, o), spec}}; }};
}

inline CheckPlan plan_duality(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto spec = read_sampling(config, "duality");
  DualityCheckOptions o;
  read_grid_overrides(config, o);
  o.exponents = p.reals("duality.exponents", o.exponents);
  o.lower_bound_trials = p.count("duality.lower_bound_trials", o.lower_bound_trials);
  for (double q : o.exponents)
    if (!(q > 1.0)) throw ConfigError("duality.exponents must exceed 1");
  return {"duality", [spec, o] { return std::vector<EstimateRecord>{{check_duality(spec, o), spec}}; }};
}

inline CheckPlan plan_division(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto spec = read_sampling(config, "division");
  DivisionOptions o;
  read_grid_overrides(config, o);
  o.scales = p.reals("division.scales", o.scales);
  o.nonlinear = p.flag("division.nonlinear", o.nonlinear);
  o.bracket = read_bracket(p, "division", o.bracket);
  require_dyadic(o.scales, "division.scales");
  const FrequencyGrid grid(spec.dimension, o.points, o.period);
  for (double lambda : o.scales)
    if (4.0 * lambda > grid.nyquist()) throw ConfigError("division.scales exceed the grid");
  return {"division", [spec, o] { return std::vector<EstimateRecord>{{check_division(spec, o), spec}}; }};
}

inline const std::vector<std::pair<std::string, std::function<CheckPlan(const RunConfig&)>>>& check_planners() {
  static const std::vector<std::pair<std::string, std::function<CheckPlan(const RunConfig&)>>> planners{
      {"check-resonance", plan_resonance},       {"check-bilinear-free", plan_bilinear_free},
      {"check-bilinear-atomic", plan_bilinear_atomic}, {"check-besov", plan_besov},
      {"check-highlow", plan_highlow},           {"check-orthogonality", plan_orthogonality},
      {"check-duality", plan_duality},           {"check-division", plan_division}};
  return planners;
}

inline PreparedRun prepare_checks(std::vector<CheckPlan> plans) {
  return [plans = std::move(plans)](RunOutput& out) {
    std::vector<EstimateRecord> all;
    for (const auto& plan : plans)
      for (auto& record : plan.run()) {
        write_json_file(out.file(record.report.id + ".json"), to_json(record));
        all.push_back(std::move(record));
      }
    emit_report(out.file("checks.csv"), all, ReportFormat::Csv, WriteMode::Truncate);
    return std::all_of(all.begin(), all.end(), [](const EstimateRecord& r) { return r.report.pass(); });
  };
}

struct DataPlan {
  std::string kind;
  double wavenumber = 1.0;
  double frequency = 2.0;
  double amplitude = 1e-2;
  long band = 3;

  CauchyData make(const FrequencyGrid& grid, std::uint64_t seed) const {
    if (kind == "constant") return constant_data(grid);
    if (kind == "equator") return equator_data(grid, wavenumber, frequency);
    RandomStream rng(seed, 0);
    return small_sphere_data(grid, rng, amplitude, band);
  }
};

inline DataPlan read_data(const RunConfig& config, const FrequencyGrid& grid) {
  const auto& p = config.parameters;
  DataPlan d;
  d.kind = p.text("data.kind", "random");
  d.wavenumber = p.real("data.wavenumber", d.wavenumber);
  d.frequency = p.real("data.frequency", d.frequency);
  d.amplitude = p.real("data.amplitude", d.amplitude);
  d.band = static_cast<long>(p.count("data.band", 3));
  if (d.kind != "random" && d.kind != "constant" && d.kind != "equator")
    throw ConfigError("data.kind must be random, constant or equator");
  const long limit = static_cast<long>(grid.points() / 3);
  if (d.kind == "equator" && (d.wavenumber != std::round(d.wavenumber) || std::abs(d.wavenumber) > limit))
    throw ConfigError("data.wavenumber must be an integer below N/3");
  if (d.kind == "random" && (d.band < 1 || d.band > limit)) throw ConfigError("data.band must lie in [1, N/3]");
  if (!(d.amplitude >= 0.0)) throw ConfigError("data.amplitude must be nonnegative");
  return d;
}

inline const TimeSpec& require_causal_time(const RunConfig& config) {
  const auto& time = config.require_time();
  if (time.start != 0.0) throw ConfigError(config.experiment + " needs time.start = 0");
  return time;
}

inline double relative_drift(const Trajectory& t) {
  const double initial = t.diagnostics.front().energy;
  double worst = 0.0;
  for (const auto& d : t.diagnostics) worst = std::max(worst, std::abs(d.energy - initial));
  return initial > 0.0 ? worst / initial : worst;
}

inline double max_constraint(const Trajectory& t) {
  double worst = 0.0;
  for (const auto& d : t.diagnostics) worst = std::max(worst, d.constraint);
  return worst;
}

inline Json grid_json(const FrequencyGrid& grid) {
  return Json{{"dimension", grid.dimension()}, {"points", grid.points()}, {"period", grid.period()}};
}

inline PreparedRun prepare_evolve(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto grid = config.require_grid().make();
  const auto time = require_causal_time(config);
  const auto data = read_data(config, grid);
  const auto scheme_name = p.text("evolve.scheme", "rk4");
  if (scheme_name != "rk4" && scheme_name != "rk2") throw ConfigError("evolve.scheme must be rk4 or rk2");
  EvolveOptions options{scheme_name == "rk4" ? Scheme::LawsonRK4 : Scheme::LawsonRK2,
                        p.count("evolve.record_stride", 1)};
  const double energy_tolerance = p.real("evolve.energy_tolerance", 1e-6);
  const double constraint_tolerance = p.real("evolve.constraint_tolerance", 1e-6);
  const double exact_tolerance = p.real("evolve.exact_tolerance", 1e-6);
  if (options.record_stride == 0 || (time.samples - 1) % options.record_stride != 0)
    throw ConfigError("evolve.record_stride must divide the number of steps");
  const std::uint64_t seed = config.seed;
  return [=](RunOutput& out) {
    const auto initial = data.make(grid, seed);
    const auto trajectory = evolve(initial, time.horizon(), time.step, options);
    {
      std::ofstream csv(out.file("evolve_diagnostics.csv"));
      write_diagnostics_csv(csv, trajectory);
      if (!csv) throw IoError("write failed for evolve_diagnostics.csv");
    }
    const double drift = relative_drift(trajectory);
    const double constraint = max_constraint(trajectory);
    double residual = 0.0;
    for (const auto& d : trajectory.diagnostics) residual = std::max(residual, d.step_residual);
    bool pass = drift <= energy_tolerance && constraint <= constraint_tolerance;
    Json summary{{"schema", report_schema}, {"experiment", "evolve"},      {"seed", seed},
                 {"grid", grid_json(grid)},  {"dt", time.step},             {"horizon", time.horizon()},
                 {"scheme", scheme_name},    {"data", data.kind},           {"energy_initial", trajectory.diagnostics.front().energy},
                 {"energy_relative_drift", drift}, {"constraint_max", constraint}, {"step_residual_max", residual}};
    if (data.kind == "equator") {
      double error = 0.0;
      for (std::size_t j = 0; j < trajectory.phi.samples(); ++j) {
        const auto exact = equator_data(grid, data.wavenumber, data.frequency, trajectory.time().time(j));
        error = std::max(error, l2_distance(trajectory.phi[j], exact.f));
      }
      summary["exact_l2_error_max"] = error;
      summary["exact_tolerance"] = exact_tolerance;
      pass = pass && error <= exact_tolerance;
    }
    summary["energy_tolerance"] = energy_tolerance;
    summary["constraint_tolerance"] = constraint_tolerance;
    summary["verdict"] = pass ? "pass" : "fail";
    write_json_file(out.file("evolve.json"), summary);
    return pass;
  };
}

inline PreparedRun prepare_picard(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto grid = config.require_grid().make();
  const auto time = require_causal_time(config);
  const auto data = read_data(config, grid);
  const std::size_t iterations = p.count("picard.iterations", 20);
  const double tolerance = p.real("picard.tolerance", 1e-14);
  const double cutoff = p.real("picard.cutoff_scale", 1.0);
  const double agreement = p.real("picard.agreement", 1e-4);
  const std::size_t substeps = p.count("picard.reference_substeps", 4);
  if (iterations < 2) throw ConfigError("picard.iterations must be at least 2");
  if (substeps == 0) throw ConfigError("picard.reference_substeps must be positive");
  if (!(cutoff > 0.0)) throw ConfigError("picard.cutoff_scale must be positive");
  const std::uint64_t seed = config.seed;
  return [=](RunOutput& out) {
    const auto initial = data.make(grid, seed);
    const auto run = picard_iterate(initial, time.make(), iterations, tolerance, cutoff);
    const auto reference = evolve(initial, time.horizon(), time.step / static_cast<double>(substeps),
                                  {.scheme = Scheme::LawsonRK4, .record_stride = substeps});
    double distance = 0.0;
    for (std::size_t j = 0; j < time.samples; ++j)
      distance = std::max(distance, l2_distance(run.solution.phi[j], reference.phi[j]));
    const double contraction = run.contraction();
    const bool pass = !run.ratios.empty() && contraction < 1.0 && distance <= agreement;
    {
      std::ofstream csv(out.file("picard_differences.csv"));
      csv << "iteration,difference\n";
      for (std::size_t k = 0; k < run.differences.size(); ++k) csv << k + 1 << ',' << format_real(run.differences[k]) << '\n';
      if (!csv) throw IoError("write failed for picard_differences.csv");
    }
    write_json_file(out.file("picard.json"),
                    Json{{"schema", report_schema},    {"experiment", "picard"},   {"seed", seed},
                         {"grid", grid_json(grid)},     {"dt", time.step},          {"horizon", time.horizon()},
                         {"data", data.kind},           {"iterations", run.differences.size()},
                         {"contraction", contraction},  {"ratios", run.ratios},     {"evolve_distance", distance},
                         {"agreement", agreement},      {"verdict", pass ? "pass" : "fail"}});
    return pass;
  };
}

inline PreparedRun prepare_scattering(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto grid = config.require_grid().make();
  const auto time = require_causal_time(config);
  const auto data = read_data(config, grid);
  const double horizon = time.horizon();
  const auto probes = p.reals("scattering.probes", {0.25 * horizon, 0.5 * horizon, horizon});
  const double slack = p.real("scattering.slack", 1e-12);
  if (probes.size() < 3) throw ConfigError("scattering.probes needs at least three times");
  for (std::size_t k = 0; k < probes.size(); ++k)
    if (probes[k] < 0.0 || probes[k] > horizon + 0.5 * time.step || (k > 0 && !(probes[k] > probes[k - 1])))
      throw ConfigError("scattering.probes must increase inside [0, horizon]");
  const std::uint64_t seed = config.seed;
  return [=](RunOutput& out) {
    const auto initial = data.make(grid, seed);
    const auto trajectory = evolve(initial, horizon, time.step);
    const auto state = scattering_extract(trajectory, probes);
    bool decreasing = true;
    for (std::size_t k = 1; k < state.cauchy_profile.size(); ++k)
      decreasing = decreasing && state.cauchy_profile[k] <= state.cauchy_profile[k - 1] + slack;
    write_json_file(out.file("scattering.json"),
                    Json{{"schema", report_schema},
                         {"experiment", "scattering"},
                         {"seed", seed},
                         {"grid", grid_json(grid)},
                         {"dt", time.step},
                         {"data", data.kind},
                         {"probe_times", state.probe_times},
                         {"cauchy_profile", state.cauchy_profile},
                         {"f_infinity_l2", l2_norm(state.f_infinity)},
                         {"g_infinity_l2", l2_norm(state.g_infinity)},
                         {"energy_final", trajectory.diagnostics.back().energy},
                         {"verdict", decreasing ? "pass" : "fail"}});
    return decreasing;
  };
}

inline PreparedRun prepare_norms(const RunConfig& config) {
  const auto& p = config.parameters;
  const auto grid = config.require_grid().make();
  const auto time = config.require_time().make();
  const double scale = p.real("norms.scale", 2.0);
  const auto exponents = p.reals("norms.exponents", {2.0});
  require_dyadic({scale}, "norms.scale");
  if (2.0 * scale > grid.nyquist()) throw ConfigError("norms.scale exceeds the grid");
  for (double q : exponents)
    if (!(q > 1.0)) throw ConfigError("norms.exponents must exceed 1");
  const std::uint64_t seed = config.seed;
  return [=](RunOutput& out) {
    RandomStream rng(seed, 0);
    const auto wave = banded_free_wave(grid, time, scale, rng);
    const auto proxy = s_norm_proxy(wave.value, wave.velocity);
    std::vector<NormRecord> records;
    const auto id = grid_id(grid);
    for (const auto* r : {&proxy.plus, &proxy.minus, &proxy.s_norm, &proxy.s_weak}) records.push_back({*r, id, seed});
    for (double q : exponents) records.push_back({up_norm_report("u", wave.value, q), id, seed});
    emit_report(out.file("norms.jsonl"), records, ReportFormat::Json, WriteMode::Truncate);
    emit_report(out.file("norms.csv"), records, ReportFormat::Csv, WriteMode::Truncate);
    return std::all_of(records.begin(), records.end(),
                       [](const NormRecord& r) { return r.report.lower <= r.report.upper * (1.0 + 1e-12) + 1e-300; });
  };
}

}  // namespace detail

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"evolve",
                                            "picard",
                                            "scattering",
                                            "norms",
                                            "check-resonance",
                                            "check-bilinear-free",
                                            "check-bilinear-atomic",
                                            "check-besov",
                                            "check-highlow",
                                            "check-orthogonality",
                                            "check-duality",
                                            "check-division",
                                            "all-checks"};
  return ids;
}

/// Parses and validates every parameter of the experiment; throws ConfigError without touching the disk.
inline PreparedRun prepare(const RunConfig& config) {
  PreparedRun job;
  try {
    if (config.experiment == "evolve") job = detail::prepare_evolve(config);
    else if (config.experiment == "picard") job = detail::prepare_picard(config);
    else if (config.experiment == "scattering") job = detail::prepare_scattering(config);
    else if (config.experiment == "norms") job = detail::prepare_norms(config);
    else if (config.experiment == "all-checks") {
      std::vector<detail::CheckPlan> plans;
      for (const auto& [id, planner] : detail::check_planners()) plans.push_back(planner(config));
      job = detail::prepare_checks(std::move(plans));
    } else {
      for (const auto& [id, planner] : detail::check_planners())
        if (id == config.experiment) job = detail::prepare_checks({planner(config)});
    }
  } catch (const RangeError& e) {
    throw ConfigError(std::string("invalid scales: ") + e.what());
  } catch (const ResolutionError& e) {
    throw ConfigError(std::string("invalid scales: ") + e.what());
  } catch (const ArityError& e) {
    throw ConfigError(e.what());
  }
  if (!job) throw ConfigError("unknown experiment '" + config.experiment + "'");
  const auto unused = config.parameters.unused();
  if (!unused.empty()) {
    std::string list;
    for (const auto& key : unused) list += (list.empty() ? "" : ", ") + key;
    throw ConfigError("unknown keys for " + config.experiment + ": " + list);
  }
  return job;
}

/// Validates, runs, and writes the manifest last.
inline RunManifest run(const RunConfig& config) {
  const auto job = prepare(config);
  RunManifest manifest;
  manifest.experiment = config.experiment;
  manifest.seed = config.seed;
  manifest.config_hash = sha256_hex(config.canonical());
  manifest.threads = thread_count();
  RunOutput out(config.output);
  manifest.started = utc_timestamp();
  manifest.pass = job(out);
  manifest.finished = utc_timestamp();
  manifest.files = out.files();
  write_json_file(out.directory() / "manifest.json", to_json(manifest));
  return manifest;
}

}  // namespace wmlab
