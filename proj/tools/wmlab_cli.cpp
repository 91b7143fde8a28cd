// wmlab-cli <experiment> --config <path> [--seed S] [--out DIR]
//
// Exit status: 0 pass, 1 verdict fail, 2 configuration error, 3 runtime error.
// WMLAB_THREADS sets the worker count.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "wmlab/cli/run.hpp"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

std::string experiment_list() {
  std::string list;
  for (const auto& id : wmlab::experiment_ids()) list += (list.empty() ? "" : " | ") + id;
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-map solvers and estimate checks on periodic grids"};
  app.set_version_flag("--version", std::string(wmlab::artifact_version));
  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  app.add_option("experiment", experiment, experiment_list())->required();
  app.add_option("--config", config_path, "key=value config file with [sections]")->required();
  app.add_option("--seed", seed, "overrides run.seed");
  app.add_option("--out", out, "output directory (overrides run.out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    auto config = wmlab::load_config(config_path, seed);
    if (!config.experiment.empty() && config.experiment != experiment)
      throw wmlab::ConfigError("config names experiment '" + config.experiment + "' but '" + experiment + "' was requested");
    config.experiment = experiment;
    if (out) config.output = *out;
    const auto manifest = wmlab::run(config);
    std::cout << experiment << ": " << (manifest.pass ? "pass" : "fail") << " (" << manifest.files.size()
              << " files in " << config.output << ")\n";
    return manifest.pass ? exit_pass : exit_fail;
  } catch (const wmlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}
