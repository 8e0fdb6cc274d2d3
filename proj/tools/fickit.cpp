#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fickit/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fickit: information-criterion experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::string> out_dir;

  for (const char* name : {"simulate", "sweep", "landscape", "oracle-suite", "evt-table"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--replicates", replicates, "override the replicate count");
    sub->add_option("--out", out_dir, "override the output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fickit::cli::kOk : fickit::cli::kUsage;
  }

  fickit::cli::ExperimentConfig config;
  try {
    config = fickit::cli::load_config(config_path);
  } catch (const fickit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fickit::cli::kUsage;
  }
  if (seed) config.seed = *seed;
  if (replicates) config.replicates = *replicates;
  if (out_dir) config.output_dir = *out_dir;

  const std::string command = app.get_subcommands().front()->get_name();
  return fickit::cli::run_command(command, config, std::cout, std::cerr);
}
