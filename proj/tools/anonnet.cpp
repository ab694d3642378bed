#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "anonnet/error.hpp"
#include "anonnet/features.hpp"
#include "anonnet/pipeline.hpp"

namespace {

int exit_code(anonnet::ExitCode c) { return static_cast<int>(c); }

void print_schema() {
  const auto& schema = anonnet::FeatureSchema::standard();
  std::cout << "index\tname\n";
  for (std::size_t i = 0; i < schema.size(); ++i) std::cout << i << '\t' << schema[i].name << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective-account identification, influence ranking and topic modelling"};
  app.set_version_flag("--version", std::string(ANONNET_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> output_dir;
  app.add_option("-c,--config", config_path, "JSON pipeline config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Global seed (overrides config)");
  app.add_option("--workers", workers, "Maximum worker threads (overrides config)")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", output_dir, "Artifact directory (overrides config)");

  std::string selected;
  for (const auto& name : anonnet::pipeline_commands()) {
    app.add_subcommand(name, "Run the " + name + " stage")->callback([&selected, name] { selected = name; });
  }
  app.add_subcommand("schema", "Print the feature schema")->callback([&selected] { selected = "schema"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(anonnet::ExitCode::kUsage);
  }

  if (selected == "schema") {
    print_schema();
    return 0;
  }
  if (config_path.empty()) {
    std::cerr << "error: --config is required for " << selected << '\n';
    return exit_code(anonnet::ExitCode::kUsage);
  }

  try {
    anonnet::ConfigOverrides overrides;
    overrides.seed = seed;
    overrides.workers = workers;
    if (output_dir) overrides.output_dir = *output_dir;
    const auto config = anonnet::load_config(config_path, overrides);
    anonnet::run_command(selected, config, std::cerr);
  } catch (const anonnet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(anonnet::ExitCode::kData);
  }
  return 0;
}
