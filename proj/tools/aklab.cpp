#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aklab/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for almost-Kahler structures on flat tori"};
  app.set_version_flag("--version", aklab::artifact_version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const aklab::RunConfig&, std::ostream&);
  };
  const Entry entries[] = {
      {"verify", "Run the verification suite and write a JSON report", aklab::cmd_verify},
      {"flow", "Integrate the Hermitian Calabi flow and write a CSV trace", aklab::cmd_flow},
      {"geodesic", "Integrate a geodesic and compare with the closed form", aklab::cmd_geodesic},
      {"hessian", "Compare the Hessian formula with finite differences", aklab::cmd_hessian},
      {"symbol", "Extract the principal symbol and check semi-positivity", aklab::cmd_symbol},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config_path, "JSON run configuration (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory, overrides output.dir");
    sub->add_option("--seed", seed, "Seed override");
    sub->add_option("--grid", grid, "Points per axis, overrides grid.n");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? aklab::kExitOk : aklab::kExitUsage;
  }

  try {
    aklab::RunConfig config = config_path.empty() ? aklab::RunConfig{} : aklab::load_config(config_path);
    if (out_dir) config.out_dir = *out_dir;
    if (seed) config.seed = *seed;
    if (grid) config.n = *grid;
    aklab::validate(config);
    for (const auto& e : entries)
      if (app.got_subcommand(e.name)) return e.run(config, std::cout);
  } catch (const aklab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return aklab::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return aklab::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return aklab::kExitCheckFailed;
  }
  return aklab::kExitUsage;
}
