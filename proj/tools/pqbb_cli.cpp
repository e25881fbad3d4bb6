// pqbb_cli: run and validate operator experiments.
//
//   pqbb_cli run <config> [--out DIR] [--override section.key=value ...]
//   pqbb_cli validate <config> [--override ...]
//   pqbb_cli figures [figure1|figure2] [--out DIR]

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "builtin_configs.hpp"
#include "pqbb/experiment.hpp"

namespace {

void print_diagnostics(const std::string& source, const std::vector<std::string>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << source << ": " << d << '\n';
}

int report(const pqbb::RunReport& r) {
  for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
  for (const auto& m : r.messages) std::cerr << "warning: " << m << '\n';
  if (r.flagged_cells > 0) std::cerr << r.flagged_cells << " cell(s) flagged NA\n";
  return r.exit_code;
}

int run_config(const pqbb::ConfigValidation& v, const std::string& source, const std::string& out) {
  if (!v.ok()) {
    print_diagnostics(source, v.diagnostics);
    return pqbb::exit_config_error;
  }
  return report(pqbb::run_experiment(*v.config, out));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"(p,q)-Baskakov-Beta operator experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run an experiment config and write CSV files");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory (default: [experiment] output)");
  run->add_option("--override", overrides, "section.key=value, repeatable")->take_all();

  auto* validate = app.add_subcommand("validate", "Check a config and print the normalized form");
  validate->add_option("config", config_path, "Config file")->required();
  validate->add_option("--override", overrides, "section.key=value, repeatable")->take_all();

  std::vector<std::string> figure_names;
  std::string figures_out = "figures";
  auto* figures = app.add_subcommand("figures", "Reproduce the built-in figure configs");
  figures->add_option("name", figure_names, "figure1 and/or figure2 (default: both)")
      ->check(CLI::IsMember({"figure1", "figure2"}));
  figures->add_option("--out", figures_out, "Parent output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pqbb::exit_config_error;
  }

  try {
    if (*run) return run_config(pqbb::validate_config(config_path, overrides), config_path, out_dir);

    if (*validate) {
      const auto v = pqbb::validate_config(config_path, overrides);
      if (!v.ok()) {
        print_diagnostics(config_path, v.diagnostics);
        return pqbb::exit_config_error;
      }
      std::cout << pqbb::format_config(*v.config);
      return pqbb::exit_success;
    }

    if (figure_names.empty()) figure_names = {"figure1", "figure2"};
    int status = pqbb::exit_success;
    for (const auto& name : figure_names) {
      const auto v = pqbb::validate_config_text(pqbb::cli::builtin_configs().at(name));
      const auto dir = (std::filesystem::path(figures_out) / name).string();
      const int rc = run_config(v, name, dir);
      // a hard failure outranks a partial result
      if (rc == pqbb::exit_config_error || status == pqbb::exit_success) status = rc;
    }
    return status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pqbb::exit_config_error;
  }
}
