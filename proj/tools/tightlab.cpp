// tightlab: labor-demand pipeline driver. One subcommand per invocation.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>

#include "tightlab/error.hpp"
#include "tightlab/io/config.hpp"
#include "tightlab/io/pipeline.hpp"

namespace {

const char* describe(const std::string& cmd) {
  if (cmd == "simulate") return "generate a synthetic economy ([simulation])";
  if (cmd == "delineate-zones") return "commuting zones from commuting.csv and labor_force.csv ([zones])";
  if (cmd == "build-tightness") return "market and firm tightness from markets.csv and firm_panel.csv ([tightness])";
  if (cmd == "build-instruments") return "firm shift-share instruments ([estimation])";
  if (cmd == "estimate") return "OLS, 2SLS, reduced forms, first stages and feedback regressions";
  if (cmd == "rotemberg") return "Rotemberg weights per instrument family";
  if (cmd == "calibrate") return "pre-match hiring cost share from calibration JSON";
  if (cmd == "policy") return "minimum-wage simulation and frozen-tightness counterfactual ([policy])";
  return "";
}

std::string usage() {
  std::string out = "usage: tightlab [--config FILE] [--seed N] [--dry-run] SUBCOMMAND\nsubcommands:";
  for (const auto& name : tightlab::io::kSubcommands) out += " " + name;
  return out + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tightlab: labor demand with search frictions and shift-share instruments"};
  app.footer("Configuration defaults (INI):\n\n" + tightlab::io::default_config_text());
  app.require_subcommand(0, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;
  bool print_config = false;
  app.add_option("-c,--config", config_path, "configuration file (INI); defaults apply when omitted");
  app.add_option("--seed", seed, "override [run] seed");
  app.add_flag("--dry-run", dry_run, "validate inputs against their schemas and write nothing");
  app.add_flag("--print-config", print_config, "print the default configuration and exit");

  for (const auto& name : tightlab::io::kSubcommands) app.add_subcommand(name, describe(name));

  // CLI11 reports a stray word as an extra argument; name it as an unknown subcommand.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "-c" || arg == "--config" || arg == "--seed") {
      ++i;
      continue;
    }
    if (arg.empty() || arg[0] == '-') continue;
    if (std::find(tightlab::io::kSubcommands.begin(), tightlab::io::kSubcommands.end(), arg) ==
        tightlab::io::kSubcommands.end()) {
      std::cerr << "unknown subcommand: " << arg << '\n' << usage();
      return 64;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (!print_config && app.get_subcommands().empty()) {
    std::cerr << "a subcommand is required\n" << usage();
    return 64;
  }

  try {
    auto cfg = config_path.empty() ? tightlab::io::PipelineConfig{} : tightlab::io::load_config(config_path);
    if (seed) tightlab::io::apply_seed(cfg, *seed);
    cfg.validate();
    if (print_config) {
      std::cout << tightlab::io::default_config_text();
      return 0;
    }
    const auto* sub = app.get_subcommands().front();
    return tightlab::io::run(sub->get_name(), cfg, {dry_run, &std::cout});
  } catch (const tightlab::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
