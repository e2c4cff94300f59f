// Command-line experiment runner.
//
// Verbs:
//   run              execute an experiment config, write artifacts, print checks
//   validate         static admissibility checks only
//   list-experiments print the known experiment kinds
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 config or usage error.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wavelab/config.hpp"
#include "wavelab/experiments.hpp"

namespace {

void print_checks(const std::vector<wavelab::CheckResult>& checks) {
  for (const auto& c : checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  value=" << c.value
              << "  threshold=" << c.threshold;
    if (!c.note.empty()) std::cout << "  (" << c.note << ")";
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelab: wave-equation statistics laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed_override = 0;
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("--config", config_path, "INI experiment config")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_option("--seed-override", seed_override, "replace the config master seed");
  run->add_option("--threads", threads, "ensemble worker count")->check(CLI::PositiveNumber);

  CLI::App* validate = app.add_subcommand("validate", "static checks without running");
  validate->add_option("--config", config_path, "INI experiment config")->required();

  CLI::App* list = app.add_subcommand("list-experiments", "print known experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& k : wavelab::experiment_kinds()) std::cout << k << "\n";
      return 0;
    }
    const wavelab::Config cfg = wavelab::Config::parse_file(config_path);
    if (validate->parsed()) {
      const wavelab::ValidationReport rep = wavelab::validate_config(cfg);
      print_checks(rep.checks);
      std::cout << (rep.passed() ? "VALID" : "INVALID") << "\n";
      return rep.passed() ? 0 : 2;
    }
    const wavelab::RunManifest man =
        wavelab::run_experiment(cfg, out_dir, seed_override, threads);
    print_checks(man.checks);
    std::cout << (man.passed() ? "PASS" : "FAIL") << "  kind=" << man.kind
              << "  config=" << man.config_hash << "  seed=" << man.seed
              << "  wall=" << man.wall_seconds << "s\n";
    return man.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
