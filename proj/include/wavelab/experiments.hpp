#pragma once

// Configuration-driven experiments: every study the library supports is
// runnable from an INI config with a named kind, a mandatory master seed,
// and machine-checkable pass/fail lines. Outputs are CSV tables plus JSON
// summaries and a manifest; identical configs reproduce identical bytes.

#include <cstdint>
#include <string>
#include <vector>

#include "wavelab/config.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/media.hpp"
#include "wavelab/random_fields.hpp"

namespace wavelab {

inline constexpr const char* kCodeVersion = "wavelab 0.1.0";

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct RunManifest {
  std::string kind;
  std::string config_hash;  // hex
  std::string code_version = kCodeVersion;
  std::uint64_t seed = 0;
  int threads = 1;
  double wall_seconds = 0.0;
  std::vector<CheckResult> checks;
  bool passed() const;
};

std::vector<std::string> experiment_kinds();

// shared builders (throw std::runtime_error naming the bad field)
GridSpec grid_from_config(const Config& cfg);
InitialMeasureSpec measure_from_config(const Config& cfg, const GridSpec& g);
TestFunction test_function_from_config(const Config& cfg, const GridSpec& g);
RadialMedium medium_from_config(const Config& cfg);

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};
// static admissibility checks without running the experiment: grid sanity,
// measure certificates (energy density, mixing profile integrability,
// kernel-radius bounds), test-function and horizon arithmetic, medium
// hyperbolicity and the ray-escape scan
ValidationReport validate_config(const Config& cfg);

// executes the named experiment; writes artifacts under out_dir
RunManifest run_experiment(const Config& cfg, const std::string& out_dir,
                           std::uint64_t seed_override = 0, int threads = 1);

void write_manifest(const RunManifest& m, const std::string& path);
std::string manifest_to_json(const RunManifest& m);

}  // namespace wavelab
