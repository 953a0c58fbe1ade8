#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "groupwalk/group.hpp"

namespace groupwalk {

// One experiment description: a subcommand plus its numeric parameters.
// Unset optionals stay at their sentinel; validation happens per command.
struct ExperimentConfig {
  std::string command;
  GroupKind group = GroupKind::Torus;
  int n = 1;

  int k = 0;
  int ell = -1;
  int levels = -1;  // SU(2) sugar: cutoff = levels * (levels + 2)
  int trials = 0;
  int probes = 0;  // 0 = derived from r

  double t = 0.0;
  double eta = 0.0;
  double eta_acc = 0.0;
  double r = 0.0;
  double delta = 0.0;
  double cutoff = 0.0;
  double lambda = 0.0;
  double cg = 1.0;

  std::uint64_t master_seed = 0;
  bool seed_set = false;
  int threads = 1;

  std::string out_prefix;
  bool gnuplot = false;
};

// Populates fields present in the JSON object; unknown keys are an error.
void apply_config_json(ExperimentConfig& config, const nlohmann::json& j);

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 invariant failure
  std::string csv;    // per-trial table ("" when the command has none)
  nlohmann::json summary;
  std::string gnuplot;             // optional plot script text
  std::vector<std::string> lines;  // human-readable progress/check lines
};

// Runs one experiment. Throws std::invalid_argument for usage errors and
// ResourceCapError when a cap would be exceeded; the CLI maps these to exit
// codes 2 and 3.
RunResult run_experiment(const ExperimentConfig& config);

// Stable float formatting for the CSV contract (shortest round-trip is the
// JSON library's job; the CSV uses %.17g).
std::string format_double(double v);

}  // namespace groupwalk
