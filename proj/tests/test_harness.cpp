#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "groupwalk/errors.hpp"
#include "groupwalk/harness.hpp"

using namespace groupwalk;

namespace {

ExperimentConfig gap_config(std::uint64_t seed, int threads) {
  ExperimentConfig config;
  config.command = "gap";
  config.group = GroupKind::SU2;
  config.k = 8;
  config.levels = 3;
  config.trials = 16;
  config.master_seed = seed;
  config.seed_set = true;
  config.threads = threads;
  return config;
}

}  // namespace

TEST_CASE("gap runs are byte-identical across reruns and thread counts") {
  const auto a = run_experiment(gap_config(42, 1));
  const auto b = run_experiment(gap_config(42, 1));
  const auto c = run_experiment(gap_config(42, 4));
  const auto d = run_experiment(gap_config(42, 8));
  CHECK(a.csv == b.csv);
  CHECK(a.summary.dump() == b.summary.dump());
  CHECK(a.csv == c.csv);
  CHECK(a.summary.dump() == c.summary.dump());
  CHECK(a.csv == d.csv);
  CHECK(a.summary.dump() == d.summary.dump());
  CHECK(a.exit_code == 0);

  const auto other = run_experiment(gap_config(43, 1));
  CHECK(a.csv != other.csv);
}

TEST_CASE("gap CSV carries one row per trial with derived seeds") {
  const auto result = run_experiment(gap_config(7, 2));
  std::istringstream stream(result.csv);
  std::string line;
  std::getline(stream, line);
  CHECK(line == "trial,seed,gap");
  int rows = 0;
  while (std::getline(stream, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 16);
  CHECK(result.summary["checks"].size() == 1);
  CHECK(result.summary["checks"][0]["holds"].get<bool>());
}

TEST_CASE("discrepancy sweep is monotone and reports the parameter window") {
  ExperimentConfig config;
  config.command = "discrepancy";
  config.group = GroupKind::Torus;
  config.n = 1;
  config.k = 6;
  config.ell = 40;
  config.t = 0.05;
  config.trials = 8;
  config.master_seed = 11;
  config.seed_set = true;
  config.threads = 2;
  const auto result = run_experiment(config);
  CHECK(result.exit_code == 0);
  bool found_monotone = false;
  for (const auto& check : result.summary["checks"]) {
    if (check["name"] == "value_monotone_in_ell") found_monotone = check["holds"].get<bool>();
  }
  CHECK(found_monotone);

  config.eta = 1e-1;  // wide target: every trial passes, window satisfied
  const auto with_eta = run_experiment(config);
  CHECK(with_eta.exit_code == 0);
  CHECK(with_eta.summary.contains("success_fraction"));
  CHECK(with_eta.summary["window_lower_ok"].get<bool>());
}

TEST_CASE("cover command drives the planner and reports the net fraction") {
  ExperimentConfig config;
  config.command = "cover";
  config.group = GroupKind::Torus;
  config.n = 1;
  config.r = 0.2;
  config.delta = 0.2;
  config.trials = 5;
  config.master_seed = 21;
  config.seed_set = true;
  config.threads = 2;
  const auto result = run_experiment(config);
  CHECK(result.exit_code == 0);
  CHECK(result.summary["net_fraction"].get<double>() >= 0.8);
  CHECK(result.summary["plan"]["k_min"].get<int>() >= 1);
}

TEST_CASE("heat and weyl commands assert their closed-form checks") {
  ExperimentConfig heat;
  heat.command = "heat";
  heat.group = GroupKind::Torus;
  heat.n = 1;
  CHECK(run_experiment(heat).exit_code == 0);

  ExperimentConfig weyl;
  weyl.command = "weyl";
  weyl.group = GroupKind::SU2;
  weyl.lambda = 1e4;
  const auto result = run_experiment(weyl);
  CHECK(result.exit_code == 0);
  CHECK(result.summary["ratio"].get<double>() == doctest::Approx(0.33835));
}

TEST_CASE("lowerbound command accepts either (k, ell) or m") {
  ExperimentConfig config;
  config.command = "lowerbound";
  config.n = 2;
  config.r = 0.01;
  config.k = 2;
  config.ell = 2;
  const auto full = run_experiment(config);
  CHECK(full.exit_code == 0);
  CHECK(full.summary["report"]["binom_bound"].get<double>() == 10.0);

  ExperimentConfig via_m;
  via_m.command = "lowerbound";
  via_m.n = 2;
  via_m.r = 0.01;
  via_m.levels = 40;  // --m lands here
  const auto result = run_experiment(via_m);
  CHECK(result.summary["report"]["k_lower"].get<double>() == doctest::Approx(1.2484).epsilon(1e-3));
}

TEST_CASE("usage errors name the offending field") {
  ExperimentConfig config;
  config.command = "gap";
  config.k = 4;
  config.trials = 4;  // master_seed missing
  CHECK_THROWS_WITH_AS(static_cast<void>(run_experiment(config)),
                       "gap: master_seed is required", std::invalid_argument);

  ExperimentConfig unknown;
  unknown.command = "frobnicate";
  CHECK_THROWS_AS(static_cast<void>(run_experiment(unknown)), std::invalid_argument);
}

TEST_CASE("config JSON merges and rejects unknown keys") {
  ExperimentConfig config;
  apply_config_json(config, nlohmann::json{{"command", "gap"},
                                           {"group", "su2"},
                                           {"k", 12},
                                           {"trials", 3},
                                           {"master_seed", 99},
                                           {"threads", 2}});
  CHECK(config.command == "gap");
  CHECK(config.group == GroupKind::SU2);
  CHECK(config.k == 12);
  CHECK(config.seed_set);

  CHECK_THROWS_AS(apply_config_json(config, nlohmann::json{{"frob", 1}}), std::invalid_argument);
}

TEST_CASE("selftest battery passes end to end") {
  ExperimentConfig config;
  config.command = "selftest";
  const auto result = run_experiment(config);
  CHECK(result.exit_code == 0);
  CHECK(result.lines.size() >= 10);
}
