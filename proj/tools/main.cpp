#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>

#include "groupwalk/errors.hpp"
#include "groupwalk/harness.hpp"

namespace {

struct FlagStore {
  std::string config_path;
  std::string group = "torus";
  int n = 1;
  int k = 0;
  int ell = -1;
  int levels = -1;
  int m = -1;
  int trials = 0;
  int probes = 0;
  double t = 0.0, eta = 0.0, eta_acc = 0.0, r = 0.0, delta = 0.0, cutoff = 0.0, lambda = 0.0;
  double cg = 1.0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  bool gnuplot = false;

  CLI::Option* group_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* ell_opt = nullptr;
  CLI::Option* levels_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* probes_opt = nullptr;
  CLI::Option* t_opt = nullptr;
  CLI::Option* eta_opt = nullptr;
  CLI::Option* eta_acc_opt = nullptr;
  CLI::Option* r_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* cutoff_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* cg_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* gnuplot_opt = nullptr;
};

void register_options(CLI::App* sub, FlagStore& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its values");
  f.group_opt = sub->add_option("--group", f.group, "group kind: torus or su2")
                    ->check(CLI::IsMember({"torus", "su2"}));
  f.n_opt = sub->add_option("--n", f.n, "torus dimension");
  f.k_opt = sub->add_option("--k", f.k, "number of generators");
  f.ell_opt = sub->add_option("--l,--ell", f.ell, "word length");
  f.levels_opt = sub->add_option("--levels", f.levels, "SU(2) level cutoff");
  f.m_opt = sub->add_option("--m", f.m, "combined size m = 2k + ell");
  f.trials_opt = sub->add_option("--trials", f.trials, "number of seeded trials");
  f.probes_opt = sub->add_option("--probes", f.probes, "probe count for net checks");
  f.t_opt = sub->add_option("--t", f.t, "diffusion time");
  f.eta_opt = sub->add_option("--eta", f.eta, "target accuracy eta");
  f.eta_acc_opt = sub->add_option("--eta-acc", f.eta_acc, "series truncation accuracy");
  f.r_opt = sub->add_option("--r", f.r, "net radius r");
  f.delta_opt = sub->add_option("--delta", f.delta, "failure probability budget");
  f.cutoff_opt = sub->add_option("--cutoff", f.cutoff, "eigenvalue cutoff M");
  f.lambda_opt = sub->add_option("--lambda", f.lambda, "eigenvalue for the counting ratio");
  f.cg_opt = sub->add_option("--cg", f.cg, "configurable geometric constant (>= 1)");
  f.seed_opt = sub->add_option("--seed", f.seed, "master seed (mandatory for randomized runs)");
  f.threads_opt = sub->add_option("--threads", f.threads, "worker thread count");
  f.out_opt = sub->add_option("--out", f.out, "output prefix (.csv/.json/.gp)");
  f.gnuplot_opt = sub->add_flag("--gnuplot", f.gnuplot, "also emit a gnuplot script");
}

groupwalk::ExperimentConfig build_config(const std::string& command, const FlagStore& f) {
  groupwalk::ExperimentConfig config;
  config.command = command;

  // defaults <- environment <- config file <- explicit flags
  if (const char* env = std::getenv("GROUPWALK_THREADS")) {
    config.threads = std::max(1, std::atoi(env));
  }
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw std::invalid_argument("cannot open config file '" + f.config_path + "'");
    nlohmann::json j;
    in >> j;
    groupwalk::apply_config_json(config, j);
    config.command = command;
  }
  if (f.group_opt->count() > 0) {
    config.group = f.group == "torus" ? groupwalk::GroupKind::Torus : groupwalk::GroupKind::SU2;
  }
  if (f.n_opt->count() > 0) config.n = f.n;
  if (f.k_opt->count() > 0) config.k = f.k;
  if (f.ell_opt->count() > 0) config.ell = f.ell;
  if (f.levels_opt->count() > 0) config.levels = f.levels;
  if (f.m_opt->count() > 0) config.levels = f.m;
  if (f.trials_opt->count() > 0) config.trials = f.trials;
  if (f.probes_opt->count() > 0) config.probes = f.probes;
  if (f.t_opt->count() > 0) config.t = f.t;
  if (f.eta_opt->count() > 0) config.eta = f.eta;
  if (f.eta_acc_opt->count() > 0) config.eta_acc = f.eta_acc;
  if (f.r_opt->count() > 0) config.r = f.r;
  if (f.delta_opt->count() > 0) config.delta = f.delta;
  if (f.cutoff_opt->count() > 0) config.cutoff = f.cutoff;
  if (f.lambda_opt->count() > 0) config.lambda = f.lambda;
  if (f.cg_opt->count() > 0) config.cg = f.cg;
  if (f.seed_opt->count() > 0) {
    config.master_seed = f.seed;
    config.seed_set = true;
  }
  if (f.threads_opt->count() > 0) config.threads = f.threads;
  if (f.out_opt->count() > 0) config.out_prefix = f.out;
  if (f.gnuplot_opt->count() > 0) config.gnuplot = f.gnuplot;
  return config;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groupwalk: spectral experiments for random words on compact groups"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gap", "spectral gap of the averaging operator over seeded alphabets"},
      {"discrepancy", "L2 distance of the smoothed word measure from the constant density"},
      {"cover", "planned 2r-net experiment with layered word growth"},
      {"heat", "heat kernel norms, truncation plans and envelope fits"},
      {"weyl", "eigenvalue counting ratio against its volume limit"},
      {"lowerbound", "abelian counting bounds for torus words"},
      {"selftest", "run the built-in oracle battery"},
  };
  std::vector<std::unique_ptr<FlagStore>> stores;
  std::vector<CLI::App*> subs;
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    stores.push_back(std::make_unique<FlagStore>());
    register_options(sub, *stores.back());
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const auto config = build_config(commands[i].first, *stores[i]);
      const auto start = std::chrono::steady_clock::now();
      const auto result = groupwalk::run_experiment(config);
      const auto elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      for (const auto& line : result.lines) std::cout << line << '\n';
      std::cout << result.summary.dump(2) << '\n';
      if (!config.out_prefix.empty()) {
        if (!result.csv.empty()) write_file(config.out_prefix + ".csv", result.csv);
        write_file(config.out_prefix + ".json", result.summary.dump(2) + "\n");
        if (config.gnuplot && !result.gnuplot.empty()) {
          std::string script = result.gnuplot;
          const std::string token = "%CSV%";
          for (std::size_t pos = script.find(token); pos != std::string::npos;
               pos = script.find(token)) {
            script.replace(pos, token.size(), config.out_prefix + ".csv");
          }
          write_file(config.out_prefix + ".gp", script);
        }
      }
      std::cerr << "elapsed: " << elapsed << " s\n";  // timing stays off the canonical outputs
      return result.exit_code;
    }
  } catch (const groupwalk::ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
