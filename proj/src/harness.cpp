#include "groupwalk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "groupwalk/covering.hpp"
#include "groupwalk/errors.hpp"
#include "groupwalk/heat.hpp"
#include "groupwalk/oracles.hpp"
#include "groupwalk/parallel.hpp"
#include "groupwalk/spectra.hpp"
#include "groupwalk/word_measure.hpp"

namespace groupwalk {

namespace {

using nlohmann::json;

constexpr double kLog2 = 0.6931471805599453;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

GroupDescriptor descriptor_for(const ExperimentConfig& config) {
  return config.group == GroupKind::Torus ? GroupDescriptor::torus(config.n)
                                          : GroupDescriptor::su2();
}

// Aggregates (bound, measured, holds) triples; `holds` drives the exit code.
struct CheckList {
  json records = json::array();
  bool all_hold = true;

  void add(const std::string& name, double bound, double measured, bool holds) {
    records.push_back({{"name", name}, {"bound", bound}, {"measured", measured}, {"holds", holds}});
    all_hold = all_hold && holds;
  }
  void add_flag(const std::string& name, bool holds) {
    records.push_back({{"name", name}, {"holds", holds}});
    all_hold = all_hold && holds;
  }
};

json config_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["group"] = c.group == GroupKind::Torus ? "torus" : "su2";
  j["n"] = c.group == GroupKind::Torus ? c.n : 3;
  if (c.k > 0) j["k"] = c.k;
  if (c.ell >= 0) j["ell"] = c.ell;
  if (c.levels >= 0) j["levels"] = c.levels;
  if (c.trials > 0) j["trials"] = c.trials;
  if (c.probes > 0) j["probes"] = c.probes;
  if (c.t > 0.0) j["t"] = c.t;
  if (c.eta > 0.0) j["eta"] = c.eta;
  if (c.eta_acc > 0.0) j["eta_acc"] = c.eta_acc;
  if (c.r > 0.0) j["r"] = c.r;
  if (c.delta > 0.0) j["delta"] = c.delta;
  if (c.cutoff > 0.0) j["cutoff"] = c.cutoff;
  if (c.lambda > 0.0) j["lambda"] = c.lambda;
  j["cg"] = c.cg;
  if (c.seed_set) j["master_seed"] = c.master_seed;
  // thread count is an execution detail: outputs are identical across it
  return j;
}

double gap_cutoff(const ExperimentConfig& config) {
  if (config.cutoff > 0.0) return config.cutoff;
  if (config.group == GroupKind::SU2) {
    const int levels = config.levels >= 1 ? config.levels : 5;
    return static_cast<double>(levels) * (levels + 2);
  }
  return 400.0;
}

// ---------------------------------------------------------------- gap ----

RunResult run_gap(const ExperimentConfig& config) {
  require(config.k >= 1, "gap: k must be >= 1");
  require(config.trials >= 1, "gap: trials must be >= 1");
  require(config.seed_set, "gap: master_seed is required");
  const auto group = descriptor_for(config);
  const double cutoff = gap_cutoff(config);

  std::function<double(int)> one = [&](int trial) {
    const auto alphabet = build_alphabet(derive_seed(config.master_seed, trial), config.k, group);
    return spectral_gap(alphabet, cutoff).gap;
  };
  const auto gaps = parallel_trials<double>(config.trials, config.threads, one);

  std::ostringstream csv;
  csv << "trial,seed,gap\n";
  int above = 0;
  double mean = 0.0;
  for (int i = 0; i < config.trials; ++i) {
    csv << i << ',' << derive_seed(config.master_seed, i) << ','
        << format_double(gaps[static_cast<std::size_t>(i)]) << '\n';
    if (gaps[static_cast<std::size_t>(i)] > 0.75) ++above;
    mean += gaps[static_cast<std::size_t>(i)];
  }
  mean /= config.trials;

  const auto bound = chernoff_delta(config.k, cutoff, group, config.cg);
  const double rate = static_cast<double>(above) / config.trials;

  CheckList checks;
  checks.add("gap_rate_le_exact_dim_bound", std::min(1.0, bound.exact_dim), rate,
             rate <= std::min(1.0, bound.exact_dim) + 1e-12);

  RunResult result;
  result.csv = csv.str();
  result.summary = {{"config", config_json(config)},
                    {"cutoff", cutoff},
                    {"band_dim", bound.band_dim},
                    {"delta_formula", bound.formula},
                    {"delta_exact_dim", bound.exact_dim},
                    {"mean_gap", mean},
                    {"rate_gap_above_3_4", rate},
                    {"checks", checks.records}};
  result.gnuplot =
      "set datafile separator ','\nset key autotitle columnhead\n"
      "plot '%CSV%' using 1:3 with points pt 7 title 'gap'\n";
  result.exit_code = checks.all_hold ? 0 : 1;
  return result;
}

// -------------------------------------------------------- discrepancy ----

RunResult run_discrepancy(const ExperimentConfig& config) {
  require(config.k >= 1, "discrepancy: k must be >= 1");
  require(config.ell >= 0, "discrepancy: ell must be >= 0");
  require(config.t > 0.0, "discrepancy: t must be positive");
  require(config.trials >= 1, "discrepancy: trials must be >= 1");
  require(config.seed_set, "discrepancy: master_seed is required");
  const auto group = descriptor_for(config);
  const int n = group.dim;
  const double eta_acc = config.eta_acc > 0.0
                             ? config.eta_acc
                             : std::min(1e-8, config.eta > 0.0 ? 0.01 * config.eta : 1e-8);

  const auto ledger = fit_constants(group, config.cg);
  const auto plan = plan_truncation(group, config.t, eta_acc, ledger);
  const auto modes = enumerate_modes(group, plan.cutoff);

  struct Sweep {
    std::vector<double> values;
    bool monotone = true;
  };
  std::function<Sweep(int)> one = [&](int trial) {
    const auto alphabet = build_alphabet(derive_seed(config.master_seed, trial), config.k, group);
    std::vector<double> value_sq(static_cast<std::size_t>(config.ell) + 1, 0.0);
    for (const auto& mode : modes) {
      if (mode.trivial()) continue;
      const auto op = averaging_operator(alphabet, mode);
      const double weight = group.kind == GroupKind::Torus
                                ? std::exp(-2.0 * mode.lambda * config.t)
                                : mode.dim / group.vol * std::exp(-2.0 * mode.lambda * config.t);
      auto power = operator_power(op, 0);
      for (int l = 0; l <= config.ell; ++l) {
        value_sq[static_cast<std::size_t>(l)] += weight * frobenius_sq(power);
        if (l < config.ell) {
          power = op.is_scalar() ? AveragingOperator{op.mode, power.scalar * op.scalar, {}}
                                 : AveragingOperator{op.mode, 1.0, power.matrix * op.matrix};
        }
      }
    }
    Sweep sweep;
    sweep.values.resize(value_sq.size());
    for (std::size_t i = 0; i < value_sq.size(); ++i) sweep.values[i] = std::sqrt(value_sq[i]);
    for (std::size_t i = 1; i < sweep.values.size(); ++i) {
      if (sweep.values[i] > sweep.values[i - 1] * (1.0 + 1e-9) + 1e-15) sweep.monotone = false;
    }
    return sweep;
  };
  const auto sweeps = parallel_trials<Sweep>(config.trials, config.threads, one);

  std::ostringstream csv;
  csv << "trial,seed,ell,value,tail\n";
  bool monotone_all = true;
  int successes = 0;
  for (int i = 0; i < config.trials; ++i) {
    const auto& sweep = sweeps[static_cast<std::size_t>(i)];
    monotone_all = monotone_all && sweep.monotone;
    for (int l = 0; l <= config.ell; ++l) {
      csv << i << ',' << derive_seed(config.master_seed, i) << ',' << l << ','
          << format_double(sweep.values[static_cast<std::size_t>(l)]) << ','
          << format_double(plan.tail_value) << '\n';
    }
    if (config.eta > 0.0 &&
        sweep.values[static_cast<std::size_t>(config.ell)] + plan.tail_value <= 2.0 * config.eta) {
      ++successes;
    }
  }

  CheckList checks;
  checks.add_flag("value_monotone_in_ell", monotone_all);

  json summary = {{"config", config_json(config)},
                  {"cutoff", plan.cutoff},
                  {"tail", plan.tail_value},
                  {"eta_acc", eta_acc}};
  if (config.eta > 0.0) {
    const double lower = std::pow(2.0, -config.ell) * std::pow(config.t, -0.25 * n);
    const bool window_lower_ok = lower <= config.eta * (1.0 + 1e-12);
    const double decay = std::exp(-config.k / (16.0 * kLog2));
    const double delta_cg1 = (config.cg / config.eta) * decay;
    const auto aw = chernoff_delta(config.k, std::pow(config.eta, -2.0 / n), group, config.cg);
    const bool vacuous = std::min(delta_cg1, aw.exact_dim) >= 1.0;
    const double fraction = static_cast<double>(successes) / config.trials;
    summary["window_lower_ok"] = window_lower_ok;
    summary["cg_window_max"] = std::log2(std::pow(config.t, 0.5 * n) / config.eta);
    summary["delta_cg1"] = delta_cg1;
    summary["delta_exact_dim"] = aw.exact_dim;
    summary["vacuous"] = vacuous;
    summary["success_fraction"] = fraction;
    if (!window_lower_ok) {
      summary["hypothesis_not_met"] = true;  // flagged, not failed
    } else if (!vacuous) {
      const double delta = std::min(1.0, std::min(delta_cg1, aw.exact_dim));
      checks.add("success_fraction_ge_1_minus_delta", 1.0 - delta, fraction,
                 fraction >= 1.0 - delta - 1e-12);
    }
  }
  summary["checks"] = checks.records;

  RunResult result;
  result.csv = csv.str();
  result.summary = std::move(summary);
  result.gnuplot =
      "set datafile separator ','\nset key autotitle columnhead\nset logscale y\n"
      "plot '%CSV%' using 3:4 with points pt 7 title 'discrepancy'\n";
  result.exit_code = checks.all_hold ? 0 : 1;
  return result;
}

// -------------------------------------------------------------- cover ----

RunResult run_cover(const ExperimentConfig& config) {
  require(config.r > 0.0, "cover: r must be positive");
  require(config.delta > 0.0 && config.delta < 1.0, "cover: delta must lie in (0,1)");
  require(config.trials >= 1, "cover: trials must be >= 1");
  require(config.seed_set, "cover: master_seed is required");
  const auto group = descriptor_for(config);
  const auto plan = plan_net(group.dim, config.r, config.delta, config.cg);
  const int probes = config.probes > 0 ? config.probes : default_net_probes(group, config.r);

  std::function<LayeredNetResult(int)> one = [&](int trial) {
    const std::uint64_t alphabet_seed = derive_seed(config.master_seed, trial);
    const std::uint64_t probe_seed = derive_seed(alphabet_seed, 1);
    const auto alphabet = build_alphabet(alphabet_seed, plan.k_min, group);
    return net_check_layered(alphabet, plan.ell_min, config.r, probes, probe_seed);
  };
  const auto outcomes = parallel_trials<LayeredNetResult>(config.trials, config.threads, one);

  std::ostringstream csv;
  csv << "trial,seed,is_net,layer_used,points,radius_estimate,exhausted_cap\n";
  int nets = 0;
  for (int i = 0; i < config.trials; ++i) {
    const auto& o = outcomes[static_cast<std::size_t>(i)];
    csv << i << ',' << derive_seed(config.master_seed, i) << ',' << (o.is_net ? 1 : 0) << ','
        << o.layer_used << ',' << o.points << ',' << format_double(o.radius_estimate) << ','
        << (o.exhausted_cap ? 1 : 0) << '\n';
    nets += o.is_net ? 1 : 0;
  }
  const double fraction = static_cast<double>(nets) / config.trials;

  CheckList checks;
  checks.add("net_fraction_ge_1_minus_delta", 1.0 - config.delta, fraction,
             fraction >= 1.0 - config.delta - 1e-12);

  RunResult result;
  result.csv = csv.str();
  result.summary = {{"config", config_json(config)},
                    {"plan",
                     {{"epsilon", plan.epsilon},
                      {"k_min", plan.k_min},
                      {"ell_min", plan.ell_min},
                      {"probes", probes}}},
                    {"net_fraction", fraction},
                    {"checks", checks.records}};
  result.gnuplot =
      "set datafile separator ','\nset key autotitle columnhead\n"
      "plot '%CSV%' using 1:6 with points pt 7 title 'covering radius estimate'\n";
  result.exit_code = checks.all_hold ? 0 : 1;
  return result;
}

// --------------------------------------------------------------- heat ----

RunResult run_heat(const ExperimentConfig& config) {
  const auto group = descriptor_for(config);
  const int n = group.dim;
  const auto ledger = fit_constants(group, config.cg);

  CheckList checks;

  const double slope_regime = heat_norm_slope(group, 1e-3, 1e-2, 9);
  const double slope_wide = heat_norm_slope(group, 1e-3, 1e-1, 9);
  const double target = -0.25 * n;
  checks.add("heat_norm_slope_regime_within_5pct", 0.05,
             std::fabs(slope_regime - target) / std::fabs(target),
             std::fabs(slope_regime - target) <= 0.05 * std::fabs(target));

  // exact truncation tail never exceeds the eigenfunction majorant
  bool tail_ok = true;
  double worst_ratio = 0.0;
  for (double t : {5e-3, 2e-2, 1e-1}) {
    for (double cutoff : {20.0, 80.0, 320.0, 1280.0}) {
      const double exact = heat_l2_tail(group, t, cutoff);
      const double majorant = tail_majorant(group, t, cutoff, ledger.c2_fit);
      if (majorant > 0.0) worst_ratio = std::max(worst_ratio, exact / majorant);
      tail_ok = tail_ok && exact <= majorant * (1.0 + 1e-12) + 1e-300;
    }
  }
  checks.add("exact_tail_le_majorant", 1.0, worst_ratio, tail_ok);

  const double t_plan = config.t > 0.0 ? config.t : 0.05;
  const double eta_plan = config.eta > 0.0 ? config.eta : 1e-6;
  const auto plan = plan_truncation(group, t_plan, eta_plan, ledger);
  checks.add("plan_tail_le_eta", eta_plan, plan.tail_value, plan.tail_value <= eta_plan);

  ConstantsLedger covered = ledger;
  covered.cg = std::max(ledger.cg, plan.cg_min_cover);
  const auto plan_covered = plan_truncation(group, t_plan, eta_plan, covered);
  checks.add("formula_cutoff_covers_adaptive_at_cg_min", plan_covered.cutoff,
             plan_covered.formula_cutoff, plan_covered.formula_cutoff >= plan_covered.cutoff);

  const double a0_closed = std::pow(4.0 * 3.14159265358979323846, -0.5 * n);
  const double a0_tol = group.kind == GroupKind::Torus ? 0.02 : 0.05;
  checks.add("heat_trace_a0_vs_closed_form", a0_tol, std::fabs(ledger.a0_fit / a0_closed - 1.0),
             std::fabs(ledger.a0_fit / a0_closed - 1.0) <= a0_tol);

  std::ostringstream csv;
  csv << "t,l2_norm,trace_scaled\n";
  const GroupPoint o = identity(group);
  for (int i = 0; i < 13; ++i) {
    const double t = 1e-3 * std::pow(100.0, i / 12.0);
    const auto p = plan_truncation(group, t, 1e-12 * heat_l2_norm(group, t), ledger);
    csv << format_double(t) << ',' << format_double(heat_l2_norm(group, t)) << ','
        << format_double(heat_value(group, o, t, p.cutoff) * std::pow(t, 0.5 * n)) << '\n';
  }

  RunResult result;
  result.csv = csv.str();
  result.summary = {{"config", config_json(config)},
                    {"constants",
                     {{"c2", ledger.c2_fit},
                      {"c1", ledger.c1_fit},
                      {"a0", ledger.a0_fit},
                      {"a1", ledger.a1_fit},
                      {"cg", ledger.cg}}},
                    {"slope",
                     {{"regime_window", slope_regime},
                      {"wide_window", slope_wide},
                      {"target", target}}},
                    {"plan",
                     {{"t", plan.t},
                      {"eta", plan.eta},
                      {"cutoff", plan.cutoff},
                      {"tail", plan.tail_value},
                      {"k0", plan.k0},
                      {"formula_cutoff", plan.formula_cutoff},
                      {"cg_min_cover", plan.cg_min_cover}}},
                    {"checks", checks.records}};
  result.gnuplot =
      "set datafile separator ','\nset key autotitle columnhead\nset logscale xy\n"
      "plot '%CSV%' using 1:2 with linespoints title 'heat L2 norm'\n";
  result.exit_code = checks.all_hold ? 0 : 1;
  return result;
}

// --------------------------------------------------------------- weyl ----

RunResult run_weyl(const ExperimentConfig& config) {
  require(config.lambda > 0.0, "weyl: lambda must be positive");
  const auto group = descriptor_for(config);
  const double limit = weyl_limit(group);

  std::vector<double> lambdas;
  for (double lam = config.lambda; lam >= 160.0; lam /= 4.0) lambdas.push_back(lam);
  std::reverse(lambdas.begin(), lambdas.end());

  std::ostringstream csv;
  csv << "lambda,ratio,limit\n";
  std::vector<double> ratios;
  for (double lam : lambdas) {
    ratios.push_back(weyl_ratio(group, lam));
    csv << format_double(lam) << ',' << format_double(ratios.back()) << ','
        << format_double(limit) << '\n';
  }

  CheckList checks;
  bool converges = true;
  double worst_step = 0.0;
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (lambdas[i - 1] < 1e3) continue;
    const double step = std::fabs(ratios[i] / ratios[i - 1] - 1.0);
    worst_step = std::max(worst_step, step);
    converges = converges && step < 0.05;
  }
  checks.add("ratio_converges_dyadically", 0.05, worst_step, converges);

  const double rel_err = std::fabs(ratios.back() / limit - 1.0);
  const double lam_threshold = group.kind == GroupKind::SU2 ? 1e4 : 1e5;
  const double tol = group.kind == GroupKind::SU2 ? 0.02 : 0.05;
  if (config.lambda >= lam_threshold) {
    checks.add("ratio_matches_limit", tol, rel_err, rel_err <= tol);
  }

  RunResult result;
  result.csv = csv.str();
  result.summary = {{"config", config_json(config)},
                    {"ratio", ratios.back()},
                    {"limit", limit},
                    {"rel_err", rel_err},
                    {"checks", checks.records}};
  result.gnuplot =
      "set datafile separator ','\nset key autotitle columnhead\nset logscale x\n"
      "plot '%CSV%' using 1:2 with linespoints title 'N(lambda)/lambda^{n/2}', "
      "'%CSV%' using 1:3 with lines title 'limit'\n";
  result.exit_code = checks.all_hold ? 0 : 1;
  return result;
}

// --------------------------------------------------------- lowerbound ----

RunResult run_lowerbound(const ExperimentConfig& config) {
  require(config.r > 0.0, "lowerbound: r must be positive");
  const int n = config.group == GroupKind::Torus ? config.n : 3;

  CheckList checks;
  json summary = {{"config", config_json(config)}};

  if (config.k >= 1 && config.ell >= 0) {
    const auto report = torus_lower_bounds(n, config.r, config.k, config.ell);
    checks.add("exact_count_le_binomial", report.binom_bound, report.exact_count,
               report.exact_count <= report.binom_bound + 0.5);
    summary["report"] = {{"k", report.k},
                         {"ell", report.ell},
                         {"m", report.m},
                         {"binom_bound", report.binom_bound},
                         {"exact_count", report.exact_count},
                         {"volume_product", report.volume_product},
                         {"volume_condition", report.volume_condition},
                         {"k_lower", report.k_lower},
                         {"ell_lower", report.ell_lower},
                         {"balanced_regime", report.balanced_regime}};
  } else {
    // only m given: the k lower bound is still well-defined
    const int m = config.levels;  // the --m flag lands in this slot
    require(m >= 3, "lowerbound: provide either --k and --l, or --m >= 3");
    const double k_lower = n * std::log(1.0 / config.r) / (2.0 * std::log(static_cast<double>(m)));
    summary["report"] = {{"m", m}, {"k_lower", k_lower}};
  }
  summary["checks"] = checks.records;

  RunResult result;
  result.summary = std::move(summary);
  result.exit_code = checks.all_hold ? 0 : 1;
  return result;
}

// ----------------------------------------------------------- selftest ----

RunResult run_selftest(const ExperimentConfig& config) {
  const std::uint64_t seed = config.seed_set ? config.master_seed : 1;
  CheckList checks;
  RunResult result;

  const auto note = [&](const std::string& name, double bound, double measured, bool holds) {
    checks.add(name, bound, measured, holds);
    char line[256];
    std::snprintf(line, sizeof(line), "[%s] %-42s measured=%.6g bound=%.6g",
                  holds ? " ok " : "FAIL", name.c_str(), measured, bound);
    result.lines.emplace_back(line);
  };

  const auto torus2 = GroupDescriptor::torus(2);
  const auto su2 = GroupDescriptor::su2();

  {  // group axioms on random triples
    Rng rng(derive_seed(seed, 0));
    double worst = 0.0;
    for (const auto& group : {torus2, su2}) {
      for (int i = 0; i < 200; ++i) {
        const auto a = haar_sample(rng, group), b = haar_sample(rng, group),
                   c = haar_sample(rng, group);
        worst = std::max(worst, distance(multiply(multiply(a, b), c), multiply(a, multiply(b, c))));
        worst = std::max(worst, distance(multiply(a, inverse(a)), identity(group)));
        worst = std::max(worst,
                         std::fabs(distance(multiply(c, a), multiply(c, b)) - distance(a, b)));
      }
    }
    note("group_axioms_max_error", 1e-12, worst, worst <= 1e-12);
  }

  {  // representation homomorphism + unitarity
    Rng rng(derive_seed(seed, 1));
    double worst = 0.0;
    for (int level = 1; level <= 4; ++level) {
      for (int i = 0; i < 20; ++i) {
        const auto g = haar_sample(rng, su2), h = haar_sample(rng, su2);
        const auto pg = irrep_matrix(level, g), ph = irrep_matrix(level, h);
        worst = std::max(worst, (pg * ph - irrep_matrix(level, multiply(g, h))).norm());
        worst = std::max(
            worst,
            (pg * pg.adjoint() - Eigen::MatrixXcd::Identity(level + 1, level + 1)).norm());
        worst = std::max(worst, std::fabs(pg.trace().real() -
                                          character(level, distance(identity(su2), g))));
        worst = std::max(worst, std::fabs(pg.trace().imag()));
      }
    }
    note("irrep_homomorphism_unitarity_trace", 1e-10, worst, worst <= 1e-10);
  }

  {  // Fourier word power vs exhaustive enumeration
    double worst = 0.0;
    const auto torus_alpha = build_alphabet(derive_seed(seed, 2), 2, GroupDescriptor::torus(1));
    for (int m = -5; m <= 5; ++m) {
      Eigen::VectorXi freq(1);
      freq << m;
      SpectralMode mode;
      mode.freq = freq;
      mode.lambda = 4.0 * 9.8696044010893586 * m * m;
      const auto power = word_fourier_power(torus_alpha, mode, 3);
      worst = std::max(worst,
                       std::fabs(power.scalar - oracles::exhaustive_word_average(torus_alpha, freq, 3)));
    }
    const auto su2_alpha = build_alphabet(derive_seed(seed, 3), 2, su2);
    for (const auto& mode : enumerate_modes(su2, 16.0)) {
      if (mode.trivial()) continue;
      const auto power = word_fourier_power(su2_alpha, mode, 3);
      worst = std::max(worst, (power.matrix -
                               oracles::exhaustive_word_average(su2_alpha, mode.level, 3)).norm());
    }
    note("word_fourier_vs_exhaustive", 1e-9, worst, worst <= 1e-9);
  }

  {  // heat kernel vs wrapped Gaussian, and normalization
    const auto torus1 = GroupDescriptor::torus(1);
    double worst = 0.0;
    for (double x : {0.0, 0.1, 0.31, 0.5}) {
      GroupPoint p{GroupKind::Torus, Eigen::VectorXd(1)};
      p.v << x;
      worst = std::max(worst, std::fabs(heat_value(torus1, p, 0.05, 4000.0) -
                                        oracles::wrapped_gaussian(x, 0.05)));
    }
    note("heat_series_vs_wrapped_gaussian", 1e-8, worst, worst <= 1e-8);

    const double mass = oracles::class_function_integral(
        [&](double theta) { return heat_value(su2, point_at_distance(su2, theta), 0.1, 600.0); });
    note("heat_mass_normalized", 1e-6, std::fabs(mass - 1.0), std::fabs(mass - 1.0) <= 1e-6);
  }

  {  // truncation tail and slope
    const auto ledger = fit_constants(torus2, 1.0);
    double worst = 0.0;
    for (double t : {0.01, 0.05}) {
      for (double cutoff : {50.0, 200.0, 800.0}) {
        const double exact = heat_l2_tail(torus2, t, cutoff);
        const double majorant = tail_majorant(torus2, t, cutoff, ledger.c2_fit);
        worst = std::max(worst, majorant > 0.0 ? exact / majorant : 0.0);
      }
    }
    note("tail_le_majorant_ratio", 1.0, worst, worst <= 1.0 + 1e-12);

    double slope_err = 0.0;
    for (const auto& group : {GroupDescriptor::torus(1), torus2, su2}) {
      const double target = -0.25 * group.dim;
      slope_err = std::max(slope_err,
                           std::fabs(heat_norm_slope(group, 1e-3, 1e-2, 9) - target) / -target);
    }
    note("heat_norm_slope_regime", 0.05, slope_err, slope_err <= 0.05);
  }

  {  // weyl convergence and limits
    const double su2_err = std::fabs(weyl_ratio(su2, 1e4) / weyl_limit(su2) - 1.0);
    note("weyl_su2_limit", 0.02, su2_err, su2_err <= 0.02);
    const double t2_err = std::fabs(weyl_ratio(torus2, 1e5) / weyl_limit(torus2) - 1.0);
    note("weyl_torus2_limit", 0.05, t2_err, t2_err <= 0.05);
  }

  {  // discrepancy consistency at ell = 0
    const auto ledger = fit_constants(su2, 1.0);
    const auto alphabet = build_alphabet(derive_seed(seed, 4), 3, su2);
    const auto rep = discrepancy(alphabet, 0.1, 0, 1e-12, ledger);
    const double norm = heat_l2_norm(su2, 0.1);
    const double tilde = std::sqrt(std::max(0.0, norm * norm - 1.0 / su2.vol));
    note("discrepancy_ell0_vs_heat_norm", 1e-10, std::fabs(rep.value - tilde),
         std::fabs(rep.value - tilde) <= 1e-10);
  }

  {  // gap invariance under global conjugation
    Rng rng(derive_seed(seed, 5));
    auto alphabet = build_alphabet(derive_seed(seed, 6), 4, su2);
    const auto h = haar_sample(rng, su2);
    auto conjugated = alphabet;
    for (auto& g : conjugated.gens) g = multiply(multiply(h, g), inverse(h));
    const auto a = spectral_gap(alphabet, 35.0);
    const auto b = spectral_gap(conjugated, 35.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.per_mode.size(); ++i) {
      worst = std::max(worst, std::fabs(a.per_mode[i].second - b.per_mode[i].second));
    }
    note("gap_conjugation_invariance", 1e-10, worst, worst <= 1e-10);
  }

  {  // covering radius against the exact circle oracle
    const auto torus1 = GroupDescriptor::torus(1);
    auto alphabet = build_alphabet(derive_seed(seed, 7), 1, torus1);
    alphabet.gens[0].v[0] = std::sqrt(2.0) - 1.0;
    const auto words = enumerate_words(alphabet, 50);
    const double exact = oracles::sorted_gap_radius(words.points);
    const double estimate = covering_radius(words, 4096, derive_seed(seed, 8));
    note("covering_radius_vs_sorted_oracle", 4.0 / 4096.0, std::fabs(estimate - exact),
         std::fabs(estimate - exact) <= 4.0 / 4096.0);
  }

  {  // abelian counts against the multiset bound
    bool ok = true;
    double worst = 0.0;
    for (int k = 1; k <= 4; ++k) {
      for (int ell = 0; ell <= 4; ++ell) {
        const double count = abelian_word_count(k, ell, true);
        const double bound = binomial(2 * k + ell - 1, ell);
        worst = std::max(worst, count - bound);
        ok = ok && count <= bound + 0.5;
      }
    }
    note("abelian_count_le_binomial", 0.0, worst, ok);
  }

  {  // byte determinism across thread counts
    ExperimentConfig gap_config;
    gap_config.command = "gap";
    gap_config.group = GroupKind::SU2;
    gap_config.k = 8;
    gap_config.levels = 3;
    gap_config.trials = 24;
    gap_config.master_seed = derive_seed(seed, 9);
    gap_config.seed_set = true;
    gap_config.threads = 1;
    const auto a = run_gap(gap_config);
    gap_config.threads = 4;
    const auto b = run_gap(gap_config);
    const bool same = a.csv == b.csv && a.summary.dump() == b.summary.dump();
    note("thread_count_determinism", 1.0, same ? 1.0 : 0.0, same);
  }

  result.summary = {{"config", config_json(config)}, {"checks", checks.records}};
  result.exit_code = checks.all_hold ? 0 : 1;
  return result;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void apply_config_json(ExperimentConfig& config, const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      config.command = value.get<std::string>();
    } else if (key == "group") {
      const auto s = value.get<std::string>();
      require(s == "torus" || s == "su2", "config: group must be 'torus' or 'su2'");
      config.group = s == "torus" ? GroupKind::Torus : GroupKind::SU2;
    } else if (key == "n") {
      config.n = value.get<int>();
    } else if (key == "k") {
      config.k = value.get<int>();
    } else if (key == "ell") {
      config.ell = value.get<int>();
    } else if (key == "levels" || key == "m") {
      config.levels = value.get<int>();
    } else if (key == "trials") {
      config.trials = value.get<int>();
    } else if (key == "probes") {
      config.probes = value.get<int>();
    } else if (key == "t") {
      config.t = value.get<double>();
    } else if (key == "eta") {
      config.eta = value.get<double>();
    } else if (key == "eta_acc") {
      config.eta_acc = value.get<double>();
    } else if (key == "r") {
      config.r = value.get<double>();
    } else if (key == "delta") {
      config.delta = value.get<double>();
    } else if (key == "cutoff") {
      config.cutoff = value.get<double>();
    } else if (key == "lambda") {
      config.lambda = value.get<double>();
    } else if (key == "cg") {
      config.cg = value.get<double>();
    } else if (key == "master_seed") {
      config.master_seed = value.get<std::uint64_t>();
      config.seed_set = true;
    } else if (key == "threads") {
      config.threads = value.get<int>();
    } else if (key == "out") {
      config.out_prefix = value.get<std::string>();
    } else if (key == "gnuplot") {
      config.gnuplot = value.get<bool>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
}

RunResult run_experiment(const ExperimentConfig& config) {
  require(config.n >= 1, "n must be >= 1");
  require(config.threads >= 1, "threads must be >= 1");
  if (config.command == "gap") return run_gap(config);
  if (config.command == "discrepancy") return run_discrepancy(config);
  if (config.command == "cover") return run_cover(config);
  if (config.command == "heat") return run_heat(config);
  if (config.command == "weyl") return run_weyl(config);
  if (config.command == "lowerbound") return run_lowerbound(config);
  if (config.command == "selftest") return run_selftest(config);
  throw std::invalid_argument("unknown command '" + config.command + "'");
}

}  // namespace groupwalk
