#include "groupwalk/heat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "groupwalk/errors.hpp"

namespace groupwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPiSq = 4.0 * kPi * kPi;
constexpr double kRelCut = 1e-18;

// Neumaier compensated accumulator; series are summed ascending in lambda.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

double require_positive_time(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("diffusion time must be positive");
  return t;
}

// Iterates f(lambda, eigenspace_dim) over all modes with
// cutoff_lo < lambda <= stop, ascending.
template <typename F>
void for_each_eigenspace(const GroupDescriptor& group, double cutoff_lo, double stop, F&& f) {
  if (group.kind == GroupKind::SU2) {
    for (int level = 0;; ++level) {
      const double lambda = static_cast<double>(level) * (level + 2);
      if (lambda > stop) break;
      if (lambda > cutoff_lo) f(lambda, static_cast<double>((level + 1) * (level + 1)));
    }
    return;
  }
  const long long s_hi = static_cast<long long>(std::floor(stop / kFourPiSq));
  if (s_hi > 100'000) {
    throw ResourceCapError("eigenvalue sweep to lambda = " + std::to_string(stop) +
                           " exceeds the shell cap");
  }
  const auto shells = torus_shell_counts(group.dim, s_hi);
  for (long long s = 0; s < static_cast<long long>(shells.size()); ++s) {
    if (shells[s] == 0.0) continue;
    const double lambda = kFourPiSq * static_cast<double>(s);
    if (lambda > cutoff_lo) f(lambda, shells[s]);
  }
}

double tail_stop(double t, double cutoff) { return cutoff + 100.0 / t; }

}  // namespace

HeatSeries heat_series(const GroupDescriptor& group, double t, double cutoff,
                       bool include_constant) {
  require_positive_time(t);
  HeatSeries series;
  series.group = group;
  series.t = t;
  for (auto& mode : enumerate_modes(group, cutoff)) {
    if (!include_constant && mode.trivial()) continue;
    const double coeff = std::exp(-mode.lambda * t);
    series.terms.emplace_back(std::move(mode), coeff);
  }
  return series;
}

double heat_value(const HeatSeries& series, const GroupPoint& x) {
  CompensatedSum acc;
  if (series.group.kind == GroupKind::SU2) {
    const double theta = distance(identity(series.group), x);
    for (const auto& [mode, coeff] : series.terms) {
      acc.add(mode.dim / series.group.vol * coeff * character(mode.level, theta));
    }
    return acc.value();
  }
  for (const auto& [mode, coeff] : series.terms) {
    double phase = 0.0;
    for (Eigen::Index i = 0; i < mode.freq.size(); ++i) phase += mode.freq[i] * x.v[i];
    acc.add(coeff * std::cos(2.0 * kPi * phase));
  }
  return acc.value();
}

double heat_value(const GroupDescriptor& group, const GroupPoint& x, double t, double cutoff) {
  require_positive_time(t);
  if (cutoff < 0.0) throw std::invalid_argument("cutoff must be >= 0");

  CompensatedSum acc;
  if (group.kind == GroupKind::SU2) {
    const double theta = distance(identity(group), x);
    for (int level = 0;; ++level) {
      const double lambda = static_cast<double>(level) * (level + 2);
      if (lambda > cutoff) break;
      acc.add((level + 1) / group.vol * std::exp(-lambda * t) * character(level, theta));
    }
    return acc.value();
  }

  const auto modes = enumerate_modes(group, cutoff);
  for (const auto& m : modes) {
    double phase = 0.0;
    for (Eigen::Index i = 0; i < m.freq.size(); ++i) phase += m.freq[i] * x.v[i];
    acc.add(std::exp(-m.lambda * t) * std::cos(2.0 * kPi * phase));
  }
  return acc.value();
}

double heat_l2_norm(const GroupDescriptor& group, double t) {
  require_positive_time(t);
  if (group.kind == GroupKind::Torus) {
    // the lattice sum factorizes across axes
    CompensatedSum axis;
    axis.add(1.0);
    for (long long m = 1;; ++m) {
      const double term = 2.0 * std::exp(-8.0 * kPi * kPi * m * m * t);
      axis.add(term);
      if (term < kRelCut * axis.value()) break;
    }
    return std::pow(axis.value(), 0.5 * group.dim);
  }
  CompensatedSum acc;
  for (int level = 0;; ++level) {
    const double lambda = static_cast<double>(level) * (level + 2);
    const double term = static_cast<double>(level + 1) * (level + 1) * std::exp(-2.0 * lambda * t);
    acc.add(term);
    if (level > 0 && term < kRelCut * acc.value()) break;
  }
  return std::sqrt(acc.value() / group.vol);
}

double heat_l2_tail(const GroupDescriptor& group, double t, double cutoff) {
  require_positive_time(t);
  if (2.0 * t * cutoff > 800.0) return 0.0;  // every term underflows
  CompensatedSum acc;
  for_each_eigenspace(group, cutoff, tail_stop(2.0 * t, cutoff),
                      [&](double lambda, double dim) { acc.add(dim * std::exp(-2.0 * lambda * t)); });
  return std::sqrt(acc.value() / group.vol);
}

double tail_majorant(const GroupDescriptor& group, double t, double cutoff, double c2) {
  require_positive_time(t);
  if (t * cutoff > 800.0) return 0.0;  // every term underflows
  const double exponent = 0.25 * (group.dim - 1);
  CompensatedSum acc;
  for_each_eigenspace(group, cutoff, tail_stop(t, cutoff), [&](double lambda, double dim) {
    acc.add(dim * std::exp(-lambda * t) * c2 * std::pow(lambda, exponent));
  });
  return acc.value();
}

TruncationPlan plan_truncation(const GroupDescriptor& group, double t, double eta,
                               const ConstantsLedger& ledger) {
  require_positive_time(t);
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const int n = group.dim;

  TruncationPlan plan;
  plan.t = t;
  plan.eta = eta;
  plan.k0 = std::max(std::log2(1.0 / eta), ledger.cg + 0.5 * n * std::log2(3.0 * n / t));
  plan.formula_cutoff = std::pow(2.0, 2.0 * plan.k0 / n);

  // adaptive plan: smallest enumerated eigenvalue whose certified tail fits
  const double c2 = ledger.c2_fit;
  std::vector<double> levels;
  for_each_eigenspace(group, -1.0, tail_stop(t, 0.0), [&](double lambda, double) {
    levels.push_back(lambda);
  });
  if (levels.empty() || tail_majorant(group, t, levels.back(), c2) > eta) {
    throw ResourceCapError("truncation target unreachable below the mode cap");
  }
  // the tail is decreasing in the cutoff: bisect for the smallest feasible one
  std::size_t lo = 0, hi = levels.size() - 1;
  if (tail_majorant(group, t, levels[0], c2) <= eta) {
    hi = 0;
  } else {
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (tail_majorant(group, t, levels[mid], c2) <= eta ? hi : lo) = mid;
    }
  }
  plan.cutoff = levels[hi];
  plan.tail_value = tail_majorant(group, t, plan.cutoff, c2);

  // minimal cg making the closed-form cutoff dominate the adaptive one
  const double needed_k0 = 0.5 * n * std::log2(std::max(plan.cutoff, 1.0));
  // tiny slack so the exact-equality case survives the round trip through exp2
  plan.cg_min_cover = std::max(0.0, needed_k0 - 0.5 * n * std::log2(3.0 * n / t)) + 1e-9;
  return plan;
}

double fit_gaussian_envelope(const GroupDescriptor& group, std::span<const double> t_grid,
                             std::span<const double> r_grid, const ConstantsLedger& ledger) {
  const int n = group.dim;
  double best_log = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    require_positive_time(t);
    const double scale = heat_l2_norm(group, t);
    const auto plan = plan_truncation(group, t, 1e-12 * std::max(1.0, scale), ledger);
    for (double r : r_grid) {
      const GroupPoint x = point_at_distance(group, r);
      const double h = heat_value(group, x, t, plan.cutoff);
      // values at or below the certified tail are indistinguishable from
      // zero; feeding them to the exponential weight would fit pure noise
      if (h <= 2.0 * plan.tail_value) continue;
      const double log_c1 = std::log(h) + 0.5 * n * std::log(t) + r * r / (5.0 * t);
      best_log = std::max(best_log, log_c1);
    }
  }
  if (!std::isfinite(best_log)) throw std::invalid_argument("empty envelope grid");
  return std::exp(best_log);
}

std::pair<double, double> fit_heat_trace(const GroupDescriptor& group,
                                         std::span<const double> t_grid,
                                         const ConstantsLedger& ledger) {
  const int n = group.dim;
  const GroupPoint o = identity(group);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(t_grid.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(t_grid.size()));
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    require_positive_time(t);
    const auto plan = plan_truncation(group, t, 1e-14 * heat_l2_norm(group, t), ledger);
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = t;
    rhs(static_cast<Eigen::Index>(i)) = heat_value(group, o, t, plan.cutoff) * std::pow(t, 0.5 * n);
  }
  const Eigen::Vector2d coeffs = design.colPivHouseholderQr().solve(rhs);
  return {coeffs[0], coeffs[1]};
}

FarFieldCheck far_field_check(const GroupDescriptor& group, double eps, double eta, int probes,
                              std::uint64_t seed, const ConstantsLedger& ledger) {
  if (!(eps > 0.0) || !(eta > 0.0)) throw std::invalid_argument("eps and eta must be positive");
  FarFieldCheck out;
  out.eps = eps;
  out.eta = eta;
  const int n = group.dim;
  const double arg = 1.0 / (eta * std::pow(eps, n));
  if (arg <= 1.0) throw std::invalid_argument("eta too large for the far-field radius");
  out.r = eps * std::sqrt(5.0 * std::log(arg));
  if (out.r >= diameter(group)) {
    out.vacuous = true;
    return out;
  }
  const double t = eps * eps;
  const auto plan = plan_truncation(group, t, 1e-12 * std::max(1.0, heat_l2_norm(group, t)), ledger);
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  const GroupPoint o = identity(group);
  int used = 0;
  while (used < probes) {
    const GroupPoint x = haar_sample(rng, group);
    if (distance(o, x) <= out.r) continue;
    worst = std::max(worst, heat_value(group, x, t, plan.cutoff));
    ++used;
  }
  out.max_value = worst;
  return out;
}

double heat_norm_slope(const GroupDescriptor& group, double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) {
    throw std::invalid_argument("bad slope grid");
  }
  Eigen::MatrixXd design(points, 2);
  Eigen::VectorXd rhs(points);
  for (int i = 0; i < points; ++i) {
    const double logt =
        std::log(t_min) + (std::log(t_max) - std::log(t_min)) * i / static_cast<double>(points - 1);
    const double t = std::exp(logt);
    design(i, 0) = logt;
    design(i, 1) = 1.0;
    rhs(i) = std::log(heat_l2_norm(group, t));
  }
  const Eigen::Vector2d coeffs = design.colPivHouseholderQr().solve(rhs);
  return coeffs[0];
}

ConstantsLedger fit_constants(const GroupDescriptor& group, double cg) {
  ConstantsLedger ledger;
  ledger.cg = cg;
  ledger.c2_fit = fit_supnorm_constant(group, 600.0);

  // envelope grid reaches t = 0.05 so the far-field times eps^2 are covered;
  // the trace fit stays on [1e-3, 1e-2] where the two-term expansion is clean
  std::vector<double> env_t, trace_t, r_grid;
  for (int i = 0; i < 12; ++i) {
    env_t.push_back(1e-3 * std::pow(50.0, i / 11.0));
    trace_t.push_back(1e-3 * std::pow(10.0, i / 11.0));
  }
  const double diam = diameter(group);
  for (int i = 1; i <= 12; ++i) r_grid.push_back(diam * i / 12.0);
  ledger.c1_fit = fit_gaussian_envelope(group, env_t, r_grid, ledger);

  const auto [a0, a1] = fit_heat_trace(group, trace_t, ledger);
  ledger.a0_fit = a0;
  ledger.a1_fit = a1;
  return ledger;
}

}  // namespace groupwalk
