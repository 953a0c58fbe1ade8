#include "groupwalk/word_measure.hpp"

#include <cmath>
#include <stdexcept>

#include "groupwalk/parallel.hpp"

namespace groupwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2 = 0.6931471805599453;

}  // namespace

Alphabet build_alphabet(std::uint64_t seed, int k, const GroupDescriptor& group) {
  if (k < 1) throw std::invalid_argument("alphabet needs k >= 1 generators");
  Alphabet a;
  a.group = group;
  a.k = k;
  a.seed = seed;
  Rng rng(seed);
  a.gens.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) a.gens.push_back(haar_sample(rng, group));
  return a;
}

AveragingOperator averaging_operator(const Alphabet& alphabet, const SpectralMode& mode) {
  AveragingOperator op;
  op.mode = mode;
  if (alphabet.group.kind == GroupKind::Torus) {
    if (mode.freq.size() != alphabet.group.dim) {
      throw std::invalid_argument("mode does not belong to the alphabet's group");
    }
    double sum = 0.0;
    for (const auto& g : alphabet.gens) {
      double phase = 0.0;
      for (Eigen::Index i = 0; i < mode.freq.size(); ++i) phase += mode.freq[i] * g.v[i];
      sum += std::cos(2.0 * kPi * phase);  // inverses pair into cosines
    }
    op.scalar = sum / alphabet.k;
    return op;
  }
  const int d = mode.dim;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& g : alphabet.gens) {
    const Eigen::MatrixXcd rep = irrep_matrix(mode.level, g);
    acc += rep + rep.adjoint();
  }
  op.matrix = acc / (2.0 * alphabet.k);
  return op;
}

AveragingOperator operator_power(const AveragingOperator& op, int ell) {
  if (ell < 0) throw std::invalid_argument("word length must be >= 0");
  AveragingOperator out;
  out.mode = op.mode;
  if (op.is_scalar()) {
    double v = 1.0;
    for (int i = 0; i < ell; ++i) v *= op.scalar;
    out.scalar = v;
    return out;
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(op.matrix.rows(), op.matrix.cols());
  for (int i = 0; i < ell; ++i) acc = (acc * op.matrix).eval();
  out.matrix = std::move(acc);
  return out;
}

AveragingOperator word_fourier_power(const Alphabet& alphabet, const SpectralMode& mode, int ell) {
  return operator_power(averaging_operator(alphabet, mode), ell);
}

double operator_norm(const AveragingOperator& op) {
  if (op.is_scalar()) return std::fabs(op.scalar);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::max(std::fabs(ev.minCoeff()), std::fabs(ev.maxCoeff()));
}

double frobenius_sq(const AveragingOperator& op) {
  if (op.is_scalar()) return op.scalar * op.scalar;
  return op.matrix.squaredNorm();
}

GapReport spectral_gap(const Alphabet& alphabet, double cutoff) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
  GapReport report;
  for (const auto& mode : enumerate_modes(alphabet.group, cutoff)) {
    if (mode.trivial()) continue;
    const double norm = operator_norm(averaging_operator(alphabet, mode));
    report.per_mode.emplace_back(mode.lambda, norm);
    report.gap = std::max(report.gap, norm);
  }
  return report;
}

ChernoffBound chernoff_delta(int k, double cutoff, const GroupDescriptor& group, double cg) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
  ChernoffBound out;
  const double decay = std::exp(-k / (16.0 * kLog2));
  out.formula = cg * std::pow(cutoff, 0.5 * group.dim) * decay;
  double dim = 0.0;
  for (const auto& mode : enumerate_modes(group, cutoff)) {
    if (!mode.trivial()) dim += mode.eigenspace_dim;
  }
  out.band_dim = dim;
  // Ahlswede--Winter with eps = 1/2, mu = 1/2: 2 D exp(-k / (16 ln 2))
  out.exact_dim = 2.0 * dim * decay;
  return out;
}

DiscrepancyReport discrepancy(const Alphabet& alphabet, double t, int ell, double eta_acc,
                              const ConstantsLedger& ledger) {
  if (ell < 0) throw std::invalid_argument("word length must be >= 0");
  const auto plan = plan_truncation(alphabet.group, t, eta_acc, ledger);
  DiscrepancyReport report;
  report.t = t;
  report.ell = ell;
  report.cutoff = plan.cutoff;
  report.tail = plan.tail_value;

  double value_sq = 0.0;
  if (alphabet.group.kind == GroupKind::Torus) {
    for (const auto& mode : enumerate_modes(alphabet.group, plan.cutoff)) {
      if (mode.trivial()) continue;
      const auto power = word_fourier_power(alphabet, mode, ell);
      value_sq += std::exp(-2.0 * mode.lambda * t) * power.scalar * power.scalar;
    }
  } else {
    for (const auto& mode : enumerate_modes(alphabet.group, plan.cutoff)) {
      if (mode.trivial()) continue;
      const auto power = word_fourier_power(alphabet, mode, ell);
      value_sq +=
          mode.dim / alphabet.group.vol * std::exp(-2.0 * mode.lambda * t) * frobenius_sq(power);
    }
  }
  report.value = std::sqrt(value_sq);
  return report;
}

EquidistributionReport equidistribution_check(const GroupDescriptor& group, int k, double t,
                                              int ell, double eta, int trials,
                                              std::uint64_t master_seed,
                                              const ConstantsLedger& ledger, int threads) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int n = group.dim;
  EquidistributionReport report;
  report.t = t;
  report.eta = eta;
  report.ell = ell;
  report.k = k;
  report.trials = trials;

  const double lower = std::pow(2.0, -ell) * std::pow(t, -0.25 * n);
  report.window_lower_ok = lower <= eta * (1.0 + 1e-12);
  report.cg_window_max = std::log2(std::pow(t, 0.5 * n) / eta);

  const double decay = std::exp(-k / (16.0 * kLog2));
  report.delta_cg1 = (ledger.cg / eta) * decay;
  const double band_cutoff = std::pow(eta, -2.0 / n);
  const auto bound = chernoff_delta(k, band_cutoff, group, ledger.cg);
  report.delta_exact_dim = bound.exact_dim;
  report.cg_fitted = 2.0 * bound.band_dim / std::pow(band_cutoff, 0.5 * n);
  report.vacuous = std::min(report.delta_cg1, report.delta_exact_dim) >= 1.0;

  const double eta_acc = std::min(1e-8, 0.01 * eta);
  struct Outcome {
    bool success = false;
    bool indeterminate = false;
  };
  std::function<Outcome(int)> run_one = [&](int trial) {
    const auto alphabet = build_alphabet(derive_seed(master_seed, trial), k, group);
    const auto rep = discrepancy(alphabet, t, ell, eta_acc, ledger);
    Outcome o;
    if (rep.value + rep.tail <= 2.0 * eta) {
      o.success = true;
    } else if (rep.value <= 2.0 * eta) {
      o.indeterminate = true;  // band value passes, error bar straddles
    }
    return o;
  };
  const auto outcomes = parallel_trials<Outcome>(trials, threads, run_one);
  for (const auto& o : outcomes) {
    report.successes += o.success ? 1 : 0;
    report.indeterminate += o.indeterminate ? 1 : 0;
  }
  report.success_fraction = static_cast<double>(report.successes) / trials;
  const double delta = std::min(1.0, std::min(report.delta_cg1, report.delta_exact_dim));
  report.bound_holds = report.success_fraction >= 1.0 - delta - 1e-12;
  return report;
}

}  // namespace groupwalk
