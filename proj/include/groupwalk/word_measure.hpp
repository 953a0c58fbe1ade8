#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "groupwalk/group.hpp"
#include "groupwalk/heat.hpp"
#include "groupwalk/spectra.hpp"

namespace groupwalk {

// k Haar generators; the alphabet is their union with the inverses, so the
// one-step measure is symmetric and all Fourier data below is Hermitian.
struct Alphabet {
  GroupDescriptor group;
  std::vector<GroupPoint> gens;
  int k = 0;
  std::uint64_t seed = 0;
};

Alphabet build_alphabet(std::uint64_t seed, int k, const GroupDescriptor& group);

// Fourier transform of the one-step alphabet measure restricted to one mode:
// a real scalar in [-1,1] on the torus, a d x d Hermitian matrix with
// operator norm <= 1 on SU(2) (one irrep copy).
struct AveragingOperator {
  SpectralMode mode;
  double scalar = 1.0;
  Eigen::MatrixXcd matrix;  // empty for torus modes

  bool is_scalar() const { return matrix.size() == 0; }
};

AveragingOperator averaging_operator(const Alphabet& alphabet, const SpectralMode& mode);

// ell-th convolution power in the Fourier domain, by iterated multiplication.
AveragingOperator word_fourier_power(const Alphabet& alphabet, const SpectralMode& mode, int ell);
AveragingOperator operator_power(const AveragingOperator& op, int ell);

// Operator norm: |scalar|, or the largest |eigenvalue| of the Hermitian matrix.
double operator_norm(const AveragingOperator& op);
double frobenius_sq(const AveragingOperator& op);

struct GapReport {
  double gap = 0.0;  // sup over nontrivial modes with lambda <= cutoff of ||A_mode||
  std::vector<std::pair<double, double>> per_mode;  // (lambda, norm), mode order
};

GapReport spectral_gap(const Alphabet& alphabet, double cutoff);

// Concentration bound for the event gap > 1/2 at the given cutoff:
// `formula` = cg * M^{n/2} * exp(-k / (16 ln 2));
// `exact_dim` = 2 D exp(-eps^2 mu k / (2 ln 2)) with D = dim of the
// band-limited space (full eigenspace dimensions), eps = mu = 1/2.
struct ChernoffBound {
  double formula = 0.0;
  double exact_dim = 0.0;
  double band_dim = 0.0;
};

ChernoffBound chernoff_delta(int k, double cutoff, const GroupDescriptor& group, double cg);

// L2 distance between the heat-smoothed word measure and the constant
// density, band-limited to `cutoff` (from the truncation plan at eta_acc);
// `tail` is the certified truncation error bar.
struct DiscrepancyReport {
  double t = 0.0;
  int ell = 0;
  double value = 0.0;
  double tail = 0.0;
  double cutoff = 0.0;
};

DiscrepancyReport discrepancy(const Alphabet& alphabet, double t, int ell, double eta_acc,
                              const ConstantsLedger& ledger);

// Monte Carlo equidistribution experiment: `trials` seeded alphabets, each
// tested for discrepancy <= 2 eta, against the concentration bound
// delta = (cg / eta) exp(-k / (16 ln 2)) and its exact-dimension variant.
struct EquidistributionReport {
  double t = 0.0;
  double eta = 0.0;
  int ell = 0;
  int k = 0;
  int trials = 0;
  bool window_lower_ok = false;  // 2^-ell t^{-n/4} <= eta
  double cg_window_max = 0.0;    // largest cg with eta <= 2^-cg t^{n/2}
  double delta_cg1 = 0.0;
  double delta_exact_dim = 0.0;
  double cg_fitted = 0.0;  // cg equating the formula and exact-dim bounds
  bool vacuous = false;    // both delta values >= 1
  int successes = 0;
  int indeterminate = 0;  // value <= 2 eta < value + tail
  double success_fraction = 0.0;
  bool bound_holds = false;
};

EquidistributionReport equidistribution_check(const GroupDescriptor& group, int k, double t,
                                              int ell, double eta, int trials,
                                              std::uint64_t master_seed,
                                              const ConstantsLedger& ledger, int threads = 1);

}  // namespace groupwalk
