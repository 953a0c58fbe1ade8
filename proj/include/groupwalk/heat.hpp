#pragma once

#include <span>
#include <utility>
#include <vector>

#include "groupwalk/group.hpp"
#include "groupwalk/spectra.hpp"

namespace groupwalk {

// Truncation plan for the spectral heat series. `cutoff` is the adaptive
// cutoff actually used for computation (smallest enumerated eigenvalue level
// whose certified tail is <= eta). `formula_cutoff` is the closed-form dyadic
// plan 2^{2 k0 / n} with k0 = max(log2(1/eta), cg + (n/2) log2(3n/t)),
// recorded for comparison only. `cg_min_cover` is the smallest cg for which
// the closed-form cutoff dominates the adaptive one.
struct TruncationPlan {
  double t = 0.0;
  double eta = 0.0;
  double cutoff = 0.0;
  double tail_value = 0.0;  // certified majorant tail at `cutoff`
  double k0 = 0.0;
  double formula_cutoff = 0.0;
  double cg_min_cover = 0.0;
};

// Truncated spectral heat series: one decay coefficient e^{-lambda t} per
// mode. The constant mode is present iff `include_constant` was set at
// construction (dropping it gives the mean-zero variant).
struct HeatSeries {
  GroupDescriptor group;
  double t = 0.0;
  std::vector<std::pair<SpectralMode, double>> terms;  // ascending eigenvalue
};

HeatSeries heat_series(const GroupDescriptor& group, double t, double cutoff,
                       bool include_constant = true);

// Heat kernel at x for diffusion time t, truncated to eigenvalues <= cutoff:
//   torus: sum_m e^{-4 pi^2 |m|^2 t} cos(2 pi m.x)
//   SU(2): sum_k ((k+1)/vol) e^{-k(k+2) t} chi_k(theta(x))
double heat_value(const GroupDescriptor& group, const GroupPoint& x, double t, double cutoff);
double heat_value(const HeatSeries& series, const GroupPoint& x);

// Exact L2 norm of the full (untruncated) heat kernel,
// sqrt(sum_i dim F_i e^{-2 lambda_i t} / vol). Tends to 1/sqrt(vol) as t
// grows and scales like t^{-n/4} for small t.
double heat_l2_norm(const GroupDescriptor& group, double t);

// Exact L2 norm of the discarded tail, sqrt(sum_{lambda > cutoff} ...).
double heat_l2_tail(const GroupDescriptor& group, double t, double cutoff);

// Eigenfunction-expansion tail majorant
//   sum_{lambda > cutoff} dim(F_i) e^{-lambda t} c2 lambda^{(n-1)/4},
// summed ascending with compensated accumulation until terms fall below
// 1e-18 relative.
double tail_majorant(const GroupDescriptor& group, double t, double cutoff, double c2);

TruncationPlan plan_truncation(const GroupDescriptor& group, double t, double eta,
                               const ConstantsLedger& ledger);

// Smallest c1 with H_t(x_r) <= c1 t^{-n/2} exp(-r^2 / (5 t)) over the grids.
double fit_gaussian_envelope(const GroupDescriptor& group, std::span<const double> t_grid,
                             std::span<const double> r_grid, const ConstantsLedger& ledger);

// Least-squares fit of H(o,o,t) t^{n/2} ~ a0 + a1 t over the grid.
std::pair<double, double> fit_heat_trace(const GroupDescriptor& group,
                                         std::span<const double> t_grid,
                                         const ConstantsLedger& ledger);

// Off-diagonal smallness check: with r = eps sqrt(5 ln(1/(eta eps^n))) and
// t = eps^2, the heat kernel beyond distance r stays below c1 * eta.
struct FarFieldCheck {
  double eps = 0.0;
  double eta = 0.0;
  double r = 0.0;
  double max_value = 0.0;  // max H_t over probes at distance > r
  bool vacuous = false;    // r >= diameter: nothing to probe
};
FarFieldCheck far_field_check(const GroupDescriptor& group, double eps, double eta, int probes,
                              std::uint64_t seed, const ConstantsLedger& ledger);

// Weighted slope of log(heat_l2_norm) against log(t) over a log-spaced grid.
double heat_norm_slope(const GroupDescriptor& group, double t_min, double t_max, int points);

// Fits c2/c1/a0/a1 for the group at a reference cutoff; cg is preserved.
ConstantsLedger fit_constants(const GroupDescriptor& group, double cg = 1.0);

}  // namespace groupwalk
