#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "groupwalk/group.hpp"

namespace groupwalk {

// One Laplace mode. On the torus a mode is a single frequency vector m with
// eigenvalue 4*pi^2*|m|^2 and a one-dimensional span. On SU(2) a mode is one
// irreducible level k with eigenvalue k*(k+2); the irrep has dimension k+1
// and the full eigenspace carries k+1 copies of it, dimension (k+1)^2.
struct SpectralMode {
  Eigen::VectorXi freq;    // torus frequency vector (size 0 for SU(2))
  int level = 0;           // SU(2) level (0 for torus modes)
  double lambda = 0.0;     // Laplace eigenvalue
  int dim = 1;             // irrep dimension
  int eigenspace_dim = 1;  // full eigenspace dimension

  bool trivial() const { return lambda == 0.0; }
};

// Fitted geometric constants shared by the heat-kernel and word-measure
// checks. cg is the single configurable constant entering the closed-form
// truncation and net planners (default 1).
struct ConstantsLedger {
  double c2_fit = 0.0;  // sup-norm / L2 eigenfunction ratio constant
  double c1_fit = 0.0;  // Gaussian envelope prefactor
  double a0_fit = 0.0;  // leading heat-trace coefficient
  double a1_fit = 0.0;  // first heat-trace correction
  double cg = 1.0;
};

inline constexpr std::size_t kDefaultModeCap = 4'000'000;

// All modes with eigenvalue <= max_eigenvalue, ascending by eigenvalue
// (ties broken lexicographically on the index). Throws ResourceCapError if
// the count would exceed `cap`.
std::vector<SpectralMode> enumerate_modes(const GroupDescriptor& group, double max_eigenvalue,
                                          std::size_t cap = kDefaultModeCap);

// r_n(s) for s = 0..s_max: the number of integer vectors in Z^n with
// |m|^2 = s. Shared bookkeeping for torus eigenvalue counts and tail sums.
std::vector<double> torus_shell_counts(int n, long long s_max);

// N(lambda) / lambda^{n/2} with N counting full eigenspace dimensions of all
// modes with eigenvalue <= lambda (the trivial mode included).
double weyl_ratio(const GroupDescriptor& group, double lambda);

// The large-lambda limit of weyl_ratio: vol(B_n) vol(G) / (2 pi)^n.
double weyl_limit(const GroupDescriptor& group);

double unit_ball_volume(int n);

// SU(2) irrep of the given level evaluated at g, acting on homogeneous
// degree-`level` polynomials in two complex variables in the orthonormal
// binomial-weighted monomial basis. Level 1 is the defining 2x2 matrix of
// the quaternion itself.
Eigen::MatrixXcd irrep_matrix(int level, const GroupPoint& g);

// SU(2) character sin((level+1) theta)/sin(theta), evaluated through the
// Chebyshev recurrence so the theta -> 0 and theta -> pi limits are exact.
double character(int level, double theta);

// Largest ratio ||phi||_inf / (lambda^{(n-1)/4} ||phi||_2) over basis
// eigenfunctions with 0 < lambda <= max_eigenvalue. Torus ratios are exact;
// SU(2) sup norms are probed (the identity probe makes the binding diagonal
// entries exact).
double fit_supnorm_constant(const GroupDescriptor& group, double max_eigenvalue);

// Largest eigenspace_dim / lambda^{(n-1)/2} over modes with
// 0 < lambda <= max_eigenvalue.
double fit_multiplicity_constant(const GroupDescriptor& group, double max_eigenvalue);

}  // namespace groupwalk
