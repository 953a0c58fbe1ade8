#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "groupwalk/oracles.hpp"
#include "groupwalk/word_measure.hpp"

using namespace groupwalk;

namespace {
constexpr double kPi = 3.14159265358979323846;

SpectralMode torus_mode(std::initializer_list<int> freq) {
  SpectralMode mode;
  mode.freq = Eigen::VectorXi(static_cast<Eigen::Index>(freq.size()));
  Eigen::Index i = 0;
  double sq = 0.0;
  for (int f : freq) {
    mode.freq[i++] = f;
    sq += static_cast<double>(f) * f;
  }
  mode.lambda = 4.0 * kPi * kPi * sq;
  return mode;
}
}  // namespace

TEST_CASE("alphabets are reproducible and Haar-distributed") {
  const auto su2 = GroupDescriptor::su2();
  const auto a = build_alphabet(999, 4, su2);
  const auto b = build_alphabet(999, 4, su2);
  for (int i = 0; i < 4; ++i) CHECK(a.gens[i].v == b.gens[i].v);

  // over many seeds the one-generator average of cos(2 pi g) is centered
  const auto t1 = GroupDescriptor::torus(1);
  double mean = 0.0;
  const int seeds = 10'000;
  for (int s = 0; s < seeds; ++s) {
    const auto alpha = build_alphabet(derive_seed(5, s), 1, t1);
    mean += std::cos(2.0 * kPi * alpha.gens[0].v[0]);
  }
  mean /= seeds;
  CHECK(std::fabs(mean) <= 3.0 * std::sqrt(0.5 / seeds));
}

TEST_CASE("averaging operator basics") {
  const auto t1 = GroupDescriptor::torus(1);
  auto alphabet = build_alphabet(3, 1, t1);

  // trivial mode is fixed
  CHECK(averaging_operator(alphabet, torus_mode({0})).scalar == doctest::Approx(1.0));

  // one-generator transform is cos(2 pi m alpha)
  const double alpha = alphabet.gens[0].v[0];
  for (int m = 1; m <= 5; ++m) {
    CHECK(averaging_operator(alphabet, torus_mode({m})).scalar ==
          doctest::Approx(std::cos(2.0 * kPi * m * alpha)).epsilon(1e-13));
  }

  // rational generator leaves its resonant mode unmixed
  alphabet.gens[0].v[0] = 1.0 / 3.0;
  CHECK(averaging_operator(alphabet, torus_mode({3})).scalar == doctest::Approx(1.0));

  // identity generators give the identity on every mode
  const auto su2 = GroupDescriptor::su2();
  auto still = build_alphabet(4, 2, su2);
  for (auto& g : still.gens) g = identity(su2);
  for (const auto& mode : enumerate_modes(su2, 50.0)) {
    if (mode.trivial()) continue;
    const auto op = averaging_operator(still, mode);
    CHECK((op.matrix - Eigen::MatrixXcd::Identity(mode.dim, mode.dim)).norm() <= 1e-12);
  }
  CHECK(spectral_gap(still, 50.0).gap == doctest::Approx(1.0));

  // Hermitian with spectrum in [-1, 1]
  const auto random_alpha = build_alphabet(17, 3, su2);
  for (const auto& mode : enumerate_modes(su2, 80.0)) {
    if (mode.trivial()) continue;
    const auto op = averaging_operator(random_alpha, mode);
    CHECK((op.matrix - op.matrix.adjoint()).norm() <= 1e-12);
    CHECK(operator_norm(op) <= 1.0 + 1e-12);
  }
}

TEST_CASE("word Fourier powers equal exhaustive enumeration") {
  const auto t1 = GroupDescriptor::torus(1);
  const auto torus_alpha = build_alphabet(11, 2, t1);
  for (int m = -5; m <= 5; ++m) {
    const auto mode = torus_mode({m});
    CHECK(word_fourier_power(torus_alpha, mode, 0).scalar == doctest::Approx(1.0));
    const double oracle = oracles::exhaustive_word_average(torus_alpha, mode.freq, 3);
    CHECK(std::fabs(word_fourier_power(torus_alpha, mode, 3).scalar - oracle) <= 1e-12);
  }

  const auto su2 = GroupDescriptor::su2();
  const auto su2_alpha = build_alphabet(12, 2, su2);
  for (const auto& mode : enumerate_modes(su2, 24.0)) {
    if (mode.trivial()) continue;
    const auto power = word_fourier_power(su2_alpha, mode, 3);
    const auto oracle = oracles::exhaustive_word_average(su2_alpha, mode.level, 3);
    CHECK((power.matrix - oracle).norm() <= 1e-9);
  }
}

TEST_CASE("spectral gap: resonances and conjugation invariance") {
  const auto t1 = GroupDescriptor::torus(1);
  auto alphabet = build_alphabet(21, 1, t1);
  alphabet.gens[0].v[0] = 1.0 / 3.0;
  CHECK(spectral_gap(alphabet, 4.0 * kPi * kPi * 9.0 + 1.0).gap == doctest::Approx(1.0));

  const auto su2 = GroupDescriptor::su2();
  Rng rng(2718);
  auto base = build_alphabet(31, 5, su2);
  const auto h = haar_sample(rng, su2);
  auto conj = base;
  for (auto& g : conj.gens) g = multiply(multiply(h, g), inverse(h));
  const auto ga = spectral_gap(base, 48.0);
  const auto gb = spectral_gap(conj, 48.0);
  REQUIRE(ga.per_mode.size() == gb.per_mode.size());
  for (std::size_t i = 0; i < ga.per_mode.size(); ++i) {
    CHECK(std::fabs(ga.per_mode[i].second - gb.per_mode[i].second) <= 1e-10);
  }
}

TEST_CASE("random SU(2) alphabets mix: gap below 3/4 almost always") {
  const auto su2 = GroupDescriptor::su2();
  const double cutoff = 10.0 * 12.0;  // levels up to 10
  int below = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const auto alphabet = build_alphabet(derive_seed(1001, trial), 20, su2);
    if (spectral_gap(alphabet, cutoff).gap < 0.75) ++below;
  }
  CHECK(below >= static_cast<int>(0.95 * trials));
}

TEST_CASE("averaging operators are centered over the Haar ensemble") {
  const auto su2 = GroupDescriptor::su2();
  const int seeds = 20'000;
  double mean = 0.0, mean_sq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto alpha = build_alphabet(derive_seed(31337, s), 1, su2);
    const double chi = character(2, distance(identity(su2), alpha.gens[0]));
    mean += chi;
    mean_sq += chi * chi;
  }
  mean /= seeds;
  mean_sq /= seeds;
  const double sigma = std::sqrt((mean_sq - mean * mean) / seeds);
  CHECK(std::fabs(mean) <= 3.0 * sigma);
}

TEST_CASE("concentration bound: plug-in value and monotonicity") {
  const auto su2 = GroupDescriptor::su2();
  const auto bound = chernoff_delta(512, 1024.0, su2, 1.0);
  // 2^15 e^{-512/(16 ln 2)} evaluated independently
  CHECK(bound.formula == doctest::Approx(2.922174081957868e-16).epsilon(1e-9));
  CHECK(bound.band_dim == doctest::Approx(11439.0));  // levels 1..31

  CHECK(chernoff_delta(64, 1024.0, su2, 1.0).formula >
        chernoff_delta(128, 1024.0, su2, 1.0).formula);
  CHECK(chernoff_delta(64, 4096.0, su2, 1.0).formula >
        chernoff_delta(64, 1024.0, su2, 1.0).formula);
}

TEST_CASE("discrepancy: scalar series oracle and ell = 0 consistency") {
  const auto t1 = GroupDescriptor::torus(1);
  const auto ledger = fit_constants(t1, 1.0);
  auto alphabet = build_alphabet(61, 1, t1);
  alphabet.gens[0].v[0] = std::sqrt(2.0) - 1.0;

  const double t = 0.01;
  for (int ell : {1, 2, 5}) {
    double direct = 0.0;
    for (int m = 1; m <= 10'000; ++m) {
      direct += 2.0 * std::exp(-8.0 * kPi * kPi * m * m * t) *
                std::pow(std::cos(2.0 * kPi * m * alphabet.gens[0].v[0]), 2 * ell);
    }
    const auto report = discrepancy(alphabet, t, ell, 1e-13, ledger);
    CHECK(std::fabs(report.value - std::sqrt(direct)) <= 1e-12);
  }

  for (const auto& group : {t1, GroupDescriptor::su2()}) {
    const auto lg = fit_constants(group, 1.0);
    const auto alpha = build_alphabet(62, 3, group);
    const auto rep = discrepancy(alpha, 0.08, 0, 1e-12, lg);
    const double norm = heat_l2_norm(group, 0.08);
    const double tilde = std::sqrt(std::max(0.0, norm * norm - 1.0 / group.vol));
    CHECK(std::fabs(rep.value - tilde) <= 1e-10);
  }
}

TEST_CASE("discrepancy agrees with a physical-space quadrature") {
  // independent route: build the smoothed word measure as an explicit function
  // and integrate (f - 1)^2 on a uniform grid, exact for trig polynomials
  const auto t1 = GroupDescriptor::torus(1);
  const auto ledger = fit_constants(t1, 1.0);
  const auto alphabet = build_alphabet(55, 1, t1);
  const double alpha = alphabet.gens[0].v[0];
  const double t = 0.02;
  const int ell = 2;

  const double cutoff = 12000.0;  // |m| <= 17 at this diffusion time
  const int grid = 256;
  double sum_sq = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double x = j / static_cast<double>(grid);
    // words of length 2 over {a, a^-1}: values 2a, 0, -2a with weights 1,2,1
    GroupPoint p{GroupKind::Torus, Eigen::VectorXd(1)};
    double f = 0.0;
    for (const auto& [shift, weight] :
         {std::pair{2.0 * alpha, 1.0}, {0.0, 2.0}, {-2.0 * alpha, 1.0}}) {
      double y = x - shift;
      y -= std::floor(y);
      p.v[0] = y;
      f += weight * heat_value(t1, p, t, cutoff);
    }
    f /= 4.0;
    sum_sq += (f - 1.0) * (f - 1.0);
  }
  const double quadrature = std::sqrt(sum_sq / grid);
  const auto report = discrepancy(alphabet, t, ell, 1e-13, ledger);
  CHECK(std::fabs(report.value - quadrature) <= 1e-10);
}

TEST_CASE("discrepancy is nonincreasing in the word length") {
  const auto su2 = GroupDescriptor::su2();
  const auto ledger = fit_constants(su2, 1.0);
  for (std::uint64_t seed : {7ull, 8ull}) {
    const auto alphabet = build_alphabet(seed, 4, su2);
    double prev = discrepancy(alphabet, 0.1, 0, 1e-10, ledger).value;
    for (int ell = 1; ell <= 8; ++ell) {
      const double cur = discrepancy(alphabet, 0.1, ell, 1e-10, ledger).value;
      CHECK(cur <= prev * (1.0 + 1e-9) + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("discrepancy chain bound: gap^ell times the band norm plus tail") {
  const auto su2 = GroupDescriptor::su2();
  const auto ledger = fit_constants(su2, 1.0);
  const auto alphabet = build_alphabet(404, 6, su2);
  const double t = 0.08;
  for (int ell : {1, 3, 7}) {
    const auto rep = discrepancy(alphabet, t, ell, 1e-10, ledger);
    const double gap = spectral_gap(alphabet, rep.cutoff).gap;
    const double band = std::sqrt(std::max(
        0.0, heat_l2_norm(su2, t) * heat_l2_norm(su2, t) - 1.0 / su2.vol));
    CHECK(rep.value <= std::pow(gap, ell) * band + rep.tail + 1e-12);
  }
}

TEST_CASE("equidistribution check: windows, flags, and a non-vacuous run") {
  const auto su2 = GroupDescriptor::su2();
  const auto ledger = fit_constants(su2, 1.0);

  // tiny k: the bound is vacuous and must be flagged, not failed
  const double t = 0.05;
  const int ell = 20;
  const double eta = std::pow(2.0, -ell) * std::pow(t, -0.75) * 1.0000001;
  const auto vac = equidistribution_check(su2, 2, t, ell, eta, 5, 5150, ledger, 2);
  CHECK(vac.window_lower_ok);
  CHECK(vac.vacuous);
  CHECK(vac.bound_holds);

  // k = 128 brings the exact-dimension bound below one
  const auto report = equidistribution_check(su2, 128, t, ell, eta, 20, 5151, ledger, 4);
  CHECK(report.window_lower_ok);
  CHECK(!report.vacuous);
  CHECK(report.delta_exact_dim < 1.0);
  CHECK(report.success_fraction == doctest::Approx(1.0));
  CHECK(report.bound_holds);
  CHECK(report.cg_window_max > 0.0);  // the stated window is nonempty

  // hypothesis violation is flagged through window_lower_ok
  const auto narrow = equidistribution_check(su2, 8, t, 2, 1e-9, 3, 5152, ledger, 1);
  CHECK(!narrow.window_lower_ok);

  // two-torus window at moderate k: every trial meets the 2 eta target
  const auto t2 = GroupDescriptor::torus(2);
  const auto ledger_t2 = fit_constants(t2, 1.0);
  const double eta_t2 = std::pow(2.0, -ell) * std::pow(t, -0.5) * 1.0000001;
  const auto torus_report = equidistribution_check(t2, 32, t, ell, eta_t2, 20, 5153, ledger_t2, 4);
  CHECK(torus_report.window_lower_ok);
  CHECK(torus_report.success_fraction == doctest::Approx(1.0));
  CHECK(torus_report.bound_holds);
}
