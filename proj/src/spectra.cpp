#include "groupwalk/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "groupwalk/errors.hpp"

namespace groupwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPiSq = 4.0 * kPi * kPi;

// Pascal-triangle binomials, exact in double for the level range in use.
std::vector<std::vector<double>> binomial_rows(int max_n) {
  std::vector<std::vector<double>> rows(max_n + 1);
  for (int n = 0; n <= max_n; ++n) {
    rows[n].assign(n + 1, 1.0);
    for (int j = 1; j < n; ++j) rows[n][j] = rows[n - 1][j - 1] + rows[n - 1][j];
  }
  return rows;
}

bool lex_less(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace

std::vector<double> torus_shell_counts(int n, long long s_max) {
  if (s_max < 0) return {};
  std::vector<double> counts(static_cast<std::size_t>(s_max) + 1, 0.0);
  counts[0] = 1.0;
  for (int axis = 0; axis < n; ++axis) {
    std::vector<double> next(counts.size(), 0.0);
    for (long long j = 0; j * j <= s_max; ++j) {
      const double weight = (j == 0) ? 1.0 : 2.0;
      const long long jj = j * j;
      for (long long s = 0; s + jj <= s_max; ++s) {
        if (counts[s] != 0.0) next[s + jj] += weight * counts[s];
      }
    }
    counts.swap(next);
  }
  return counts;
}

std::vector<SpectralMode> enumerate_modes(const GroupDescriptor& group, double max_eigenvalue,
                                          std::size_t cap) {
  if (max_eigenvalue < 0.0) throw std::invalid_argument("max_eigenvalue must be >= 0");
  std::vector<SpectralMode> modes;

  if (group.kind == GroupKind::SU2) {
    for (int level = 0;; ++level) {
      const double lambda = static_cast<double>(level) * (level + 2);
      if (lambda > max_eigenvalue) break;
      if (modes.size() >= cap) {
        throw ResourceCapError("mode cap exceeded at level " + std::to_string(level));
      }
      SpectralMode m;
      m.level = level;
      m.lambda = lambda;
      m.dim = level + 1;
      m.eigenspace_dim = (level + 1) * (level + 1);
      modes.push_back(std::move(m));
    }
    return modes;
  }

  const int n = group.dim;
  const long long s_max = static_cast<long long>(std::floor(max_eigenvalue / kFourPiSq));
  // cheap volume estimate first, so absurd cutoffs fail before any real work
  const double crude = unit_ball_volume(n) * std::pow(static_cast<double>(s_max) + 1.0, 0.5 * n);
  if (crude > 4.0 * static_cast<double>(cap) + 1e6) {
    throw ResourceCapError("mode cap exceeded: about " +
                           std::to_string(static_cast<long long>(crude)) +
                           " torus modes below cutoff");
  }
  // exact count next, so the cap check never materializes an oversized list
  const auto shells = torus_shell_counts(n, s_max);
  double projected = 0.0;
  for (double c : shells) projected += c;
  if (projected > static_cast<double>(cap)) {
    throw ResourceCapError("mode cap exceeded: " + std::to_string(static_cast<long long>(projected)) +
                           " torus modes below cutoff");
  }

  const long long radius = static_cast<long long>(std::floor(std::sqrt(static_cast<double>(s_max))));
  Eigen::VectorXi m(n);
  std::vector<SpectralMode> out;
  out.reserve(static_cast<std::size_t>(projected));
  // box enumeration over |m_i| <= radius, filtered to |m|^2 <= s_max
  const std::function<void(int, long long)> rec = [&](int axis, long long sq_so_far) {
    if (axis == n) {
      if (sq_so_far <= s_max) {
        SpectralMode mode;
        mode.freq = m;
        mode.lambda = kFourPiSq * static_cast<double>(sq_so_far);
        out.push_back(std::move(mode));
      }
      return;
    }
    for (long long j = -radius; j <= radius; ++j) {
      const long long next = sq_so_far + j * j;
      if (next > s_max) continue;
      m[axis] = static_cast<int>(j);
      rec(axis + 1, next);
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end(), [](const SpectralMode& a, const SpectralMode& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return lex_less(a.freq, b.freq);
  });
  return out;
}

double unit_ball_volume(int n) {
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double weyl_limit(const GroupDescriptor& group) {
  return unit_ball_volume(group.dim) * group.vol / std::pow(2.0 * kPi, group.dim);
}

double weyl_ratio(const GroupDescriptor& group, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
  double count = 0.0;
  if (group.kind == GroupKind::SU2) {
    for (int level = 0;; ++level) {
      const double lv = static_cast<double>(level) * (level + 2);
      if (lv > lambda) break;
      count += static_cast<double>(level + 1) * (level + 1);
    }
  } else {
    const long long s_max = static_cast<long long>(std::floor(lambda / kFourPiSq));
    for (double c : torus_shell_counts(group.dim, s_max)) count += c;
  }
  return count / std::pow(lambda, 0.5 * group.dim);
}

Eigen::MatrixXcd irrep_matrix(int level, const GroupPoint& g) {
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  if (g.kind != GroupKind::SU2) throw std::invalid_argument("irrep_matrix expects an SU(2) point");
  using C = std::complex<double>;
  const C a(g.v[0], g.v[1]);
  const C b(g.v[2], g.v[3]);
  const int d = level + 1;
  static thread_local std::vector<std::vector<double>> binom = binomial_rows(64);
  if (level >= static_cast<int>(binom.size())) binom = binomial_rows(2 * level);

  // powers of a, conj(a), b, -conj(b) up to `level`
  std::vector<C> pa(d), pca(d), pb(d), pnb(d);
  pa[0] = pca[0] = pb[0] = pnb[0] = C(1.0, 0.0);
  for (int j = 1; j < d; ++j) {
    pa[j] = pa[j - 1] * a;
    pca[j] = pca[j - 1] * std::conj(a);
    pb[j] = pb[j - 1] * b;
    pnb[j] = pnb[j - 1] * (-std::conj(b));
  }

  Eigen::MatrixXcd out(d, d);
  for (int col = 0; col < d; ++col) {
    for (int row = 0; row < d; ++row) {
      // coefficient of the row monomial in the image of the column monomial
      // under z -> z U(g), U = [[a, b], [-conj(b), conj(a)]]
      C sum(0.0, 0.0);
      const int j = col, i = row;
      const int p_lo = std::max(0, i - j);
      const int p_hi = std::min(i, level - j);
      for (int p = p_lo; p <= p_hi; ++p) {
        const int q = i - p;
        sum += binom[level - j][p] * binom[j][q] * pa[level - j - p] * pnb[p] * pb[j - q] * pca[q];
      }
      out(row, col) = sum * std::sqrt(binom[level][j] / binom[level][i]);
    }
  }
  return out;
}

double character(int level, double theta) {
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  const double c = 2.0 * std::cos(theta);
  double prev = 1.0;  // level 0
  if (level == 0) return prev;
  double cur = c;  // level 1
  for (int k = 2; k <= level; ++k) {
    const double next = c * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double fit_supnorm_constant(const GroupDescriptor& group, double max_eigenvalue) {
  if (max_eigenvalue <= 0.0) throw std::invalid_argument("max_eigenvalue must be positive");
  const auto modes = enumerate_modes(group, max_eigenvalue);
  const double exponent = 0.25 * (group.dim - 1);

  if (group.kind == GroupKind::Torus) {
    // |e^{2 pi i m.x}| == 1, so the ratio is exactly lambda^{-(n-1)/4}
    double best = 0.0;
    for (const auto& m : modes) {
      if (m.trivial()) continue;
      best = std::max(best, std::pow(m.lambda, -exponent));
    }
    return best;
  }

  // SU(2): basis eigenfunctions are sqrt(d/vol) * pi_ij. Entries of a unitary
  // matrix are <= 1 in magnitude and the diagonal reaches 1 at the identity,
  // so probing with the identity included pins the per-level maximum.
  Rng probe_rng(0xD0D0D0D0ull);
  std::vector<GroupPoint> probes;
  probes.push_back(identity(group));
  for (int i = 0; i < 384; ++i) probes.push_back(haar_sample(probe_rng, group));
  for (int i = 1; i < 48; ++i) probes.push_back(point_at_distance(group, kPi * i / 48.0));

  double best = 0.0;
  for (const auto& m : modes) {
    if (m.trivial()) continue;
    Eigen::MatrixXd sup = Eigen::MatrixXd::Zero(m.dim, m.dim);
    for (const auto& p : probes) {
      sup = sup.cwiseMax(irrep_matrix(m.level, p).cwiseAbs().eval());
    }
    const double scale = std::sqrt(m.dim / group.vol) / std::pow(m.lambda, exponent);
    best = std::max(best, scale * sup.maxCoeff());
  }
  return best;
}

double fit_multiplicity_constant(const GroupDescriptor& group, double max_eigenvalue) {
  const auto modes = enumerate_modes(group, max_eigenvalue);
  const double exponent = 0.5 * (group.dim - 1);
  if (group.kind == GroupKind::SU2) {
    double best = 0.0;
    for (const auto& m : modes) {
      if (m.trivial()) continue;
      best = std::max(best, m.eigenspace_dim / std::pow(m.lambda, exponent));
    }
    return best;
  }
  // torus eigenspaces group all frequencies on a shell
  const long long s_max = static_cast<long long>(std::floor(max_eigenvalue / kFourPiSq));
  const auto shells = torus_shell_counts(group.dim, s_max);
  double best = 0.0;
  for (long long s = 1; s < static_cast<long long>(shells.size()); ++s) {
    if (shells[s] == 0.0) continue;
    best = std::max(best, shells[s] / std::pow(kFourPiSq * s, exponent));
  }
  return best;
}

}  // namespace groupwalk
