#include "groupwalk/covering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "groupwalk/errors.hpp"

namespace groupwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;

double halton(long long index, int base, double rotation) {
  double f = 1.0, value = 0.0;
  long long i = index;
  while (i > 0) {
    f /= base;
    value += f * (i % base);
    i /= base;
  }
  value += rotation;
  return value - std::floor(value);
}

// per-layer torus coefficient vectors with sum |c_i| == layer
void for_each_composition(int k, int layer, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> c(static_cast<std::size_t>(k), 0);
  const std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == k - 1) {
      if (remaining == 0) {
        c[static_cast<std::size_t>(axis)] = 0;
        f(c);
      } else {
        c[static_cast<std::size_t>(axis)] = remaining;
        f(c);
        c[static_cast<std::size_t>(axis)] = -remaining;
        f(c);
      }
      return;
    }
    for (int a = 0; a <= remaining; ++a) {
      if (a == 0) {
        c[static_cast<std::size_t>(axis)] = 0;
        rec(axis + 1, remaining);
      } else {
        c[static_cast<std::size_t>(axis)] = a;
        rec(axis + 1, remaining - a);
        c[static_cast<std::size_t>(axis)] = -a;
        rec(axis + 1, remaining - a);
      }
    }
  };
  rec(0, layer);
}

GroupPoint torus_value(const Alphabet& alphabet, const std::vector<int>& coeffs) {
  GroupPoint p = identity(alphabet.group);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(alphabet.group.dim);
  for (int i = 0; i < alphabet.k; ++i) {
    if (coeffs[static_cast<std::size_t>(i)] != 0) {
      acc += coeffs[static_cast<std::size_t>(i)] * alphabet.gens[static_cast<std::size_t>(i)].v;
    }
  }
  for (int i = 0; i < alphabet.group.dim; ++i) {
    double y = acc[i] - std::floor(acc[i]);
    if (y >= 1.0) y = 0.0;
    p.v[i] = y;
  }
  return p;
}

double dedup_edge(const GroupDescriptor& group, std::size_t expected_points) {
  const double span = group.kind == GroupKind::Torus ? 1.0 : 2.0;
  if (expected_points < 8) return span / 4.0;
  const int n = group.kind == GroupKind::Torus ? group.dim : 4;
  const double edge = span * std::pow(4.0 / static_cast<double>(expected_points), 1.0 / n);
  return std::clamp(edge, span / 512.0, span / 2.0);
}

}  // namespace

double binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (long long i = 1; i <= k; ++i) {
    result *= static_cast<double>(n - k + i);
    result /= static_cast<double>(i);
  }
  return result;
}

double abelian_word_count(int k, int ell, bool exact_length) {
  // vectors c in Z^k with sum |c_i| <= ell (parity-matched when exact)
  std::vector<double> by_weight(static_cast<std::size_t>(ell) + 1, 0.0);
  by_weight[0] = 1.0;
  for (int axis = 0; axis < k; ++axis) {
    std::vector<double> next(by_weight.size(), 0.0);
    for (int s = 0; s <= ell; ++s) {
      if (by_weight[static_cast<std::size_t>(s)] == 0.0) continue;
      next[static_cast<std::size_t>(s)] += by_weight[static_cast<std::size_t>(s)];
      for (int a = 1; s + a <= ell; ++a) {
        next[static_cast<std::size_t>(s + a)] += 2.0 * by_weight[static_cast<std::size_t>(s)];
      }
    }
    by_weight.swap(next);
  }
  double total = 0.0;
  for (int s = 0; s <= ell; ++s) {
    if (exact_length && ((ell - s) % 2 != 0)) continue;
    total += by_weight[static_cast<std::size_t>(s)];
  }
  return total;
}

double free_word_count(int k, int ell, bool exact_length) {
  // reduced words over 2k letters: R(0) = 1, R(j) = 2k (2k-1)^{j-1}
  double total = 0.0;
  double r = 1.0;
  for (int j = 0; j <= ell; ++j) {
    if (j == 1) {
      r = 2.0 * k;
    } else if (j >= 2) {
      r *= 2.0 * k - 1.0;
    }
    if (!exact_length || ((ell - j) % 2 == 0)) total += r;
  }
  return total;
}

SpatialIndex::SpatialIndex(const GroupDescriptor& group, double cell_edge) : group_(group) {
  wrap_ = group.kind == GroupKind::Torus;
  axes_ = wrap_ ? group.dim : 4;
  const double span = wrap_ ? 1.0 : 2.0;
  cells_per_axis_ = std::max<long long>(1, static_cast<long long>(std::floor(span / cell_edge)));
  cells_per_axis_ = std::min<long long>(cells_per_axis_, 512);
  edge_ = span / static_cast<double>(cells_per_axis_);
}

std::uint64_t SpatialIndex::cell_key(const Eigen::VectorXd& coords) const {
  std::uint64_t key = 0;
  for (int i = 0; i < axes_; ++i) {
    const double x = wrap_ ? coords[i] : coords[i] + 1.0;
    long long c = static_cast<long long>(std::floor(x / edge_));
    c = std::clamp<long long>(c, 0, cells_per_axis_ - 1);
    key = key * static_cast<std::uint64_t>(cells_per_axis_) + static_cast<std::uint64_t>(c);
  }
  return key;
}

void SpatialIndex::insert(const GroupPoint& p) {
  buckets_[cell_key(p.v)].push_back(static_cast<std::uint32_t>(points_.size()));
  points_.push_back(p);
}

double SpatialIndex::min_distance(const GroupPoint& probe) const {
  if (points_.empty()) return std::numeric_limits<double>::infinity();

  // chordal metric on SU(2) during the search; converted at the end
  const auto raw_dist = [&](const GroupPoint& a, const GroupPoint& b) {
    if (wrap_) return distance(a, b);
    return (a.v - b.v).norm();
  };

  std::vector<long long> center(static_cast<std::size_t>(axes_));
  for (int i = 0; i < axes_; ++i) {
    const double x = wrap_ ? probe.v[i] : probe.v[i] + 1.0;
    center[static_cast<std::size_t>(i)] =
        std::clamp<long long>(static_cast<long long>(std::floor(x / edge_)), 0, cells_per_axis_ - 1);
  }

  double best = std::numeric_limits<double>::infinity();
  const long long ring_max = wrap_ ? cells_per_axis_ / 2 : cells_per_axis_;
  std::vector<long long> offset(static_cast<std::size_t>(axes_));

  for (long long ring = 0; ring <= ring_max; ++ring) {
    if (ring > 0 && static_cast<double>(ring - 1) * edge_ > best) break;
    // enumerate cells at Chebyshev distance exactly `ring`
    const std::function<void(int, bool)> rec = [&](int axis, bool on_ring) {
      if (axis == axes_) {
        if (!on_ring) return;
        std::uint64_t key = 0;
        for (int i = 0; i < axes_; ++i) {
          long long c = center[static_cast<std::size_t>(i)] + offset[static_cast<std::size_t>(i)];
          if (wrap_) {
            c = ((c % cells_per_axis_) + cells_per_axis_) % cells_per_axis_;
          } else if (c < 0 || c >= cells_per_axis_) {
            return;
          }
          key = key * static_cast<std::uint64_t>(cells_per_axis_) + static_cast<std::uint64_t>(c);
        }
        const auto it = buckets_.find(key);
        if (it == buckets_.end()) return;
        for (std::uint32_t idx : it->second) {
          best = std::min(best, raw_dist(probe, points_[idx]));
        }
        return;
      }
      for (long long o = -ring; o <= ring; ++o) {
        offset[static_cast<std::size_t>(axis)] = o;
        rec(axis + 1, on_ring || std::llabs(o) == ring);
      }
    };
    rec(0, ring == 0);
  }

  if (!wrap_) {
    best = 2.0 * std::asin(std::clamp(best / 2.0, 0.0, 1.0));
  }
  return best;
}

bool SpatialIndex::within(const GroupPoint& probe, double dist) const {
  return min_distance(probe) <= dist;
}

ProbeSequence::ProbeSequence(const GroupDescriptor& group, std::uint64_t seed)
    : group_(group), rng_(seed) {
  if (group.kind == GroupKind::Torus) {
    rotation_.resize(group.dim);
    for (int i = 0; i < group.dim; ++i) rotation_[i] = rng_.uniform01();
  }
}

GroupPoint ProbeSequence::next() {
  if (group_.kind == GroupKind::SU2) return haar_sample(rng_, group_);
  static constexpr int kBases[] = {2, 3, 5, 7, 11, 13};
  ++index_;
  GroupPoint p{GroupKind::Torus, Eigen::VectorXd(group_.dim)};
  for (int i = 0; i < group_.dim; ++i) {
    p.v[i] = halton(index_, kBases[i % 6], rotation_[i]);
  }
  return p;
}

WordSet enumerate_words(const Alphabet& alphabet, int ell, double dedup_tol, bool exact_length,
                        std::size_t cap) {
  if (ell < 0) throw std::invalid_argument("word length must be >= 0");
  WordSet out;
  out.group = alphabet.group;
  out.ell = ell;
  out.exact_length = exact_length;
  out.dedup_tol = dedup_tol;

  if (alphabet.group.kind == GroupKind::Torus) {
    out.exact_count = abelian_word_count(alphabet.k, ell, exact_length);
    if (out.exact_count > static_cast<double>(cap)) {
      throw ResourceCapError(
          "word enumeration cap exceeded: " +
          std::to_string(static_cast<long long>(out.exact_count)) + " projected values");
    }
    SpatialIndex dedup(alphabet.group, dedup_edge(alphabet.group, static_cast<std::size_t>(out.exact_count)));
    for (int layer = 0; layer <= ell; ++layer) {
      if (exact_length && ((ell - layer) % 2 != 0)) continue;
      for_each_composition(alphabet.k, layer, [&](const std::vector<int>& coeffs) {
        const GroupPoint value = torus_value(alphabet, coeffs);
        if (!dedup.within(value, dedup_tol)) {
          dedup.insert(value);
          out.points.push_back(value);
        }
      });
    }
    return out;
  }

  out.exact_count = free_word_count(alphabet.k, ell, exact_length);
  // layered products; per-layer sets are deduplicated independently because a
  // value reached at layer j feeds layer j+1 even if it already appeared earlier
  std::vector<GroupPoint> letters;
  for (const auto& g : alphabet.gens) {
    letters.push_back(g);
    letters.push_back(inverse(g));
  }
  SpatialIndex seen(alphabet.group, dedup_edge(alphabet.group, std::min<std::size_t>(cap, 1 << 16)));
  std::vector<GroupPoint> frontier{identity(alphabet.group)};
  const auto take_layer = [&](const std::vector<GroupPoint>& layer) {
    for (const auto& p : layer) {
      if (!seen.within(p, dedup_tol)) {
        seen.insert(p);
        out.points.push_back(p);
        if (out.points.size() > cap) {
          throw ResourceCapError("word enumeration cap exceeded at " +
                                 std::to_string(out.points.size()) + " values");
        }
      }
    }
  };
  if (!exact_length || ell % 2 == 0) take_layer(frontier);
  for (int layer = 1; layer <= ell; ++layer) {
    std::vector<GroupPoint> next;
    SpatialIndex layer_dedup(alphabet.group, dedup_edge(alphabet.group, frontier.size() * letters.size()));
    for (const auto& w : frontier) {
      for (const auto& letter : letters) {
        const GroupPoint value = multiply(w, letter);
        if (!layer_dedup.within(value, dedup_tol)) {
          layer_dedup.insert(value);
          next.push_back(value);
          if (next.size() > cap) {
            throw ResourceCapError("word enumeration cap exceeded at layer " +
                                   std::to_string(layer));
          }
        }
      }
    }
    frontier.swap(next);
    if (!exact_length || ((ell - layer) % 2 == 0)) take_layer(frontier);
  }
  return out;
}

double covering_radius(const WordSet& words, int probes, std::uint64_t seed) {
  if (words.points.empty()) throw std::invalid_argument("covering radius of an empty set");
  if (probes < 1) throw std::invalid_argument("need at least one probe");
  SpatialIndex index(words.group, dedup_edge(words.group, words.points.size()));
  for (const auto& p : words.points) index.insert(p);
  ProbeSequence stream(words.group, seed);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    worst = std::max(worst, index.min_distance(stream.next()));
  }
  return worst;
}

bool net_check(const WordSet& words, double r, int probes, std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("net radius must be positive");
  if (words.points.empty()) return false;
  SpatialIndex index(words.group, dedup_edge(words.group, words.points.size()));
  for (const auto& p : words.points) index.insert(p);
  ProbeSequence stream(words.group, seed);
  for (int i = 0; i < probes; ++i) {
    if (!index.within(stream.next(), 2.0 * r)) return false;
  }
  return true;
}

int default_net_probes(const GroupDescriptor& group, double r) {
  const double want = group.kind == GroupKind::Torus
                          ? 10.0 * std::pow(1.0 / r, group.dim)
                          : 10.0 * std::pow(kPi / r, 3);
  return static_cast<int>(std::min(want, 300000.0));
}

LayeredNetResult net_check_layered(const Alphabet& alphabet, int ell_max, double r, int probes,
                                   std::uint64_t seed, std::size_t cap) {
  if (!(r > 0.0)) throw std::invalid_argument("net radius must be positive");
  LayeredNetResult result;

  ProbeSequence stream(alphabet.group, seed);
  std::vector<GroupPoint> probe_points;
  probe_points.reserve(static_cast<std::size_t>(probes));
  for (int i = 0; i < probes; ++i) probe_points.push_back(stream.next());
  std::vector<std::uint32_t> uncovered(probe_points.size());
  for (std::size_t i = 0; i < uncovered.size(); ++i) uncovered[i] = static_cast<std::uint32_t>(i);

  SpatialIndex all(alphabet.group, std::max(r, dedup_edge(alphabet.group, cap / 8)));
  std::vector<GroupPoint> letters;
  if (alphabet.group.kind == GroupKind::SU2) {
    for (const auto& g : alphabet.gens) {
      letters.push_back(g);
      letters.push_back(inverse(g));
    }
  }
  std::vector<GroupPoint> frontier{identity(alphabet.group)};
  const double dedup_tol = 1e-9;

  for (int layer = 0; layer <= ell_max; ++layer) {
    std::vector<GroupPoint> fresh;
    if (layer == 0) {
      fresh = frontier;
    } else if (alphabet.group.kind == GroupKind::Torus) {
      if (abelian_word_count(alphabet.k, layer, false) > static_cast<double>(cap)) {
        result.exhausted_cap = true;
        break;
      }
      for_each_composition(alphabet.k, layer, [&](const std::vector<int>& coeffs) {
        fresh.push_back(torus_value(alphabet, coeffs));
      });
    } else {
      if (frontier.size() * letters.size() > cap) {
        result.exhausted_cap = true;
        break;
      }
      SpatialIndex layer_dedup(alphabet.group,
                               dedup_edge(alphabet.group, frontier.size() * letters.size()));
      for (const auto& w : frontier) {
        for (const auto& letter : letters) {
          const GroupPoint value = multiply(w, letter);
          if (!layer_dedup.within(value, dedup_tol)) {
            layer_dedup.insert(value);
            fresh.push_back(value);
          }
        }
      }
      frontier = fresh;
    }

    for (const auto& p : fresh) all.insert(p);
    result.points = all.size();
    if (result.points > cap) {
      result.exhausted_cap = true;
      break;
    }

    std::vector<std::uint32_t> still;
    for (std::uint32_t idx : uncovered) {
      if (!all.within(probe_points[idx], 2.0 * r)) still.push_back(idx);
    }
    uncovered.swap(still);
    if (uncovered.empty()) {
      result.is_net = true;
      result.layer_used = layer;
      break;
    }
  }

  double worst = 0.0;
  for (const auto& p : probe_points) worst = std::max(worst, all.min_distance(p));
  result.radius_estimate = worst;
  return result;
}

NetPlan plan_net(int n, double r, double delta, double cg) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::invalid_argument("r must lie in (0, 1)");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(cg >= 1.0)) throw std::invalid_argument("cg must be >= 1");

  const auto phi = [&](double eps) { return eps * std::sqrt(5.0 * std::log(cg / std::pow(eps, n))); };
  const double eps_star = std::pow(cg, 1.0 / n) * std::exp(-0.5);  // argmax of phi
  if (r > phi(eps_star)) {
    throw std::invalid_argument("no epsilon solves the net radius equation: r too large");
  }
  double lo = 1e-300, hi = eps_star;
  for (int iter = 0; iter < 300; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < r ? lo : hi) = mid;
  }
  NetPlan plan;
  plan.n = n;
  plan.r = r;
  plan.delta = delta;
  plan.cg = cg;
  plan.epsilon = 0.5 * (lo + hi);
  plan.k_min = static_cast<int>(
      std::ceil(cg + 16.0 * std::log(2.0) * (n * std::log(1.0 / plan.epsilon) + std::log(1.0 / delta))));
  plan.ell_min =
      static_cast<int>(std::ceil(cg + 0.5 * n * std::log2(1.0 / (plan.epsilon * r))));
  return plan;
}

LowerBoundReport torus_lower_bounds(int n, double r, int k, int ell) {
  if (!(r > 0.0) || !(r < 0.5)) throw std::invalid_argument("r must lie in (0, 1/2)");
  if (k < 1 || ell < 0) throw std::invalid_argument("need k >= 1 and ell >= 0");
  LowerBoundReport report;
  report.k = k;
  report.ell = ell;
  report.m = 2 * k + ell;
  report.binom_bound = binomial(report.m - 1, ell);
  report.exact_count = abelian_word_count(k, ell, true);
  report.volume_product = report.binom_bound * std::pow(2.0 * r, n) * unit_ball_volume(n);
  report.volume_condition = report.volume_product >= 1.0;
  report.k_lower = n * std::log(1.0 / r) / (2.0 * std::log(static_cast<double>(report.m)));
  const double log_r_inv = std::log(1.0 / r);
  report.ell_lower =
      (n * log_r_inv - std::log(log_r_inv)) / std::log(1.0 + std::log(1.5)) - 1.0;
  report.balanced_regime = (ell <= k) && (k <= 2 * ell);
  return report;
}

}  // namespace groupwalk
