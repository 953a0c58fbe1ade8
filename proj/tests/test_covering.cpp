#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "groupwalk/covering.hpp"
#include "groupwalk/errors.hpp"
#include "groupwalk/oracles.hpp"

using namespace groupwalk;

namespace {

// test-only reference: grow word values by direct products with sort dedup
std::vector<GroupPoint> bfs_reference(const Alphabet& alphabet, int ell, double tol) {
  std::vector<GroupPoint> letters;
  for (const auto& g : alphabet.gens) {
    letters.push_back(g);
    letters.push_back(inverse(g));
  }
  std::vector<GroupPoint> values{identity(alphabet.group)};
  std::vector<GroupPoint> frontier = values;
  const auto contains = [&](const std::vector<GroupPoint>& set, const GroupPoint& p) {
    return std::any_of(set.begin(), set.end(),
                       [&](const GroupPoint& q) { return distance(p, q) <= tol; });
  };
  for (int layer = 1; layer <= ell; ++layer) {
    std::vector<GroupPoint> next;
    for (const auto& w : frontier) {
      for (const auto& letter : letters) {
        const auto v = multiply(w, letter);
        if (!contains(next, v)) next.push_back(v);
      }
    }
    for (const auto& v : next) {
      if (!contains(values, v)) values.push_back(v);
    }
    frontier.swap(next);
  }
  return values;
}

bool same_point_set(const std::vector<GroupPoint>& a, const std::vector<GroupPoint>& b,
                    double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    if (std::none_of(b.begin(), b.end(),
                     [&](const GroupPoint& q) { return distance(p, q) <= tol; })) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("word enumeration: counts and small cases") {
  const auto t2 = GroupDescriptor::torus(2);
  const auto alphabet = build_alphabet(71, 2, t2);

  CHECK(enumerate_words(alphabet, 0).points.size() == 1);

  const auto words = enumerate_words(alphabet, 2);
  CHECK(words.points.size() == 13);  // coefficient vectors with |c1|+|c2| <= 2
  CHECK(words.exact_count == 13.0);

  const auto exact2 = enumerate_words(alphabet, 2, 1e-9, true);
  CHECK(exact2.points.size() == 9);
  CHECK(exact2.exact_count == 9.0);
  CHECK(binomial(5, 2) == 10.0);
  CHECK(exact2.points.size() <= 10);

  // rational generator collapses everything onto thirds
  const auto t1 = GroupDescriptor::torus(1);
  auto thirds = build_alphabet(72, 1, t1);
  thirds.gens[0].v[0] = 1.0 / 3.0;
  CHECK(enumerate_words(thirds, 5).points.size() == 3);

  // free-group counts on SU(2)
  const auto su2 = GroupDescriptor::su2();
  const auto su2_alpha = build_alphabet(73, 2, su2);
  const auto ball = enumerate_words(su2_alpha, 3);
  CHECK(free_word_count(2, 3, false) == 53.0);
  CHECK(ball.points.size() == 53);

  // pairwise separation after dedup
  for (std::size_t i = 0; i < ball.points.size(); ++i) {
    for (std::size_t j = i + 1; j < ball.points.size(); ++j) {
      CHECK(distance(ball.points[i], ball.points[j]) > ball.dedup_tol);
    }
  }

  CHECK_THROWS_AS(static_cast<void>(enumerate_words(build_alphabet(74, 8, t2), 12)),
                  ResourceCapError);
}

TEST_CASE("fast path agrees with the generic product reference") {
  const auto t2 = GroupDescriptor::torus(2);
  for (std::uint64_t seed : {81ull, 82ull}) {
    const auto alphabet = build_alphabet(seed, 2, t2);
    for (int ell : {1, 2, 3, 4}) {
      const auto fast = enumerate_words(alphabet, ell).points;
      const auto reference = bfs_reference(alphabet, ell, 1e-9);
      CHECK(same_point_set(fast, reference, 1e-9));
    }
  }
  const auto su2 = GroupDescriptor::su2();
  const auto alpha = build_alphabet(83, 2, su2);
  CHECK(same_point_set(enumerate_words(alpha, 3).points, bfs_reference(alpha, 3, 1e-9), 1e-9));
}

TEST_CASE("abelian vector counts: formula vs direct enumeration vs binomial") {
  for (int k = 1; k <= 4; ++k) {
    for (int ell = 0; ell <= 5; ++ell) {
      // direct lattice count of |c_1| + ... + |c_k| <= ell with parity
      long long direct = 0;
      std::vector<int> c(static_cast<std::size_t>(k), -ell);
      for (;;) {
        long long weight = 0;
        for (int v : c) weight += std::llabs(v);
        if (weight <= ell && (ell - weight) % 2 == 0) ++direct;
        int axis = 0;
        while (axis < k && ++c[static_cast<std::size_t>(axis)] > ell) {
          c[static_cast<std::size_t>(axis)] = -ell;
          ++axis;
        }
        if (axis == k) break;
      }
      CHECK(abelian_word_count(k, ell, true) == static_cast<double>(direct));
      CHECK(static_cast<double>(direct) <= binomial(2 * k + ell - 1, ell) + 0.5);
    }
  }
}

TEST_CASE("spatial index matches brute-force nearest distances") {
  Rng rng(31415);
  for (const auto& group :
       {GroupDescriptor::torus(1), GroupDescriptor::torus(2), GroupDescriptor::torus(3),
        GroupDescriptor::su2()}) {
    // coarse edges force wraparound rings, fine edges force deep ring walks
    for (double edge : {0.07, 0.23, 0.6}) {
      SpatialIndex index(group, edge);
      std::vector<GroupPoint> points;
      for (int i = 0; i < 60; ++i) {
        points.push_back(haar_sample(rng, group));
        index.insert(points.back());
      }
      for (int i = 0; i < 150; ++i) {
        const auto probe = haar_sample(rng, group);
        double brute = std::numeric_limits<double>::infinity();
        for (const auto& p : points) brute = std::min(brute, distance(probe, p));
        CHECK(index.min_distance(probe) == doctest::Approx(brute).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("covering radius: mesh-limited singleton and the sorted oracle") {
  const auto t1 = GroupDescriptor::torus(1);
  auto lone = build_alphabet(91, 1, t1);
  const auto only_identity = enumerate_words(lone, 0);
  const double radius = covering_radius(only_identity, 2048, 5);
  CHECK(radius >= 0.49);
  CHECK(radius <= 0.5);

  auto silver = build_alphabet(92, 1, t1);
  silver.gens[0].v[0] = std::sqrt(2.0) - 1.0;
  const auto words = enumerate_words(silver, 50);
  CHECK(words.points.size() == 101);
  const double exact = oracles::sorted_gap_radius(words.points);
  const double estimate = covering_radius(words, 4096, 6);
  CHECK(estimate <= exact + 1e-12);
  CHECK(std::fabs(estimate - exact) <= 4.0 / 4096.0);

  // nested probe streams make the estimate monotone in the probe count
  double prev = 0.0;
  for (int probes : {64, 256, 1024, 4096}) {
    const double cur = covering_radius(words, probes, 6);
    CHECK(cur >= prev);
    prev = cur;
  }

  const auto su2 = GroupDescriptor::su2();
  const auto e_only = enumerate_words(build_alphabet(93, 1, su2), 0);
  CHECK(covering_radius(e_only, 3000, 7) >= 3.14159265358979 - 0.25);
}

TEST_CASE("net checks: certificates and consistency with the radius") {
  const auto t1 = GroupDescriptor::torus(1);
  auto thirds = build_alphabet(101, 1, t1);
  thirds.gens[0].v[0] = 1.0 / 3.0;
  const auto words = enumerate_words(thirds, 4);

  CHECK(net_check(words, 0.26, 512, 8));  // r beyond half the diameter
  CHECK(!net_check(words, 0.05, 512, 8));  // covering radius is 1/6 > 0.1

  for (double r : {0.02, 0.06, 0.083, 0.084, 0.2}) {
    const bool net = net_check(words, r, 512, 8);
    const double radius = covering_radius(words, 512, 8);
    CHECK(net == (radius <= 2.0 * r));
  }
}

TEST_CASE("layered net growth stops at the first covering layer") {
  const auto t1 = GroupDescriptor::torus(1);
  const auto alphabet = build_alphabet(111, 30, t1);
  const auto result = net_check_layered(alphabet, 6, 0.05, 300, 9);
  CHECK(result.is_net);
  CHECK(result.layer_used <= 2);

  // tiny alphabets match the plain check on the fully enumerated set
  const auto small = build_alphabet(112, 2, t1);
  for (double r : {0.01, 0.05, 0.15}) {
    const auto layered = net_check_layered(small, 3, r, 400, 10);
    const bool plain = net_check(enumerate_words(small, 3), r, 400, 10);
    CHECK(layered.is_net == plain);
  }

  // stuck generators never cover
  auto thirds = build_alphabet(113, 1, t1);
  thirds.gens[0].v[0] = 1.0 / 3.0;
  CHECK(!net_check_layered(thirds, 6, 0.05, 400, 11).is_net);
}

TEST_CASE("net planner: residual, monotonicity, and scaling") {
  const auto plan = plan_net(2, 0.05, 0.1, 1.0);
  CHECK(plan.epsilon > 0.0);
  CHECK(plan.epsilon < plan.r);
  CHECK(plan.k_min >= 1);
  CHECK(plan.ell_min >= 1);
  const double phi =
      plan.epsilon * std::sqrt(5.0 * std::log(plan.cg / std::pow(plan.epsilon, plan.n)));
  CHECK(std::fabs(phi - plan.r) <= 1e-12);

  const auto halved = plan_net(2, 0.025, 0.1, 1.0);
  CHECK(halved.epsilon < plan.epsilon);
  CHECK(halved.k_min > plan.k_min);
  CHECK(halved.ell_min > plan.ell_min);

  // the length threshold carries the (n/2) log2(1/(eps r)) structure
  for (int n : {1, 2, 3}) {
    const auto p = plan_net(n, 0.05, 0.2, 1.0);
    const double expected = std::ceil(1.0 + 0.5 * n * std::log2(1.0 / (p.epsilon * p.r)));
    CHECK(p.ell_min == doctest::Approx(expected));
  }

  // on the circle the radius equation tops out near 0.959: no root above it
  CHECK_THROWS_AS(static_cast<void>(plan_net(1, 0.99, 0.1, 1.0)), std::invalid_argument);
}

TEST_CASE("torus lower bounds: plug-ins and the volume obstruction") {
  const auto report = torus_lower_bounds(2, 0.01, 19, 2);  // m = 40
  CHECK(report.m == 40);
  CHECK(report.k_lower == doctest::Approx(1.2484).epsilon(1e-3));

  const auto small = torus_lower_bounds(2, 0.01, 2, 2);
  CHECK(small.binom_bound == 10.0);
  CHECK(small.exact_count == 9.0);
  CHECK(small.exact_count <= small.binom_bound);
  CHECK(!small.volume_condition);  // 10 * (0.02)^2 * pi < 1
  CHECK(small.balanced_regime);

  // below the volume threshold no seed produces a net
  const auto t2 = GroupDescriptor::torus(2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto alphabet = build_alphabet(derive_seed(2020, seed), 2, t2);
    const auto words = enumerate_words(alphabet, 2);
    CHECK(!net_check(words, 0.01, 4000, seed));
  }

  CHECK_THROWS_AS(static_cast<void>(torus_lower_bounds(2, 0.7, 2, 2)), std::invalid_argument);
}
