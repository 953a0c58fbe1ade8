#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "groupwalk/group.hpp"
#include "groupwalk/word_measure.hpp"

namespace groupwalk {

// Deduplicated word values. `exact_count` is the closed-form distinct-value
// count for generic generators: integer coefficient vectors on the torus,
// reduced free-group words on SU(2).
struct WordSet {
  GroupDescriptor group;
  int ell = 0;
  bool exact_length = false;  // words of length == ell instead of <= ell
  std::vector<GroupPoint> points;
  double dedup_tol = 1e-9;
  double exact_count = 0.0;
};

inline constexpr std::size_t kDefaultWordCap = 1'000'000;

WordSet enumerate_words(const Alphabet& alphabet, int ell, double dedup_tol = 1e-9,
                        bool exact_length = false, std::size_t cap = kDefaultWordCap);

// Closed-form generic distinct-value counts.
double abelian_word_count(int k, int ell, bool exact_length);
double free_word_count(int k, int ell, bool exact_length);
double binomial(long long n, long long k);

// Bucket-grid nearest-neighbor index: periodic grid hash on the torus,
// chordal 4d grid over the quaternion coordinates on SU(2).
class SpatialIndex {
 public:
  SpatialIndex(const GroupDescriptor& group, double cell_edge);

  void insert(const GroupPoint& p);
  std::size_t size() const { return points_.size(); }

  // Exact min geodesic distance from probe to the inserted set (inf if empty).
  double min_distance(const GroupPoint& probe) const;
  bool within(const GroupPoint& probe, double dist) const;

 private:
  std::uint64_t cell_key(const Eigen::VectorXd& coords) const;
  GroupDescriptor group_;
  int axes_;
  long long cells_per_axis_;
  double edge_;
  bool wrap_;
  std::vector<GroupPoint> points_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

// Deterministic nested probe stream: seed-rotated Halton points on the torus,
// a Haar stream on SU(2). Prefixes of a longer stream contain shorter ones,
// so probe-based estimates are monotone in the probe count.
class ProbeSequence {
 public:
  ProbeSequence(const GroupDescriptor& group, std::uint64_t seed);
  GroupPoint next();

 private:
  GroupDescriptor group_;
  Eigen::VectorXd rotation_;
  long long index_ = 0;
  Rng rng_;
};

// Probe-based covering radius: max over probes of the min distance to the
// word set. Underestimates the true radius by at most the probe mesh.
double covering_radius(const WordSet& words, int probes, std::uint64_t seed);

// True iff every probe lies within 2r of the word set. A false result is a
// certificate (the offending probe is a group element); true is probe-limited.
bool net_check(const WordSet& words, double r, int probes, std::uint64_t seed);

int default_net_probes(const GroupDescriptor& group, double r);

// Length-layered net check: grows the word set one length layer at a time
// and stops as soon as the probes are covered. Because word sets are nested
// in the length, success at any layer certifies the full-length net property
// even when the full enumeration would blow the cap.
struct LayeredNetResult {
  bool is_net = false;
  int layer_used = 0;        // first layer at which the probes were covered
  std::size_t points = 0;    // points accumulated when the check stopped
  double radius_estimate = 0.0;
  bool exhausted_cap = false;  // cap hit before a decision
};

LayeredNetResult net_check_layered(const Alphabet& alphabet, int ell_max, double r, int probes,
                                   std::uint64_t seed, std::size_t cap = kDefaultWordCap);

// Parameter plan for the 2r-net experiment: epsilon solves
// eps sqrt(5 ln(cg / eps^n)) = r on the increasing branch, then
//   k_min   = cg + (16 ln 2)(n ln(1/eps) + ln(1/delta))
//   ell_min = cg + (n/2) log2(1/(eps r)).
struct NetPlan {
  int n = 0;
  double r = 0.0;
  double delta = 0.0;
  double cg = 1.0;
  double epsilon = 0.0;
  int k_min = 0;
  int ell_min = 0;
};

NetPlan plan_net(int n, double r, double delta, double cg);

// Abelian counting bounds for words on the n-torus.
struct LowerBoundReport {
  int k = 0;
  int ell = 0;
  int m = 0;  // 2k + ell
  double binom_bound = 0.0;      // C(m-1, ell)
  double exact_count = 0.0;      // generic distinct values of exact-length words
  double volume_product = 0.0;   // C(m-1, ell) (2r)^n vol(B_n)
  bool volume_condition = false;  // volume_product >= 1, necessary for a 2r-net
  double k_lower = 0.0;           // n ln(1/r) / (2 ln m)
  double ell_lower = 0.0;
  bool balanced_regime = false;  // ell <= k <= 2 ell, assumed by ell_lower
};

LowerBoundReport torus_lower_bounds(int n, double r, int k, int ell);

}  // namespace groupwalk
