#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "groupwalk/covering.hpp"
#include "groupwalk/spectra.hpp"
#include "groupwalk/word_measure.hpp"

// Brute-force reference computations. These deliberately avoid the spectral
// code paths they are used to validate: words are enumerated as group
// elements, heat values come from image sums, covering radii from sorting.
namespace groupwalk::oracles {

// Average of cos(2 pi m . w) over all (2k)^ell words of length exactly ell.
inline double exhaustive_word_average(const Alphabet& alphabet, const Eigen::VectorXi& freq,
                                      int ell) {
  std::vector<Eigen::VectorXd> letters;
  for (const auto& g : alphabet.gens) {
    letters.push_back(g.v);
    letters.push_back(-g.v);
  }
  double sum = 0.0;
  long long count = 0;
  Eigen::VectorXd partial = Eigen::VectorXd::Zero(alphabet.group.dim);
  const std::function<void(int)> rec = [&](int depth) {
    if (depth == ell) {
      double phase = 0.0;
      for (Eigen::Index i = 0; i < freq.size(); ++i) phase += freq[i] * partial[i];
      sum += std::cos(2.0 * 3.14159265358979323846 * phase);
      ++count;
      return;
    }
    for (const auto& step : letters) {
      partial += step;
      rec(depth + 1);
      partial -= step;
    }
  };
  rec(0);
  return sum / static_cast<double>(count);
}

// Average of pi_level(w) over all (2k)^ell words of length exactly ell.
inline Eigen::MatrixXcd exhaustive_word_average(const Alphabet& alphabet, int level, int ell) {
  std::vector<GroupPoint> letters;
  for (const auto& g : alphabet.gens) {
    letters.push_back(g);
    letters.push_back(inverse(g));
  }
  const int d = level + 1;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  long long count = 0;
  const std::function<void(int, const GroupPoint&)> rec = [&](int depth, const GroupPoint& w) {
    if (depth == ell) {
      sum += irrep_matrix(level, w);
      ++count;
      return;
    }
    for (const auto& letter : letters) rec(depth + 1, multiply(w, letter));
  };
  rec(0, identity(alphabet.group));
  return sum / static_cast<double>(count);
}

// Wrapped Gaussian on the unit circle: sum_j (4 pi t)^{-1/2} e^{-(x+j)^2/(4t)}.
inline double wrapped_gaussian(double x, double t) {
  double sum = 0.0;
  const double norm = 1.0 / std::sqrt(4.0 * 3.14159265358979323846 * t);
  for (int j = -64; j <= 64; ++j) {
    const double u = x + j;
    sum += norm * std::exp(-u * u / (4.0 * t));
  }
  return sum;
}

// Exact covering radius of a finite subset of the circle: half the largest
// circular gap between sorted points.
inline double sorted_gap_radius(const std::vector<GroupPoint>& points) {
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& p : points) xs.push_back(p.v[0]);
  std::sort(xs.begin(), xs.end());
  double largest = 1.0 - xs.back() + xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) largest = std::max(largest, xs[i] - xs[i - 1]);
  return 0.5 * largest;
}

// Haar integral of a class function on SU(2) via the Weyl measure
// (2/pi) sin^2(theta) d theta, Simpson rule, times vol(G).
inline double class_function_integral(const std::function<double(double)>& f, int intervals = 4096) {
  const double pi = 3.14159265358979323846;
  const double h = pi / intervals;
  double acc = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double theta = i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
    acc += w * f(theta) * std::sin(theta) * std::sin(theta);
  }
  acc *= h / 3.0;
  return acc * (2.0 / pi) * 2.0 * pi * pi;  // times vol(SU2)
}

}  // namespace groupwalk::oracles
