#include "groupwalk/group.hpp"

#include <cmath>
#include <stdexcept>

namespace groupwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap01(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y = 0.0;  // e.g. x = -1e-18 rounds to 1.0
  return y;
}

void require_same_group(const GroupPoint& a, const GroupPoint& b) {
  if (a.kind != b.kind || a.v.size() != b.v.size()) {
    throw std::invalid_argument("group points belong to different groups");
  }
}

GroupPoint normalized_quat(Eigen::Vector4d q) {
  const double norm = q.norm();
  GroupPoint p{GroupKind::SU2, Eigen::VectorXd(4)};
  p.v = q / norm;
  return p;
}

}  // namespace

GroupDescriptor GroupDescriptor::torus(int n) {
  if (n < 1) throw std::invalid_argument("torus dimension must be >= 1");
  return GroupDescriptor{GroupKind::Torus, n, 1.0};
}

GroupDescriptor GroupDescriptor::su2() {
  return GroupDescriptor{GroupKind::SU2, 3, 2.0 * kPi * kPi};
}

GroupPoint identity(const GroupDescriptor& group) {
  if (group.kind == GroupKind::Torus) {
    return GroupPoint{GroupKind::Torus, Eigen::VectorXd::Zero(group.dim)};
  }
  Eigen::VectorXd q(4);
  q << 1.0, 0.0, 0.0, 0.0;
  return GroupPoint{GroupKind::SU2, q};
}

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) {
  require_same_group(a, b);
  if (a.kind == GroupKind::Torus) {
    GroupPoint p{GroupKind::Torus, Eigen::VectorXd(a.v.size())};
    for (Eigen::Index i = 0; i < a.v.size(); ++i) p.v[i] = wrap01(a.v[i] + b.v[i]);
    return p;
  }
  const double w1 = a.v[0], x1 = a.v[1], y1 = a.v[2], z1 = a.v[3];
  const double w2 = b.v[0], x2 = b.v[1], y2 = b.v[2], z2 = b.v[3];
  Eigen::Vector4d q;
  q << w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,  //
      w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,   //
      w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,   //
      w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2;
  // renormalize after every product so the unit-norm invariant cannot drift
  return normalized_quat(q);
}

GroupPoint inverse(const GroupPoint& g) {
  if (g.kind == GroupKind::Torus) {
    GroupPoint p{GroupKind::Torus, Eigen::VectorXd(g.v.size())};
    for (Eigen::Index i = 0; i < g.v.size(); ++i) p.v[i] = wrap01(-g.v[i]);
    return p;
  }
  GroupPoint p = g;
  p.v[1] = -p.v[1];
  p.v[2] = -p.v[2];
  p.v[3] = -p.v[3];
  return p;
}

double distance(const GroupPoint& x, const GroupPoint& y) {
  require_same_group(x, y);
  if (x.kind == GroupKind::Torus) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.v.size(); ++i) {
      double d = std::fabs(x.v[i] - y.v[i]);
      d = std::min(d, 1.0 - d);
      s += d * d;
    }
    return std::sqrt(s);
  }
  // equal to acos(<x,y>) but stable where acos loses half the digits
  if (x.v.dot(y.v) >= 0.0) {
    return 2.0 * std::asin(std::min(1.0, 0.5 * (x.v - y.v).norm()));
  }
  return kPi - 2.0 * std::asin(std::min(1.0, 0.5 * (x.v + y.v).norm()));
}

GroupPoint haar_sample(Rng& rng, const GroupDescriptor& group) {
  if (group.kind == GroupKind::Torus) {
    GroupPoint p{GroupKind::Torus, Eigen::VectorXd(group.dim)};
    for (int i = 0; i < group.dim; ++i) p.v[i] = rng.uniform01();
    return p;
  }
  Eigen::Vector4d q;
  do {
    for (int i = 0; i < 4; ++i) q[i] = rng.normal();
  } while (q.norm() < 1e-12);  // degenerate draw: redraw
  return normalized_quat(q);
}

double diameter(const GroupDescriptor& group) {
  if (group.kind == GroupKind::Torus) return 0.5 * std::sqrt(static_cast<double>(group.dim));
  return kPi;
}

GroupPoint point_at_distance(const GroupDescriptor& group, double r) {
  if (r < 0.0 || r > diameter(group) + 1e-12) {
    throw std::invalid_argument("distance outside [0, diameter]");
  }
  if (group.kind == GroupKind::Torus) {
    GroupPoint p{GroupKind::Torus, Eigen::VectorXd(group.dim)};
    const double per_axis = r / std::sqrt(static_cast<double>(group.dim));
    for (int i = 0; i < group.dim; ++i) p.v[i] = wrap01(per_axis);
    return p;
  }
  Eigen::VectorXd q(4);
  q << std::cos(r), std::sin(r), 0.0, 0.0;
  return GroupPoint{GroupKind::SU2, q};
}

}  // namespace groupwalk
