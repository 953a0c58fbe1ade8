#pragma once

#include <Eigen/Dense>

#include "groupwalk/rng.hpp"

namespace groupwalk {

enum class GroupKind { Torus, SU2 };

// The two concrete groups: the flat unit torus T^n = R^n/Z^n and SU(2) as the
// unit quaternions with the round metric on S^3.
struct GroupDescriptor {
  GroupKind kind;
  int dim;     // manifold dimension: n for T^n, 3 for SU(2)
  double vol;  // Riemannian volume: 1 for T^n, 2*pi^2 for SU(2)

  static GroupDescriptor torus(int n);
  static GroupDescriptor su2();
};

// A group element. Torus points are coordinate vectors canonicalized to
// [0,1)^n; SU(2) points are quaternions (w,x,y,z) kept at unit norm.
struct GroupPoint {
  GroupKind kind;
  Eigen::VectorXd v;
};

GroupPoint identity(const GroupDescriptor& group);
GroupPoint multiply(const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const GroupPoint& g);

// Bi-invariant metric: wrapped Euclidean norm on the torus, geodesic angle
// acos(<x,y>_4) in [0,pi] on SU(2).
double distance(const GroupPoint& x, const GroupPoint& y);

// Haar sampling: independent uniforms per coordinate (torus) or a normalized
// 4-vector of standard normals (SU(2)).
GroupPoint haar_sample(Rng& rng, const GroupDescriptor& group);

double diameter(const GroupDescriptor& group);

// A point at prescribed distance r from the identity (torus: along the main
// diagonal; SU(2): rotation by angle r about a fixed axis).
GroupPoint point_at_distance(const GroupDescriptor& group, double r);

}  // namespace groupwalk
