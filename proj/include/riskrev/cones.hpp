#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "riskrev/polytope.hpp"

namespace riskrev {

/// Shape of a closed convex cone in the plane. `Line` is the tangent cone at
/// a relative-interior point of a segment.
enum class ConeKind { Point, Ray, Line, Wedge, HalfPlane, Full };

std::string_view to_string(ConeKind kind);

struct Cone2D {
  ConeKind kind;
  double apex_angle;  // arc measure of the directions in the cone, in [0, 2pi]
  std::vector<Eigen::Vector2d> generators;  // unit vectors; conic hull = cone

  static Cone2D point();
  static Cone2D ray(const Eigen::Vector2d& dir);
  static Cone2D line(const Eigen::Vector2d& dir);
  /// Wedge between two non-parallel edge directions, angle in (0, pi).
  static Cone2D wedge(const Eigen::Vector2d& a, const Eigen::Vector2d& b);
  /// {z : <z, inward> >= 0}.
  static Cone2D half_plane(const Eigen::Vector2d& inward);
  static Cone2D full();
};

/// argmax_i <v_i, u>, smallest index on ties.
int exposed_face_vertex(const ConvexPolytope& poly, const Point& u);

/// Arc length of the normal cone at vertex i of a planar polytope. Segment
/// endpoints get pi; over all vertices the angles sum to 2 pi.
double normal_cone_angle_2d(const ConvexPolytope& poly, int i);

/// Closure of the feasible directions at theta for a planar polytope.
Cone2D tangent_cone_2d(const ConvexPolytope& poly, const Point& theta);

/// Projection of z onto the conic hull of `generators` by nonnegative least
/// squares. The KKT residual (in units of unit-normalized generators) must be
/// at most tol * (1 + |z|).
Point project_cone_nonneg(const std::vector<Point>& generators, const Point& z, double tol);

/// Same projection with the generators stored as columns.
Point project_cone_nonneg(const Eigen::MatrixXd& generators, const Point& z, double tol);

}  // namespace riskrev
