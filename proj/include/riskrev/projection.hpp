#pragma once

// Euclidean projections onto segments, planar polygons and general polytopes,
// plus the closed-form region-table projector for the running triangle.

#include <string_view>

#include <Eigen/Core>

#include "riskrev/polytope.hpp"

namespace riskrev {

/// Which face of the triangle conv{v1, v2, v3} receives a projected point.
enum class RegionLabel { Interior, A1, A2, A3, A12, A13, A23 };

std::string_view to_string(RegionLabel label);

/// Projection onto [v_start, v_end] via the clipped foot parameter.
Point project_segment(const Point& v_start, const Point& v_end, const Point& y);

/// Exact projection onto a planar polytope (point, segment or polygon).
Point project_polygon_2d(const ConvexPolytope& poly, const Point& y);

struct RegionProjection {
  Point point;
  RegionLabel region;
};

/// Region-table projection onto the triangle of `g` (its `x` must be unset).
RegionProjection project_triangle_example(const ExampleGeometry& g, const Point& y);

/// Region of the triangle table containing y. Boundaries go to the interior
/// first, then edges (A12, A13, A23), then vertices (A1, A2, A3).
RegionLabel classify_region(double c, double y1, double y2);

/// max_i <y - q, v_i - q>; nonpositive exactly when q = argmin_P |y - q|.
double variational_residual(const ConvexPolytope& poly, const Point& y, const Point& q);

inline constexpr double kProjectionTol = 1e-10;

/// Projection onto a polytope in any dimension by Wolfe's minimum-norm-point
/// method applied to {v_i - y}. The result is certified by
/// variational_residual <= tol * (1 + |y|); NumericalFailure otherwise.
Point project_polytope(const ConvexPolytope& poly, const Point& y,
                       double tol = kProjectionTol, int max_iterations = 0);

/// Reusable projector for hot loops. Planar polytopes take an allocation-free
/// closed-form path; everything else goes through project_polytope.
class Projector {
 public:
  explicit Projector(const ConvexPolytope& poly);

  int dim() const noexcept { return poly_.dim(); }
  const ConvexPolytope& polytope() const noexcept { return poly_; }

  /// Planar fast path; requires dim() == 2.
  Eigen::Vector2d project2(const Eigen::Vector2d& y) const noexcept;

  Point project(const Point& y) const;

 private:
  ConvexPolytope poly_;
  Eigen::Matrix2Xd planar_;  // vertices as columns when dim() == 2
  Eigen::Matrix2Xd edge_;    // v_{i+1} - v_i
  Eigen::VectorXd edge_norm2_;
};

}  // namespace riskrev
