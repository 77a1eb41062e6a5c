#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace riskrev {

using Point = Eigen::VectorXd;

/// Tolerance used for "theta lies in the polytope" checks.
inline constexpr double kMembershipTol = 1e-9;

/// conv{v_1, ..., v_K} in R^d, stored by its vertices.
///
/// Planar inputs are convexified on construction: only extreme points are
/// kept, ordered counterclockwise starting from the lowest (then leftmost)
/// vertex. Inputs of any other dimension are stored as given and are assumed
/// to be extreme points already. Instances are immutable.
class ConvexPolytope {
 public:
  explicit ConvexPolytope(std::vector<Point> vertices);

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(vertices_.size()); }
  const Point& vertex(int i) const { return vertices_.at(static_cast<std::size_t>(i)); }
  const std::vector<Point>& vertices() const noexcept { return vertices_; }

  /// True for a planar polytope with nonempty interior.
  bool is_polygon() const noexcept { return dim_ == 2 && size() >= 3; }

  /// Index of the stored vertex within `tol` of `p`, if any.
  std::optional<int> find_vertex(const Point& p, double tol = 1e-12) const;

  /// Largest pairwise vertex distance.
  double diameter() const;

  /// Membership up to `tol` in Euclidean distance.
  bool contains(const Point& p, double tol = kMembershipTol) const;

 private:
  std::vector<Point> vertices_;
  int dim_ = 0;
};

/// The running planar family: v1 = (0,0), v2 = (1/c, 1), v3 = (0,1) and,
/// when `x` is set, vx = (x, 1) with 0 <= x <= 1/c.
class ExampleGeometry {
 public:
  explicit ExampleGeometry(double c, std::optional<double> x = std::nullopt);

  double c() const noexcept { return c_; }
  const std::optional<double>& x() const noexcept { return x_; }

  /// alpha_c = 1 + 1/c^2 = |v2|^2.
  double alpha() const noexcept { return 1.0 + 1.0 / (c_ * c_); }

  Point v1() const;
  Point v2() const;
  Point v3() const;
  Point vx() const;  // requires x

  /// conv{v1, v2}.
  ConvexPolytope segment() const;
  /// conv{v1, v2, v3}.
  ConvexPolytope triangle() const;
  /// conv{v1, v2, vx}; collapses to the segment when x = 1/c.
  ConvexPolytope theta_x() const;

 private:
  double c_;
  std::optional<double> x_;
};

Point make_point(std::initializer_list<double> coords);

}  // namespace riskrev
