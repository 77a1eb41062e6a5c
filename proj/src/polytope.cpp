#include "riskrev/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riskrev/errors.hpp"
#include "riskrev/projection.hpp"

namespace riskrev {
namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; drops collinear points, returns CCW order.
std::vector<Point> convex_hull_2d(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  if (pts.size() < 3) return pts;

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

ConvexPolytope::ConvexPolytope(std::vector<Point> vertices) {
  if (vertices.empty()) throw InvalidArgument("ConvexPolytope: no vertices");
  dim_ = static_cast<int>(vertices.front().size());
  if (dim_ < 1) throw InvalidArgument("ConvexPolytope: dimension must be positive");
  for (const auto& v : vertices) {
    if (v.size() != dim_) {
      throw InvalidArgument("ConvexPolytope: vertices have mixed dimensions");
    }
    if (!v.allFinite()) throw InvalidArgument("ConvexPolytope: non-finite coordinate");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vertices[i] == vertices[j]) {
        throw InvalidArgument("ConvexPolytope: duplicate vertex at positions " +
                              std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }

  if (dim_ == 2) {
    auto hull = convex_hull_2d(std::move(vertices));
    // Rotate so the lowest (then leftmost) vertex comes first.
    auto first = std::min_element(hull.begin(), hull.end(), [](const Point& a, const Point& b) {
      return a[1] < b[1] || (a[1] == b[1] && a[0] < b[0]);
    });
    std::rotate(hull.begin(), first, hull.end());
    vertices_ = std::move(hull);
  } else {
    vertices_ = std::move(vertices);
  }
}

std::optional<int> ConvexPolytope::find_vertex(const Point& p, double tol) const {
  for (int i = 0; i < size(); ++i) {
    if ((vertices_[static_cast<std::size_t>(i)] - p).norm() <= tol) return i;
  }
  return std::nullopt;
}

double ConvexPolytope::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      best = std::max(best, (vertices_[i] - vertices_[j]).norm());
    }
  }
  return best;
}

bool ConvexPolytope::contains(const Point& p, double tol) const {
  if (p.size() != dim_) throw InvalidArgument("contains: dimension mismatch");
  if (is_polygon()) {
    // Signed distance to each CCW edge line.
    const int k = size();
    for (int i = 0; i < k; ++i) {
      const Point& a = vertices_[static_cast<std::size_t>(i)];
      const Point& b = vertices_[static_cast<std::size_t>((i + 1) % k)];
      const double len = (b - a).norm();
      if (cross(a, b, p) / len < -tol) return false;
    }
    return true;
  }
  return (project_polytope(*this, p) - p).norm() <= tol;
}

ExampleGeometry::ExampleGeometry(double c, std::optional<double> x) : c_(c), x_(x) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidArgument("ExampleGeometry: c must be finite and > 0");
  }
  if (x) {
    if (!(*x >= 0.0) || *x > (1.0 / c) * (1.0 + 1e-12)) {
      throw InvalidArgument("ExampleGeometry: x must lie in [0, 1/c]");
    }
  }
}

Point ExampleGeometry::v1() const { return make_point({0.0, 0.0}); }
Point ExampleGeometry::v2() const { return make_point({1.0 / c_, 1.0}); }
Point ExampleGeometry::v3() const { return make_point({0.0, 1.0}); }

Point ExampleGeometry::vx() const {
  if (!x_) throw InvalidArgument("ExampleGeometry: x is not set");
  return make_point({*x_, 1.0});
}

ConvexPolytope ExampleGeometry::segment() const { return ConvexPolytope({v1(), v2()}); }

ConvexPolytope ExampleGeometry::triangle() const {
  return ConvexPolytope({v1(), v2(), v3()});
}

ConvexPolytope ExampleGeometry::theta_x() const {
  if (!x_) throw InvalidArgument("ExampleGeometry: x is not set");
  if (std::abs(*x_ - 1.0 / c_) <= 1e-12 * (1.0 / c_)) return segment();
  return ConvexPolytope({v1(), v2(), vx()});
}

}  // namespace riskrev
