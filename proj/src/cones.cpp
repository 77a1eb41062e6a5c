#include "riskrev/cones.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "riskrev/errors.hpp"
#include "riskrev/nnls.hpp"

namespace riskrev {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector2d unit(const Eigen::Vector2d& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw InvalidArgument("Cone2D: zero direction");
  return v / n;
}

Eigen::Vector2d as2(const Point& p) { return {p[0], p[1]}; }

// Interior angle at vertex i of a polygon stored counterclockwise.
double interior_angle(const ConvexPolytope& poly, int i) {
  const int k = poly.size();
  const Eigen::Vector2d v = as2(poly.vertex(i));
  const Eigen::Vector2d prev = as2(poly.vertex((i + k - 1) % k)) - v;
  const Eigen::Vector2d next = as2(poly.vertex((i + 1) % k)) - v;
  const double cross = next[0] * prev[1] - next[1] * prev[0];
  return std::atan2(std::abs(cross), next.dot(prev));
}

void require_planar(const ConvexPolytope& poly, const char* what) {
  if (poly.dim() != 2) throw InvalidArgument(std::string(what) + ": planar polytope required");
}

}  // namespace

std::string_view to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Point: return "point";
    case ConeKind::Ray: return "ray";
    case ConeKind::Line: return "line";
    case ConeKind::Wedge: return "wedge";
    case ConeKind::HalfPlane: return "halfplane";
    case ConeKind::Full: return "full";
  }
  return "?";
}

Cone2D Cone2D::point() { return {ConeKind::Point, 0.0, {}}; }

Cone2D Cone2D::ray(const Eigen::Vector2d& dir) { return {ConeKind::Ray, 0.0, {unit(dir)}}; }

Cone2D Cone2D::line(const Eigen::Vector2d& dir) {
  const Eigen::Vector2d u = unit(dir);
  return {ConeKind::Line, 0.0, {u, -u}};
}

Cone2D Cone2D::wedge(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ua = unit(a), ub = unit(b);
  const double angle = std::atan2(std::abs(ua[0] * ub[1] - ua[1] * ub[0]), ua.dot(ub));
  if (!(angle > 0.0 && angle < kPi)) {
    throw InvalidArgument("Cone2D::wedge: directions must not be parallel");
  }
  return {ConeKind::Wedge, angle, {ua, ub}};
}

Cone2D Cone2D::half_plane(const Eigen::Vector2d& inward) {
  const Eigen::Vector2d n = unit(inward);
  const Eigen::Vector2d t(-n[1], n[0]);
  return {ConeKind::HalfPlane, kPi, {t, -t, n}};
}

Cone2D Cone2D::full() {
  return {ConeKind::Full, 2.0 * kPi,
          {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(-1, 0),
           Eigen::Vector2d(0, -1)}};
}

int exposed_face_vertex(const ConvexPolytope& poly, const Point& u) {
  if (u.size() != poly.dim()) throw InvalidArgument("exposed_face_vertex: dimension mismatch");
  if (!u.allFinite() || !(u.norm() > 0.0)) {
    throw InvalidArgument("exposed_face_vertex: direction must be finite and nonzero");
  }
  int best = 0;
  double best_val = poly.vertex(0).dot(u);
  for (int i = 1; i < poly.size(); ++i) {
    const double val = poly.vertex(i).dot(u);
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  return best;
}

double normal_cone_angle_2d(const ConvexPolytope& poly, int i) {
  require_planar(poly, "normal_cone_angle_2d");
  if (i < 0 || i >= poly.size()) {
    throw InvalidArgument("normal_cone_angle_2d: vertex index out of range");
  }
  if (poly.size() == 1) return 2.0 * kPi;
  if (poly.size() == 2) return kPi;
  return kPi - interior_angle(poly, i);
}

Cone2D tangent_cone_2d(const ConvexPolytope& poly, const Point& theta) {
  require_planar(poly, "tangent_cone_2d");
  if (theta.size() != 2) throw InvalidArgument("tangent_cone_2d: planar point required");
  if (!poly.contains(theta)) throw InvalidArgument("tangent_cone_2d: theta is not in the polytope");

  const int k = poly.size();
  if (k == 1) return Cone2D::point();
  const auto at = poly.find_vertex(theta, kMembershipTol);
  if (k == 2) {
    const Eigen::Vector2d e = as2(poly.vertex(1)) - as2(poly.vertex(0));
    if (!at) return Cone2D::line(e);
    return Cone2D::ray(*at == 0 ? e : Eigen::Vector2d(-e));
  }
  if (at) {
    const int i = *at;
    const Eigen::Vector2d v = as2(poly.vertex(i));
    return Cone2D::wedge(as2(poly.vertex((i + 1) % k)) - v, as2(poly.vertex((i + k - 1) % k)) - v);
  }
  const Eigen::Vector2d t = as2(theta);
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d a = as2(poly.vertex(i));
    const Eigen::Vector2d e = as2(poly.vertex((i + 1) % k)) - a;
    const Eigen::Vector2d rel = t - a;
    const double dist = (e[0] * rel[1] - e[1] * rel[0]) / e.norm();
    if (std::abs(dist) <= kMembershipTol) return Cone2D::half_plane(Eigen::Vector2d(-e[1], e[0]));
  }
  return Cone2D::full();
}

Point project_cone_nonneg(const Eigen::MatrixXd& generators, const Point& z, double tol) {
  if (generators.cols() == 0) throw InvalidArgument("project_cone_nonneg: no generators");
  if (generators.rows() != z.size()) throw InvalidArgument("project_cone_nonneg: dimension mismatch");
  if (!(tol > 0.0)) throw InvalidArgument("project_cone_nonneg: tol must be positive");
  Eigen::MatrixXd g = generators;
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const double n = g.col(j).norm();
    if (!(n > 0.0)) throw InvalidArgument("project_cone_nonneg: zero generator");
    g.col(j) /= n;
  }
  const NnlsResult r = nnls(g, z, tol * (1.0 + z.norm()));
  return g * r.x;
}

Point project_cone_nonneg(const std::vector<Point>& generators, const Point& z, double tol) {
  if (generators.empty()) throw InvalidArgument("project_cone_nonneg: no generators");
  Eigen::MatrixXd g(z.size(), static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (generators[j].size() != z.size()) {
      throw InvalidArgument("project_cone_nonneg: dimension mismatch");
    }
    g.col(static_cast<Eigen::Index>(j)) = generators[j];
  }
  return project_cone_nonneg(g, z, tol);
}

}  // namespace riskrev
