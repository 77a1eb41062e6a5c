#include "riskrev/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskrev/errors.hpp"

namespace riskrev {
namespace {

Eigen::Vector2d clip_to_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& e,
                                double e_norm2, const Eigen::Vector2d& y) {
  const double t = std::clamp((y - a).dot(e) / e_norm2, 0.0, 1.0);
  return a + t * e;
}

// Minimizer of |sum_k mu_k p_{S_k}| subject to sum_k mu_k = 1, solved in
// coordinates relative to the first active point for conditioning.
// `rank` receives the dimension of the active affine hull.
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& pts, const std::vector<int>& active,
                                 Eigen::Index& rank) {
  const auto n = static_cast<Eigen::Index>(active.size());
  Eigen::VectorXd mu(n);
  rank = 0;
  if (n == 1) {
    mu[0] = 1.0;
    return mu;
  }
  const Eigen::VectorXd base = pts.col(active[0]);
  Eigen::MatrixXd diffs(pts.rows(), n - 1);
  for (Eigen::Index k = 1; k < n; ++k) diffs.col(k - 1) = pts.col(active[static_cast<std::size_t>(k)]) - base;
  const auto cod = diffs.completeOrthogonalDecomposition();
  rank = cod.rank();
  const Eigen::VectorXd nu = cod.solve(-base);
  mu[0] = 1.0 - nu.sum();
  mu.tail(n - 1) = nu;
  return mu;
}

}  // namespace

std::string_view to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::Interior: return "Interior";
    case RegionLabel::A1: return "A1";
    case RegionLabel::A2: return "A2";
    case RegionLabel::A3: return "A3";
    case RegionLabel::A12: return "A12";
    case RegionLabel::A13: return "A13";
    case RegionLabel::A23: return "A23";
  }
  return "?";
}

Point project_segment(const Point& v_start, const Point& v_end, const Point& y) {
  if (v_start.size() != v_end.size() || v_start.size() != y.size()) {
    throw InvalidArgument("project_segment: dimension mismatch");
  }
  const Point e = v_end - v_start;
  const double e_norm2 = e.squaredNorm();
  if (e_norm2 == 0.0) throw InvalidArgument("project_segment: coincident endpoints");
  const double t = std::clamp((y - v_start).dot(e) / e_norm2, 0.0, 1.0);
  return v_start + t * e;
}

Point project_polygon_2d(const ConvexPolytope& poly, const Point& y) {
  if (poly.dim() != 2 || y.size() != 2) {
    throw InvalidArgument("project_polygon_2d: planar polytope and point required");
  }
  const Eigen::Vector2d q = Projector(poly).project2(Eigen::Vector2d(y[0], y[1]));
  return Point(q);
}

RegionLabel classify_region(double c, double y1, double y2) {
  const double inv_c = 1.0 / c;
  const double s = (y1 + c * y2) / (1.0 + c * c);
  if (y1 >= 0.0 && y1 <= inv_c && y2 >= 0.0 && y2 <= 1.0 && y2 >= c * y1) {
    return RegionLabel::Interior;
  }
  if (y2 <= c * y1 && s >= 0.0 && s <= inv_c) return RegionLabel::A12;
  if (y1 <= 0.0 && y2 >= 0.0 && y2 <= 1.0) return RegionLabel::A13;
  if (y1 >= 0.0 && y1 <= inv_c && y2 >= 1.0) return RegionLabel::A23;
  if (y1 <= -c * y2 && y2 <= 0.0) return RegionLabel::A1;
  if (y1 >= inv_c && y2 >= 1.0 - inv_c * (y1 - inv_c)) return RegionLabel::A2;
  if (y1 <= 0.0 && y2 >= 1.0) return RegionLabel::A3;
  // Only reachable through rounding on the A12/A2 boundary s = 1/c, where
  // both projections coincide at v2.
  return RegionLabel::A2;
}

RegionProjection project_triangle_example(const ExampleGeometry& g, const Point& y) {
  if (g.x()) throw InvalidArgument("project_triangle_example: geometry must not set x");
  if (y.size() != 2) throw InvalidArgument("project_triangle_example: planar point required");
  const double c = g.c();
  const double inv_c = 1.0 / c;
  const double y1 = y[0], y2 = y[1];
  const RegionLabel label = classify_region(c, y1, y2);
  Point q(2);
  switch (label) {
    case RegionLabel::Interior: q << y1, y2; break;
    case RegionLabel::A1: q << 0.0, 0.0; break;
    case RegionLabel::A2: q << inv_c, 1.0; break;
    case RegionLabel::A3: q << 0.0, 1.0; break;
    case RegionLabel::A12: {
      const double s = (y1 + c * y2) / (1.0 + c * c);
      q << s, c * s;
      break;
    }
    case RegionLabel::A13: q << 0.0, y2; break;
    case RegionLabel::A23: q << y1, 1.0; break;
  }
  return {q, label};
}

double variational_residual(const ConvexPolytope& poly, const Point& y, const Point& q) {
  const Point r = y - q;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& v : poly.vertices()) worst = std::max(worst, r.dot(v - q));
  return worst;
}

Point project_polytope(const ConvexPolytope& poly, const Point& y, double tol,
                       int max_iterations) {
  if (y.size() != poly.dim()) throw InvalidArgument("project_polytope: dimension mismatch");
  if (!y.allFinite()) throw InvalidArgument("project_polytope: non-finite point");
  if (!(tol > 0.0)) throw InvalidArgument("project_polytope: tol must be positive");
  const int k = poly.size();
  if (k == 1) return poly.vertex(0);
  if (max_iterations <= 0) max_iterations = 50 * k + 100;

  Eigen::MatrixXd pts(poly.dim(), k);
  for (int i = 0; i < k; ++i) pts.col(i) = poly.vertex(i) - y;
  const double scale2 = pts.colwise().squaredNorm().maxCoeff();
  const double gap_tol = 1e-15 * scale2;
  constexpr double kPositive = 1e-13;

  Eigen::Index start = 0;
  pts.colwise().squaredNorm().minCoeff(&start);
  std::vector<int> active{static_cast<int>(start)};
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = pts.col(start);

  auto active_combination = [&]() {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(pts.rows());
    for (std::size_t s = 0; s < active.size(); ++s) {
      out += lambda[static_cast<Eigen::Index>(s)] * pts.col(active[s]);
    }
    return out;
  };

  bool converged = false;
  for (int iter = 0; iter < max_iterations && !converged; ++iter) {
    Eigen::Index j = 0;
    const Eigen::VectorXd along = pts.transpose() * x;
    along.minCoeff(&j);
    const double gap = x.squaredNorm() - along[j];
    if (gap <= gap_tol ||
        std::find(active.begin(), active.end(), static_cast<int>(j)) != active.end()) {
      converged = true;
      break;
    }
    active.push_back(static_cast<int>(j));
    lambda.conservativeResize(lambda.size() + 1);
    lambda[lambda.size() - 1] = 0.0;

    // Minor cycles: move toward the affine minimizer until it lies in the
    // relative interior of the active simplex.
    bool full_simplex = false;
    for (int minor = 0; minor <= k; ++minor) {
      Eigen::Index rank = 0;
      const Eigen::VectorXd mu = affine_minimizer(pts, active, rank);
      if (mu.minCoeff() > kPositive) {
        lambda = mu;
        // A full-dimensional simplex with positive weights contains the
        // origin, i.e. y itself lies in the polytope.
        full_simplex = rank == pts.rows();
        break;
      }
      double theta = 1.0;
      Eigen::Index blocking = -1;
      for (Eigen::Index s = 0; s < mu.size(); ++s) {
        if (mu[s] <= kPositive) {
          const double denom = lambda[s] - mu[s];
          const double ratio = denom > 0.0 ? lambda[s] / denom : 0.0;
          if (ratio < theta || blocking < 0) {
            theta = std::min(theta, ratio);
            blocking = s;
          }
        }
      }
      theta = std::clamp(theta, 0.0, 1.0);
      lambda += theta * (mu - lambda);

      std::vector<int> kept;
      std::vector<double> kept_lambda;
      for (Eigen::Index s = 0; s < lambda.size(); ++s) {
        if (s != blocking && lambda[s] > kPositive) {
          kept.push_back(active[static_cast<std::size_t>(s)]);
          kept_lambda.push_back(lambda[s]);
        }
      }
      active = std::move(kept);
      lambda = Eigen::Map<Eigen::VectorXd>(kept_lambda.data(),
                                           static_cast<Eigen::Index>(kept_lambda.size()));
      lambda /= lambda.sum();
    }
    if (full_simplex) {
      x.setZero();
      converged = true;
      break;
    }
    x = active_combination();
  }

  const Point q = y + x;
  const double residual = variational_residual(poly, y, q);
  const double allowed = tol * (1.0 + y.norm());
  if (!converged || !(residual <= allowed)) {
    throw NumericalFailure("project_polytope: no certified projection (residual " +
                               brief(residual) + ", allowed " + brief(allowed) + ")",
                           residual);
  }
  return q;
}

Projector::Projector(const ConvexPolytope& poly) : poly_(poly) {
  if (poly_.dim() != 2) return;
  const int k = poly_.size();
  planar_.resize(2, k);
  for (int i = 0; i < k; ++i) planar_.col(i) = poly_.vertex(i);
  edge_.resize(2, k);
  edge_norm2_.resize(k);
  for (int i = 0; i < k; ++i) {
    edge_.col(i) = planar_.col((i + 1) % k) - planar_.col(i);
    edge_norm2_[i] = edge_.col(i).squaredNorm();
  }
}

Eigen::Vector2d Projector::project2(const Eigen::Vector2d& y) const noexcept {
  const Eigen::Index k = planar_.cols();
  if (k == 1) return planar_.col(0);
  if (k == 2) return clip_to_segment(planar_.col(0), edge_.col(0), edge_norm2_[0], y);

  bool inside = true;
  for (Eigen::Index i = 0; i < k && inside; ++i) {
    const Eigen::Vector2d rel = y - planar_.col(i);
    inside = edge_(0, i) * rel[1] - edge_(1, i) * rel[0] >= 0.0;
  }
  if (inside) return y;

  Eigen::Vector2d best = planar_.col(0);
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Vector2d p = clip_to_segment(planar_.col(i), edge_.col(i), edge_norm2_[i], y);
    const double d2 = (y - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = p;
    }
  }
  return best;
}

Point Projector::project(const Point& y) const {
  if (y.size() != poly_.dim()) throw InvalidArgument("Projector: dimension mismatch");
  if (poly_.dim() == 2) return Point(project2(Eigen::Vector2d(y[0], y[1])));
  return project_polytope(poly_, y);
}

}  // namespace riskrev
