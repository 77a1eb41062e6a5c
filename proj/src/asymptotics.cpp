#include "riskrev/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "riskrev/errors.hpp"
#include "riskrev/parallel.hpp"

namespace riskrev {
namespace {

constexpr double kPi = std::numbers::pi;

void require_aligned(const ConvexPolytope& poly, const VertexDistribution& dist) {
  if (static_cast<int>(dist.probs.size()) != poly.size()) {
    throw InvalidArgument("vertex distribution has " + std::to_string(dist.probs.size()) +
                          " entries for " + std::to_string(poly.size()) + " vertices");
  }
}

void require_x(double c, double x, const char* what) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument(std::string(what) + ": c must be > 0");
  if (!(x >= 0.0) || x > (1.0 / c) * (1.0 + 1e-12)) {
    throw InvalidArgument(std::string(what) + ": x must lie in [0, 1/c]");
  }
}

}  // namespace

double statistical_dimension_2d(const Cone2D& cone) {
  switch (cone.kind) {
    case ConeKind::Point: return 0.0;
    case ConeKind::Ray: return 0.5;
    case ConeKind::Line: return 1.0;
    case ConeKind::Wedge: return 0.5 + cone.apex_angle / kPi;
    case ConeKind::HalfPlane: return 1.5;
    case ConeKind::Full: return 2.0;
  }
  return 0.0;
}

RiskEstimate statistical_dimension_mc(const std::vector<Point>& generators, std::uint64_t n,
                                      std::uint64_t seed) {
  if (generators.empty()) throw InvalidArgument("statistical_dimension_mc: no generators");
  if (n < 1) throw InvalidArgument("statistical_dimension_mc: n must be >= 1");
  const auto d = generators.front().size();
  Eigen::MatrixXd g(d, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (generators[j].size() != d) {
      throw InvalidArgument("statistical_dimension_mc: generators have mixed dimensions");
    }
    g.col(static_cast<Eigen::Index>(j)) = generators[j];
  }
  const NormalStream stream(seed);
  auto chunk_fn = [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
    MeanAccumulator acc;
    Eigen::VectorXd z(d);
    for (std::uint64_t i = begin; i < end; ++i) {
      stream.fill(i, z.data(), static_cast<int>(d));
      acc.add(project_cone_nonneg(g, z, 1e-10).squaredNorm());
    }
    return acc;
  };
  MeanAccumulator total;
  for (const auto& part : run_chunks<MeanAccumulator>(n, 1u << 16, chunk_fn)) total.merge(part);
  return total.estimate(seed);
}

double small_noise_risk(const ConvexPolytope& poly, const Point& theta, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("small_noise_risk: sigma must be finite and > 0");
  }
  if (poly.dim() != 2) throw InvalidArgument("small_noise_risk: planar polytope required");
  return sigma * sigma * statistical_dimension_2d(tangent_cone_2d(poly, theta));
}

VertexDistribution vertex_probabilities_2d(const ConvexPolytope& poly) {
  VertexDistribution dist;
  dist.probs.reserve(static_cast<std::size_t>(poly.size()));
  for (int i = 0; i < poly.size(); ++i) {
    dist.probs.push_back(normal_cone_angle_2d(poly, i) / (2.0 * kPi));
  }
  return dist;
}

VertexDistribution vertex_probabilities_mc(const ConvexPolytope& poly, std::uint64_t n,
                                           std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("vertex_probabilities_mc: n must be >= 1");
  const int d = poly.dim();
  const int k = poly.size();
  const NormalStream stream(seed);
  auto chunk_fn = [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(k), 0);
    Eigen::VectorXd z(d);
    for (std::uint64_t i = begin; i < end; ++i) {
      stream.fill(i, z.data(), d);
      for (std::uint32_t lane = 1; !(z.norm() > 0.0); ++lane) stream.fill(i, z.data(), d, lane);
      z /= z.norm();
      ++counts[static_cast<std::size_t>(exposed_face_vertex(poly, z))];
    }
    return counts;
  };
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(k), 0);
  for (const auto& part : run_chunks<std::vector<std::uint64_t>>(n, 1u << 16, chunk_fn)) {
    for (int i = 0; i < k; ++i) counts[static_cast<std::size_t>(i)] += part[static_cast<std::size_t>(i)];
  }
  VertexDistribution dist;
  dist.n = n;
  const double nn = static_cast<double>(n);
  for (auto c : counts) {
    const double p = static_cast<double>(c) / nn;
    dist.probs.push_back(p);
    dist.std_errors.push_back(std::sqrt(p * (1.0 - p) / nn));
  }
  return dist;
}

double limiting_risk(const ConvexPolytope& poly, const Point& theta,
                     const VertexDistribution& dist) {
  require_aligned(poly, dist);
  if (theta.size() != poly.dim()) throw InvalidArgument("limiting_risk: dimension mismatch");
  double r = 0.0;
  for (int i = 0; i < poly.size(); ++i) {
    r += dist.probs[static_cast<std::size_t>(i)] * (poly.vertex(i) - theta).squaredNorm();
  }
  return r;
}

double theta_x_limiting_risk(double c, double x) {
  require_x(c, x, "theta_x_limiting_risk");
  return envelope_point(c, x).risk_v1;
}

double delta_x(double c, double x) {
  require_x(c, x, "delta_x");
  const double w = 1.0 + x * x;
  return w / (2.0 * kPi) * (0.5 * kPi * x * x / w - std::atan(x));
}

WorstCase worst_case_limiting_risk(const ConvexPolytope& poly, const VertexDistribution& dist) {
  require_aligned(poly, dist);
  WorstCase best{limiting_risk(poly, poly.vertex(0), dist), 0};
  for (int j = 1; j < poly.size(); ++j) {
    const double r = limiting_risk(poly, poly.vertex(j), dist);
    if (r > best.value) best = {r, j};
  }
  return best;
}

EnvelopePoint envelope_point(double c, double x) {
  require_x(c, x, "envelope_point");
  const double alpha = 1.0 + 1.0 / (c * c);
  const double p2 = 0.25 + std::atan(1.0 / c) / (2.0 * kPi);
  const double px = 0.25 - std::atan(x) / (2.0 * kPi);
  const double p1 = 1.0 - p2 - px;
  const double d1x = 1.0 + x * x;                          // |v1 - vx|^2
  const double d2x = (1.0 / c - x) * (1.0 / c - x);        // |v2 - vx|^2
  EnvelopePoint e;
  e.x = x;
  e.risk_v1 = alpha * p2 + px * d1x;
  e.risk_v2 = alpha * p1 + px * d2x;
  e.risk_vx = p1 * d1x + p2 * d2x;
  e.envelope = std::max({e.risk_v1, e.risk_v2, e.risk_vx});
  return e;
}

std::vector<EnvelopePoint> envelope_curve(double c, const std::vector<double>& x_grid) {
  std::vector<EnvelopePoint> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) out.push_back(envelope_point(c, x));
  return out;
}

std::size_t envelope_argmin(const std::vector<EnvelopePoint>& curve) {
  if (curve.empty()) throw InvalidArgument("envelope_argmin: empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].envelope < curve[best].envelope) best = i;
  }
  return best;
}

std::vector<Point> sup_candidates(const ConvexPolytope& poly, int edge_points) {
  if (edge_points < 0) throw InvalidArgument("sup_candidates: edge_points must be >= 0");
  std::vector<Point> out(poly.vertices());
  const int k = poly.size();
  const int edges = k == 1 ? 0 : (k == 2 ? 1 : k);
  for (int i = 0; i < edges; ++i) {
    const Point& a = poly.vertex(i);
    const Point& b = poly.vertex((i + 1) % k);
    for (int j = 1; j <= edge_points; ++j) {
      const double t = static_cast<double>(j) / (edge_points + 1);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

SupRisk mc_sup_risk(const ConvexPolytope& poly, double sigma, const MCConfig& cfg,
                    int edge_points) {
  const auto candidates = sup_candidates(poly, edge_points);
  const auto est = mc_risk_batch(poly, candidates, sigma, cfg);
  std::size_t best = 0;
  for (std::size_t i = 1; i < est.size(); ++i) {
    if (est[i].mean > est[best].mean) best = i;
  }
  return {est[best].mean, est[best].std_error, candidates[best]};
}

ReversalReport detect_finite_sigma_reversal(const ExampleGeometry& g_small,
                                            const ExampleGeometry& g_large,
                                            const std::vector<double>& sigma_grid,
                                            std::uint64_t n, std::uint64_t seed,
                                            int edge_points) {
  if (!g_small.x() || !g_large.x()) {
    throw InvalidArgument("detect_finite_sigma_reversal: both geometries need x");
  }
  if (g_small.c() != g_large.c()) {
    throw InvalidArgument("detect_finite_sigma_reversal: geometries must share c");
  }
  if (*g_small.x() < *g_large.x()) {
    throw InvalidArgument("detect_finite_sigma_reversal: sets are not nested (x_small < x_large)");
  }
  if (sigma_grid.empty()) throw InvalidArgument("detect_finite_sigma_reversal: empty sigma grid");
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > 0.0) || !std::isfinite(sigma_grid[i])) {
      throw InvalidArgument("detect_finite_sigma_reversal: sigma values must be finite and > 0");
    }
    if (i > 0 && !(sigma_grid[i] > sigma_grid[i - 1])) {
      throw InvalidArgument("detect_finite_sigma_reversal: sigma grid must be increasing");
    }
  }
  const ConvexPolytope small = g_small.theta_x();
  const ConvexPolytope large = g_large.theta_x();
  const MCConfig cfg{n, seed, MCConfig{}.chunk};

  ReversalReport rep;
  rep.edge_points = edge_points;
  for (double sigma : sigma_grid) {
    ReversalStep step{sigma, mc_sup_risk(small, sigma, cfg, edge_points),
                      mc_sup_risk(large, sigma, cfg, edge_points), 0.0, false};
    step.threshold = kReversalZ * std::hypot(step.small.std_error, step.large.std_error);
    step.reversed = step.small.value - step.large.value > step.threshold;
    if (step.reversed && !rep.reversal_sigma) rep.reversal_sigma = sigma;
    rep.steps.push_back(std::move(step));
  }
  return rep;
}

}  // namespace riskrev
