#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riskrev/cones.hpp"
#include "riskrev/montecarlo.hpp"
#include "riskrev/polytope.hpp"

namespace riskrev {

/// Law of the vertex selected by the estimator as sigma -> infinity.
struct VertexDistribution {
  std::vector<double> probs;
  std::vector<double> std_errors;  // binomial standard errors; empty when analytic
  std::uint64_t n = 0;             // Monte Carlo sample count; 0 when analytic
};

/// delta(C) = E|Pi_C(Z)|^2 for a planar cone.
double statistical_dimension_2d(const Cone2D& cone);

/// Monte Carlo statistical dimension of the conic hull of `generators`.
RiskEstimate statistical_dimension_mc(const std::vector<Point>& generators, std::uint64_t n,
                                      std::uint64_t seed);

/// sigma^2 * delta(T_P(theta)), the leading small-noise risk (planar only).
double small_noise_risk(const ConvexPolytope& poly, const Point& theta, double sigma);

/// p_i = normal cone arc / (2 pi).
VertexDistribution vertex_probabilities_2d(const ConvexPolytope& poly);

/// Empirical frequencies of the exposed vertex under uniform random directions.
VertexDistribution vertex_probabilities_mc(const ConvexPolytope& poly, std::uint64_t n,
                                           std::uint64_t seed);

/// sum_i p_i |v_i - theta|^2.
double limiting_risk(const ConvexPolytope& poly, const Point& theta,
                     const VertexDistribution& dist);

/// Limiting risk at v1 for conv{v1, v2, (x, 1)} with slope c.
double theta_x_limiting_risk(double c, double x);

/// ((1+x^2)/(2 pi)) ((pi/2) x^2/(1+x^2) - arctan x).
double delta_x(double c, double x);

struct WorstCase {
  double value;
  int vertex;
};

/// Maximum of the limiting risk over the vertices (smallest index on ties).
WorstCase worst_case_limiting_risk(const ConvexPolytope& poly, const VertexDistribution& dist);

struct EnvelopePoint {
  double x;
  double risk_v1;
  double risk_v2;
  double risk_vx;
  double envelope;
};

/// Limiting risks at the three vertices of conv{v1, v2, (x, 1)} and their max.
EnvelopePoint envelope_point(double c, double x);

std::vector<EnvelopePoint> envelope_curve(double c, const std::vector<double>& x_grid);

/// Index of the smallest envelope value (first one on ties).
std::size_t envelope_argmin(const std::vector<EnvelopePoint>& curve);

/// Vertices followed by `edge_points` evenly spaced interior points per edge.
std::vector<Point> sup_candidates(const ConvexPolytope& poly, int edge_points);

struct SupRisk {
  double value;
  double std_error;
  Point theta;
};

/// Largest Monte Carlo risk over sup_candidates(poly, edge_points).
SupRisk mc_sup_risk(const ConvexPolytope& poly, double sigma, const MCConfig& cfg,
                    int edge_points = 32);

struct ReversalStep {
  double sigma;
  SupRisk small;
  SupRisk large;
  double threshold;  // 4 * sqrt(se_small^2 + se_large^2)
  bool reversed;
};

struct ReversalReport {
  std::optional<double> reversal_sigma;
  std::vector<ReversalStep> steps;
  int edge_points;
};

inline constexpr double kReversalZ = 4.0;

/// Scans an increasing sigma grid for a sigma where the smaller set's sup-risk
/// exceeds the larger set's by more than 4 combined standard errors.
ReversalReport detect_finite_sigma_reversal(const ExampleGeometry& g_small,
                                            const ExampleGeometry& g_large,
                                            const std::vector<double>& sigma_grid,
                                            std::uint64_t n, std::uint64_t seed,
                                            int edge_points = 32);

}  // namespace riskrev
