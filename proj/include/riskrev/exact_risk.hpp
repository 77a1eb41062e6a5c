#pragma once

#include <array>

#include "riskrev/polytope.hpp"
#include "riskrev/projection.hpp"

namespace riskrev {

/// One risk evaluation: true parameter and noise level.
struct RiskQuery {
  Point theta_star;
  double sigma;
};

/// Throws InvalidArgument unless sigma > 0 and theta_star is finite.
void validate(const RiskQuery& q);

/// Risk of the triangle estimator split by the region of Y that produced it.
struct RegionRiskBreakdown {
  std::array<double, 7> terms{};  // indexed by RegionLabel
  double total = 0.0;

  double operator[](RegionLabel r) const { return terms[static_cast<std::size_t>(r)]; }
};

inline constexpr std::array<RegionLabel, 7> kAllRegions = {
    RegionLabel::Interior, RegionLabel::A1,  RegionLabel::A2,  RegionLabel::A3,
    RegionLabel::A12,      RegionLabel::A13, RegionLabel::A23};

/// Risk of projecting onto the segment [v1, v2] with theta* = t_star * v2.
double risk_segment_exact(const ExampleGeometry& g, double t_star, double sigma);

/// Risk of projecting onto the triangle [v1, v2, v3] with theta* = v1.
RegionRiskBreakdown risk_triangle_exact(const ExampleGeometry& g, double sigma);

/// The same triangle risk evaluated as one assembled expression rather than
/// region by region. Used as a cross-check on the breakdown.
double risk_triangle_closed_form(const ExampleGeometry& g, double sigma);

/// Segment risk minus triangle risk at theta* = v1.
double risk_difference(const ExampleGeometry& g, double sigma);

/// sigma^2 coefficient of risk_difference as sigma -> 0: -arctan(1/c)/pi.
double small_noise_diff_coeff(double c);

/// Limit of risk_difference as sigma -> infinity:
/// 1/(4c^2) - (1+c^2)/(2 pi c^2) arctan(1/c).
double large_noise_limit_diff(double c);

}  // namespace riskrev
