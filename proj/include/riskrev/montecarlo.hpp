#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "riskrev/exact_risk.hpp"
#include "riskrev/polytope.hpp"

namespace riskrev {

inline constexpr std::uint64_t kDefaultSeed = 20240613;

struct RiskEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

struct MCConfig {
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t chunk = 1u << 16;  // samples per deterministic work unit
};

void validate(const MCConfig& cfg);

/// Standard normal vectors addressed by (seed, sample index). Coordinate pairs
/// come from one Philox block each and go through the normal quantile, so
/// every sample consumes a fixed slice of the stream.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept;
  /// `lane` selects an independent stream for the same index.
  void fill(std::uint64_t index, double* out, int d, std::uint32_t lane = 0) const noexcept;
  Eigen::VectorXd draw(std::uint64_t index, int d, std::uint32_t lane = 0) const;

 private:
  std::uint64_t seed_;
};

/// Streaming mean and variance (Welford), mergeable in a fixed order.
struct MeanAccumulator {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  void merge(const MeanAccumulator& other) noexcept;
  RiskEstimate estimate(std::uint64_t seed) const;
};

/// Monte Carlo estimate of E|Pi_P(theta* + sigma Z) - theta*|^2.
RiskEstimate mc_risk(const ConvexPolytope& poly, const RiskQuery& q, const MCConfig& cfg);

/// mc_risk for several theta* at one sigma, sharing the noise draws. Entry k
/// is bitwise equal to mc_risk(poly, {thetas[k], sigma}, cfg).
std::vector<RiskEstimate> mc_risk_batch(const ConvexPolytope& poly,
                                        const std::vector<Point>& thetas, double sigma,
                                        const MCConfig& cfg);

/// mc_risk at the effective noise level sigma / sqrt(n_obs).
RiskEstimate mc_risk_effective(const ConvexPolytope& poly, const Point& theta_star, double sigma,
                               std::uint64_t n_obs, const MCConfig& cfg);

/// n directions Z/|Z| uniformly distributed on the unit sphere in R^d.
std::vector<Eigen::VectorXd> sample_unit_sphere(int d, std::uint64_t n, std::uint64_t seed);

struct KsResult {
  std::uint64_t n = 0;
  double statistic = 0.0;  // sup |F_n - F|
  double scaled = 0.0;     // statistic * sqrt(n)
};

struct CauchyRatioReport {
  KsResult all;           // u2 / u1
  KsResult u1_nonneg;     // u2 / u1 given u1 >= 0
  KsResult u2_positive;   // u2 / u1 given u2 > 0
  double critical = 1.95;  // asymptotic KS critical value at the 0.1% level
  bool passed() const;
};

/// Standard Cauchy CDF 1/2 + arctan(r)/pi.
double cauchy_cdf(double r);

/// One-sample Kolmogorov-Smirnov statistic of `sample` against the standard
/// Cauchy law. The sample is sorted in place.
KsResult ks_cauchy(std::vector<double>& sample);

/// KS checks that ratios of uniform planar directions are standard Cauchy,
/// unconditionally and under the two half-plane conditionings.
CauchyRatioReport cauchy_ratio_check(std::uint64_t n, std::uint64_t seed);

}  // namespace riskrev
