#include "riskrev/exact_risk.hpp"

#include <cmath>
#include <numbers>

#include "riskrev/errors.hpp"
#include "riskrev/gaussfn.hpp"

namespace riskrev {
namespace {

using gaussfn::owens_t;
using gaussfn::owens_t_deficit;
using gaussfn::std_normal_cdf;
using gaussfn::std_normal_cdf_centered;
using gaussfn::std_normal_pdf;
using gaussfn::truncated_second_moment;

constexpr double kPi = std::numbers::pi;

void require_sigma(double sigma, const char* what) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument(std::string(what) + ": sigma must be finite and > 0");
  }
}

void require_c(double c, const char* what) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidArgument(std::string(what) + ": c must be finite and > 0");
  }
}

// int_0^x z^2 phi(z) dz
double m2(double x) { return truncated_second_moment(0.0, x); }

}  // namespace

void validate(const RiskQuery& q) {
  require_sigma(q.sigma, "RiskQuery");
  if (q.theta_star.size() == 0 || !q.theta_star.allFinite()) {
    throw InvalidArgument("RiskQuery: theta_star must be nonempty and finite");
  }
}

double risk_segment_exact(const ExampleGeometry& g, double t_star, double sigma) {
  require_sigma(sigma, "risk_segment_exact");
  if (!(t_star >= 0.0 && t_star <= 1.0)) {
    throw InvalidArgument("risk_segment_exact: t_star must lie in [0, 1]");
  }
  const double alpha = g.alpha();
  const double root = std::sqrt(alpha);
  const double a = -root * t_star / sigma;
  const double b = root * (1.0 - t_star) / sigma;
  const double lower = t_star == 0.0 ? 0.0 : t_star * t_star * std_normal_cdf(a);
  const double upper = t_star == 1.0 ? 0.0 : (1.0 - t_star) * (1.0 - t_star) * std_normal_cdf(-b);
  return alpha * (lower + upper) + sigma * sigma * truncated_second_moment(a, b);
}

RegionRiskBreakdown risk_triangle_exact(const ExampleGeometry& g, double sigma) {
  require_sigma(sigma, "risk_triangle_exact");
  const double c = g.c();
  const double alpha = g.alpha();
  const double s2 = sigma * sigma;
  const double h = 1.0 / sigma;
  const double u = h / c;                     // 1/(c sigma)
  const double w = std::sqrt(alpha) * h;      // sqrt(alpha)/sigma
  const double q_h = std_normal_cdf(-h);

  RegionRiskBreakdown out;
  auto set = [&out](RegionLabel r, double v) { out.terms[static_cast<std::size_t>(r)] = v; };

  // 2 sigma^2 (arctan(1/c)/(2 pi) - T(h, 1/c)) carries the cancellation.
  set(RegionLabel::Interior,
      sigma * std_normal_pdf(h) * (-std_normal_cdf_centered(u)) + 2.0 * s2 * owens_t_deficit(h, 1.0 / c));
  set(RegionLabel::A1, 0.0);
  set(RegionLabel::A2, alpha * (std_normal_cdf(-u) * std_normal_cdf(-w) +
                                owens_t(u, c * std::sqrt(alpha)) +
                                owens_t(w, 1.0 / (c * std::sqrt(alpha))) - owens_t(u, c)));
  set(RegionLabel::A3, 0.5 * q_h);
  set(RegionLabel::A12, 0.5 * s2 * m2(w));
  set(RegionLabel::A13, 0.5 * s2 * m2(h));
  set(RegionLabel::A23, q_h * (std_normal_cdf_centered(u) + s2 * m2(u)));

  for (double t : out.terms) out.total += t;
  return out;
}

double risk_triangle_closed_form(const ExampleGeometry& g, double sigma) {
  require_sigma(sigma, "risk_triangle_closed_form");
  const double c = g.c();
  const double alpha = g.alpha();
  const double s2 = sigma * sigma;
  const double h = 1.0 / sigma;
  const double u = h / c;
  const double w = std::sqrt(alpha) * h;
  const double root = std::sqrt(c * c + 1.0);

  const double line1 = -sigma * std_normal_pdf(h) * std_normal_cdf(u) +
                       s2 * (0.5 * std_normal_cdf_centered(h) + 2.0 * owens_t_deficit(h, 1.0 / c));
  const double line2 = std_normal_cdf(-h) * (s2 * m2(u) + std_normal_cdf(u));
  const double line3 = 0.5 * s2 * m2(w);
  const double line4 = alpha * (std_normal_cdf(-u) * std_normal_cdf(-w) + owens_t(u, root) +
                                owens_t(w, 1.0 / root) - owens_t(u, c));
  return line1 + line2 + line3 + line4;
}

double risk_difference(const ExampleGeometry& g, double sigma) {
  return risk_segment_exact(g, 0.0, sigma) - risk_triangle_exact(g, sigma).total;
}

double small_noise_diff_coeff(double c) {
  require_c(c, "small_noise_diff_coeff");
  return -std::atan(1.0 / c) / kPi;
}

double large_noise_limit_diff(double c) {
  require_c(c, "large_noise_limit_diff");
  const double c2 = c * c;
  return 0.25 / c2 - (1.0 + c2) / (2.0 * kPi * c2) * std::atan(1.0 / c);
}

}  // namespace riskrev
