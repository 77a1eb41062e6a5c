#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <functional>
#include <vector>

#include "riskrev/errors.hpp"
#include "riskrev/exact_risk.hpp"
#include "riskrev/gaussfn.hpp"
#include "riskrev/montecarlo.hpp"
#include "riskrev/projection.hpp"
#include "support/generators.hpp"
#include "support/quadrature.hpp"

using namespace riskrev;
using testsupport::integrate;
using testsupport::phi;

namespace {

constexpr double kPi = std::numbers::pi;

// E|clip(t* + s g, 0, 1) - t*|^2 * alpha by 1D quadrature split at the kinks.
double segment_risk_quad(const ExampleGeometry& g, double t_star, double sigma) {
  const double alpha = g.alpha();
  const double s = sigma / std::sqrt(alpha);
  auto loss = [=](double z) {
    const double t = std::clamp(t_star + s * z, 0.0, 1.0);
    return alpha * (t - t_star) * (t - t_star) * phi(z);
  };
  const double lo = -t_star / s, hi = (1.0 - t_star) / s;
  const double left = std::max(-40.0, std::min(lo, 40.0)), right = std::min(40.0, std::max(hi, -40.0));
  std::vector<double> cuts = {-40.0, left, 0.0, right, 40.0};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(loss, cuts[i], cuts[i + 1], 1e-16).value;
  return total;
}

// E|Pi(sigma Z)|^2 for the triangle by nested 2D quadrature, split along the
// region boundaries so every panel sees a smooth integrand.
double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts, double lim,
                        double tol) {
  cuts.push_back(-lim);
  cuts.push_back(lim);
  for (auto& x : cuts) x = std::clamp(x, -lim, lim);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(f, cuts[i], cuts[i + 1], tol).value;
  return total;
}

double triangle_risk_quad(const ExampleGeometry& g, double sigma) {
  const double lim = 9.0, c = g.c();
  auto inner = [&](double z2) {
    const double y2 = sigma * z2;
    auto f = [&](double z1) {
      const Point q = project_triangle_example(g, make_point({sigma * z1, y2})).point;
      return q.squaredNorm() * phi(z1);
    };
    const std::vector<double> cuts = {0.0, y2 / c / sigma, 1.0 / c / sigma, -c * y2 / sigma,
                                      ((1.0 + c * c) / c - c * y2) / sigma};
    return integrate_pieces(f, cuts, lim, 1e-13) * phi(z2);
  };
  return integrate_pieces(inner, {0.0, 1.0 / sigma}, lim, 1e-12);
}

}  // namespace

TEST_CASE("segment risk") {
  const ExampleGeometry g1(1.0);
  CHECK(risk_segment_exact(g1, 0.0, 1e4) == doctest::Approx(g1.alpha() / 2).epsilon(1e-4));
  CHECK(risk_segment_exact(g1, 0.0, 1e-3) / 1e-6 == doctest::Approx(0.5).epsilon(1e-12));

  // The t* = 0 specialisation in its original form.
  for (double c : {0.3, 1.0, 4.0}) {
    const ExampleGeometry g(c);
    for (double sigma : {0.05, 0.7, 3.0, 40.0}) {
      const double w = std::sqrt(g.alpha()) / sigma;
      const double ref = sigma * sigma * (gaussfn::std_normal_cdf(w) - 0.5 - w * gaussfn::std_normal_pdf(w)) +
                         g.alpha() * gaussfn::std_normal_cdf(-w);
      CHECK(risk_segment_exact(g, 0.0, sigma) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  testsupport::Gen gen(6);
  for (int i = 0; i < 200; ++i) {
    const ExampleGeometry g(gen.uniform(0.1, 5.0));
    const double t = gen.uniform(0.0, 1.0), sigma = std::exp(gen.uniform(std::log(0.01), std::log(100.0)));
    const double ref = segment_risk_quad(g, t, sigma);
    CHECK_MESSAGE(std::abs(risk_segment_exact(g, t, sigma) - ref) <= 1e-11 * std::max(1.0, ref), "c=", g.c(), " t=", t, " sigma=", sigma, " ref=", ref);
  }
  CHECK_THROWS_AS(risk_segment_exact(g1, 1.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(risk_segment_exact(g1, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("triangle risk breakdown") {
  testsupport::Gen gen(5);
  for (int i = 0; i < 200; ++i) {
    const double c = gen.uniform(0.1, 5.0);
    const double sigma = std::exp(gen.uniform(std::log(0.01), std::log(100.0)));
    const ExampleGeometry g(c);
    const RegionRiskBreakdown b = risk_triangle_exact(g, sigma);
    double sum = 0.0;
    for (RegionLabel r : kAllRegions) {
      CHECK(b[r] >= -1e-12);
      sum += b[r];
    }
    CHECK(b.total == doctest::Approx(sum).epsilon(1e-15));
    CHECK(std::abs(b.total - risk_triangle_closed_form(g, sigma)) <= 1e-12 * std::max(1.0, b.total));
    CHECK(b[RegionLabel::A1] == 0.0);
    CHECK(b[RegionLabel::A3] == doctest::Approx(0.5 * gaussfn::std_normal_cdf(-1.0 / sigma)).epsilon(1e-15));

    // The two written forms of the A2 Owen's T argument coincide.
    const double u = 1.0 / (c * sigma);
    CHECK(std::abs(gaussfn::owens_t(u, std::sqrt(c * c + 1.0)) - gaussfn::owens_t(u, c * std::sqrt(g.alpha()))) <=
          1e-15);
  }
}

TEST_CASE("triangle risk against 2D quadrature") {
  for (double c : {0.5, 1.0, 2.0}) {
    for (double sigma : {0.05, 0.3, 1.0, 4.0, 30.0}) {
      const ExampleGeometry g(c);
      CHECK(risk_triangle_exact(g, sigma).total == doctest::Approx(triangle_risk_quad(g, sigma)).epsilon(1e-10));
    }
  }
}

TEST_CASE("exact risks against Monte Carlo") {
  const MCConfig cfg{200000, 314, 1u << 14};
  for (auto [c, sigma] : {std::pair{1.0, 1.0}, std::pair{0.5, 10.0}, std::pair{2.0, 0.3}}) {
    const ExampleGeometry g(c);
    const RiskEstimate s = mc_risk(g.segment(), {g.v1(), sigma}, cfg);
    const RiskEstimate l = mc_risk(g.triangle(), {g.v1(), sigma}, cfg);
    CHECK(std::abs(s.mean - risk_segment_exact(g, 0.0, sigma)) <= 4 * s.std_error);
    CHECK(std::abs(l.mean - risk_triangle_exact(g, sigma).total) <= 4 * l.std_error);
  }
}

TEST_CASE("small and large noise limits") {
  for (double c : {0.5, 1.0, 2.0}) {
    const ExampleGeometry g(c);
    const double s = 1e-3;
    CHECK(risk_segment_exact(g, 0.0, s) / (s * s) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(risk_triangle_exact(g, s).total / (s * s) ==
          doctest::Approx(0.5 + std::atan(1.0 / c) / kPi).epsilon(0.01));
    CHECK(risk_difference(g, s) / (s * s) == doctest::Approx(small_noise_diff_coeff(c)).epsilon(0.02));

    const double big = 1e4;
    const double p2 = 0.25 + std::atan(1.0 / c) / (2 * kPi);
    CHECK(std::abs(risk_segment_exact(g, 0.0, big) - g.alpha() / 2) <= 1e-3);
    CHECK(std::abs(risk_triangle_exact(g, big).total - (g.alpha() * p2 + 0.25)) <= 1e-3);
    CHECK(std::abs(risk_difference(g, big) - large_noise_limit_diff(c)) <= 1e-3);
  }
}

TEST_CASE("difference coefficients") {
  CHECK(small_noise_diff_coeff(1.0) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(small_noise_diff_coeff(1e6) < 0.0);
  CHECK(small_noise_diff_coeff(1e6) > -1e-6);
  for (double c : {0.01, 0.3, 3.0, 50.0}) CHECK(small_noise_diff_coeff(c) < 0.0);
  CHECK(std::abs(large_noise_limit_diff(1.0)) <= 1e-15);
  CHECK(large_noise_limit_diff(0.5) == doctest::Approx(0.1190).epsilon(1e-3));
  CHECK(large_noise_limit_diff(0.5) > 0.0);
  CHECK(large_noise_limit_diff(2.0) < 0.0);
  CHECK_THROWS_AS(large_noise_limit_diff(-1.0), InvalidArgument);
}

TEST_CASE("sign pattern of the risk difference") {
  for (double c : {0.2, 0.5, 0.9}) {
    CHECK(risk_difference(ExampleGeometry(c), 0.01) < 0.0);
    CHECK(risk_difference(ExampleGeometry(c), 50.0) > 0.0);
  }
  for (double c : {2.0, 5.0}) {
    CHECK(risk_difference(ExampleGeometry(c), 0.01) < 0.0);
    CHECK(risk_difference(ExampleGeometry(c), 50.0) < 0.0);
  }
  CHECK(risk_difference(ExampleGeometry(0.5), 20.0) > 0.0);
  CHECK(std::abs(risk_difference(ExampleGeometry(1.0), 50.0)) <= 1e-2);
}
