#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "riskrev/asymptotics.hpp"
#include "riskrev/errors.hpp"
#include "riskrev/exact_risk.hpp"
#include "riskrev/montecarlo.hpp"
#include "riskrev/philox.hpp"

using namespace riskrev;

namespace {

constexpr double kPi = std::numbers::pi;

Point p2(double a, double b) { return make_point({a, b}); }

ConvexPolytope box(double half) {
  return ConvexPolytope({p2(-half, -half), p2(half, -half), p2(half, half), p2(-half, half)});
}

struct ThreadsEnv {
  explicit ThreadsEnv(const char* v) { setenv("RISKREV_THREADS", v, 1); }
  ~ThreadsEnv() { unsetenv("RISKREV_THREADS"); }
};

bool same(const RiskEstimate& a, const RiskEstimate& b) {
  return a.mean == b.mean && a.std_error == b.std_error && a.n == b.n && a.seed == b.seed;
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::apply({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::apply({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::apply({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  CHECK(uniform_open(0, 0) > 0.0);
  CHECK(uniform_open(0xffffffff, 0xffffffff) < 1.0);
}

TEST_CASE("normal stream") {
  const NormalStream s(9);
  CHECK(s.draw(123, 5) == s.draw(123, 5));
  CHECK(s.draw(123, 3) == s.draw(123, 5).head(3));
  CHECK(s.draw(123, 2) != s.draw(124, 2));
  CHECK(s.draw(5, 2) != s.draw(5, 2, 1));
  MeanAccumulator m, v;
  for (std::uint64_t i = 0; i < 200000; ++i) {
    const double z = s.draw(i, 1)[0];
    m.add(z);
    v.add(z * z);
  }
  CHECK(std::abs(m.mean) <= 4 * m.estimate(0).std_error);
  CHECK(std::abs(v.mean - 1.0) <= 4 * v.estimate(0).std_error);
}

TEST_CASE("streaming accumulator") {
  MeanAccumulator all, left, right;
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(std::sin(i * 0.37) * 5 + 1e6);
  for (int i = 0; i < 1000; ++i) (i < 377 ? left : right).add(xs[static_cast<std::size_t>(i)]);
  for (double x : xs) all.add(x);
  left.merge(right);
  CHECK(left.count == 1000);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-15));
  CHECK(left.m2 == doctest::Approx(all.m2).epsilon(1e-10));
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= 1000;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  CHECK(all.estimate(0).std_error == doctest::Approx(std::sqrt(ss / 999 / 1000)).epsilon(1e-9));
  MeanAccumulator one;
  one.add(3.0);
  CHECK(one.estimate(1).std_error == 0.0);
}

TEST_CASE("risk estimates are independent of worker count") {
  const ExampleGeometry g(0.5);
  const MCConfig cfg{300000, 77, 1u << 12};
  RiskEstimate one, many;
  {
    ThreadsEnv env("1");
    one = mc_risk(g.triangle(), {g.v1(), 2.0}, cfg);
  }
  {
    ThreadsEnv env("6");
    many = mc_risk(g.triangle(), {g.v1(), 2.0}, cfg);
  }
  CHECK(same(one, many));
  CHECK(same(mc_risk(g.triangle(), {g.v1(), 2.0}, cfg), one));

  const std::vector<Point> thetas = {g.v1(), g.v2(), p2(0.5, 0.5)};
  const auto batch = mc_risk_batch(g.triangle(), thetas, 2.0, cfg);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    CHECK(same(batch[i], mc_risk(g.triangle(), {thetas[i], 2.0}, cfg)));
  }
}

TEST_CASE("risk estimates against known values") {
  const MCConfig cfg{400000, 2, 1u << 15};
  // Interior point of the unit square: risk / sigma^2 -> d.
  const ConvexPolytope unit({p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)});
  const double s = 1e-3;
  const RiskEstimate in = mc_risk(unit, {p2(0.5, 0.5), s}, cfg);
  CHECK(std::abs(in.mean / (s * s) - 2.0) <= 4 * in.std_error / (s * s));

  const ExampleGeometry g(1.0);
  const RiskEstimate seg = mc_risk(g.segment(), {g.v1(), 1.0}, cfg);
  CHECK(std::abs(seg.mean - risk_segment_exact(g, 0.0, 1.0)) <= 4 * seg.std_error);

  const RiskEstimate far = mc_risk(g.triangle(), {g.v1(), 1e4}, cfg);
  const double limit = g.alpha() * (0.25 + std::atan(1.0) / (2 * kPi)) + 0.25;
  CHECK(std::abs(far.mean - limit) <= 4 * far.std_error + 1e-3);

  // A box far larger than the noise behaves like the unconstrained problem.
  const RiskEstimate wide = mc_risk(box(1e3), {p2(0, 0), 0.5}, cfg);
  CHECK(std::abs(wide.mean / 0.25 - 2.0) <= 4 * wide.std_error / 0.25);
  std::vector<Point> cube;
  for (int i = 0; i < 8; ++i) cube.push_back(make_point({i & 1 ? 1e3 : -1e3, i & 2 ? 1e3 : -1e3, i & 4 ? 1e3 : -1e3}));
  const RiskEstimate wide3 = mc_risk(ConvexPolytope(cube), {make_point({0, 0, 0}), 0.5}, MCConfig{50000, 2, 4096});
  CHECK(std::abs(wide3.mean / 0.25 - 3.0) <= 4 * wide3.std_error / 0.25);
}

TEST_CASE("risk in higher dimension through the general projector") {
  // Segment embedded in R^3 must reproduce the planar segment risk.
  const ExampleGeometry g(0.7);
  const ConvexPolytope seg3({make_point({0, 0, 0}), make_point({1 / 0.7, 1, 0})});
  const RiskEstimate est = mc_risk(seg3, {make_point({0, 0, 0}), 1.3}, MCConfig{100000, 8, 8192});
  CHECK(std::abs(est.mean - risk_segment_exact(g, 0.0, 1.3)) <= 4 * est.std_error);
}

TEST_CASE("effective noise level") {
  const ExampleGeometry g(1.0);
  const MCConfig cfg{100000, 5, 1u << 14};
  CHECK(same(mc_risk_effective(g.segment(), g.v1(), 1.7, 1, cfg), mc_risk(g.segment(), {g.v1(), 1.7}, cfg)));
  CHECK(same(mc_risk_effective(g.segment(), g.v1(), 2.0, 4, cfg), mc_risk(g.segment(), {g.v1(), 1.0}, cfg)));
  const RiskEstimate e = mc_risk_effective(g.segment(), g.v1(), 10.0, 100, cfg);
  CHECK(std::abs(e.mean - risk_segment_exact(g, 0.0, 1.0)) <= 4 * e.std_error);
  CHECK_THROWS_AS(mc_risk_effective(g.segment(), g.v1(), 1.0, 0, cfg), InvalidArgument);
}

TEST_CASE("large-noise risks approach the limiting risk") {
  const ExampleGeometry g(0.75, 0.5);
  const ConvexPolytope poly = g.theta_x();
  const double limit = limiting_risk(poly, g.v1(), vertex_probabilities_2d(poly));
  const MCConfig cfg{400000, 13, 1u << 15};
  double prev_err = INFINITY, prev_se = 0.0;
  for (double sigma : {1e2, 1e3, 1e4}) {
    const RiskEstimate e = mc_risk(poly, {g.v1(), sigma}, cfg);
    const double err = std::abs(e.mean - limit);
    CHECK(err <= prev_err + 4 * std::hypot(e.std_error, prev_se));
    prev_err = err;
    prev_se = e.std_error;
  }
}

TEST_CASE("risk input validation") {
  const ExampleGeometry g(1.0);
  CHECK_THROWS_AS(mc_risk(g.triangle(), {p2(3, 3), 1.0}, MCConfig{}), InvalidArgument);
  CHECK_THROWS_AS(mc_risk(g.triangle(), {g.v1(), -1.0}, MCConfig{}), InvalidArgument);
  CHECK_THROWS_AS(mc_risk(g.triangle(), {g.v1(), 1.0}, MCConfig{0, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(mc_risk(g.triangle(), {g.v1(), 1.0}, MCConfig{10, 1, 0}), InvalidArgument);
  CHECK_THROWS_AS(mc_risk(g.triangle(), {make_point({0, 0, 0}), 1.0}, MCConfig{}), InvalidArgument);
  // Points within the membership tolerance are accepted.
  CHECK_NOTHROW(mc_risk(g.triangle(), {p2(-5e-10, 0.0), 1.0}, MCConfig{1000, 1, 100}));
}

TEST_CASE("uniform directions") {
  const auto u = sample_unit_sphere(2, 200000, 3);
  MeanAccumulator x, y;
  std::uint64_t positive = 0;
  for (const auto& v : u) {
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    x.add(v[0]);
    y.add(v[1]);
    positive += v[0] > 0.0;
  }
  CHECK(std::abs(x.mean) <= 4 * x.estimate(0).std_error);
  CHECK(std::abs(y.mean) <= 4 * y.estimate(0).std_error);
  const double frac = static_cast<double>(positive) / 200000.0;
  CHECK(std::abs(frac - 0.5) <= 4 * std::sqrt(0.25 / 200000.0));
  for (const auto& v : sample_unit_sphere(7, 1000, 1)) CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
  for (const auto& v : sample_unit_sphere(1, 100, 1)) CHECK(std::abs(v[0]) == 1.0);
  CHECK_THROWS_AS(sample_unit_sphere(0, 10, 1), InvalidArgument);
}

TEST_CASE("ratio of direction coordinates is standard Cauchy") {
  CHECK(cauchy_cdf(0.0) == 0.5);
  CHECK(cauchy_cdf(1.0) == doctest::Approx(0.75).epsilon(1e-15));
  const CauchyRatioReport rep = cauchy_ratio_check(100000, kDefaultSeed);
  CHECK(rep.all.n == 100000);
  CHECK(rep.all.scaled < rep.critical);
  CHECK(rep.u1_nonneg.scaled < rep.critical);
  CHECK(rep.u2_positive.scaled < rep.critical);
  CHECK(rep.passed());
  CHECK(rep.u1_nonneg.n + rep.u2_positive.n > 90000);

  // A shifted sample must be rejected.
  std::vector<double> shifted;
  for (std::uint64_t i = 1; i <= 20000; ++i) shifted.push_back(std::tan(kPi * (i - 0.5) / 20000.0 - kPi / 2) + 0.2);
  CHECK(ks_cauchy(shifted).scaled > 1.95);
  CHECK_THROWS_AS(cauchy_ratio_check(10, 1), InvalidArgument);
}
