#include "riskrev/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

#include "riskrev/errors.hpp"
#include "riskrev/gaussfn.hpp"
#include "riskrev/parallel.hpp"
#include "riskrev/philox.hpp"
#include "riskrev/projection.hpp"

namespace riskrev {

int worker_count() {
  if (const char* env = std::getenv("RISKREV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate(const MCConfig& cfg) {
  if (cfg.n < 1) throw InvalidArgument("MCConfig: n must be >= 1");
  if (cfg.chunk < 1) throw InvalidArgument("MCConfig: chunk must be >= 1");
}

NormalStream::NormalStream(std::uint64_t seed) noexcept : seed_(seed) {}

void NormalStream::fill(std::uint64_t index, double* out, int d, std::uint32_t lane) const noexcept {
  const auto key = Philox4x32::key_from_seed(seed_);
  for (int j = 0; 2 * j < d; ++j) {
    const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(index),
                                     static_cast<std::uint32_t>(index >> 32),
                                     static_cast<std::uint32_t>(j), lane};
    const auto r = Philox4x32::apply(ctr, key);
    out[2 * j] = gaussfn::std_normal_quantile(uniform_open(r[0], r[1]));
    if (2 * j + 1 < d) out[2 * j + 1] = gaussfn::std_normal_quantile(uniform_open(r[2], r[3]));
  }
}

Eigen::VectorXd NormalStream::draw(std::uint64_t index, int d, std::uint32_t lane) const {
  Eigen::VectorXd z(d);
  fill(index, z.data(), d, lane);
  return z;
}

void MeanAccumulator::add(double x) noexcept {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void MeanAccumulator::merge(const MeanAccumulator& other) noexcept {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count), nb = static_cast<double>(other.count);
  const double n = na + nb;
  const double delta = other.mean - mean;
  mean += delta * nb / n;
  m2 += other.m2 + delta * delta * na * nb / n;
  count += other.count;
}

RiskEstimate MeanAccumulator::estimate(std::uint64_t seed) const {
  RiskEstimate e;
  e.mean = mean;
  e.n = count;
  e.seed = seed;
  if (count > 1) {
    const double n = static_cast<double>(count);
    e.std_error = std::sqrt(m2 / (n - 1.0) / n);
  }
  return e;
}

std::vector<RiskEstimate> mc_risk_batch(const ConvexPolytope& poly,
                                        const std::vector<Point>& thetas, double sigma,
                                        const MCConfig& cfg) {
  validate(cfg);
  if (thetas.empty()) throw InvalidArgument("mc_risk_batch: no theta supplied");
  for (const auto& t : thetas) {
    validate(RiskQuery{t, sigma});
    if (t.size() != poly.dim()) throw InvalidArgument("mc_risk: theta dimension mismatch");
    if (!poly.contains(t)) throw InvalidArgument("mc_risk: theta_star is not in the polytope");
  }

  const int d = poly.dim();
  const std::size_t k = thetas.size();
  const Projector projector(poly);
  const NormalStream stream(cfg.seed);
  const double diam = poly.diameter() + 1e-8;
  const double loss_cap = diam * diam;

  auto chunk_fn = [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
    std::vector<MeanAccumulator> acc(k);
    Eigen::VectorXd z(d), y(d);
    for (std::uint64_t i = begin; i < end; ++i) {
      stream.fill(i, z.data(), d);
      for (std::size_t t = 0; t < k; ++t) {
        double loss;
        if (d == 2) {
          const Eigen::Vector2d th(thetas[t][0], thetas[t][1]);
          const Eigen::Vector2d yy = th + sigma * Eigen::Vector2d(z[0], z[1]);
          loss = (projector.project2(yy) - th).squaredNorm();
        } else {
          y = thetas[t] + sigma * z;
          try {
            loss = (projector.project(y) - thetas[t]).squaredNorm();
          } catch (const NumericalFailure& e) {
            throw NumericalFailure("mc_risk: sample " + std::to_string(i) + ": " + e.what(),
                                   e.residual());
          }
        }
        if (!(loss <= loss_cap)) {
          throw NumericalFailure("mc_risk: sample " + std::to_string(i) +
                                     " has loss above the squared diameter",
                                 loss - loss_cap);
        }
        acc[t].add(loss);
      }
    }
    return acc;
  };

  const auto parts = run_chunks<std::vector<MeanAccumulator>>(cfg.n, cfg.chunk, chunk_fn);
  std::vector<MeanAccumulator> total(k);
  for (const auto& part : parts) {
    for (std::size_t t = 0; t < k; ++t) total[t].merge(part[t]);
  }
  std::vector<RiskEstimate> out;
  out.reserve(k);
  for (const auto& a : total) out.push_back(a.estimate(cfg.seed));
  return out;
}

RiskEstimate mc_risk(const ConvexPolytope& poly, const RiskQuery& q, const MCConfig& cfg) {
  return mc_risk_batch(poly, {q.theta_star}, q.sigma, cfg).front();
}

RiskEstimate mc_risk_effective(const ConvexPolytope& poly, const Point& theta_star, double sigma,
                               std::uint64_t n_obs, const MCConfig& cfg) {
  if (n_obs < 1) throw InvalidArgument("mc_risk_effective: n_obs must be >= 1");
  const double eff = n_obs == 1 ? sigma : sigma / std::sqrt(static_cast<double>(n_obs));
  return mc_risk(poly, RiskQuery{theta_star, eff}, cfg);
}

std::vector<Eigen::VectorXd> sample_unit_sphere(int d, std::uint64_t n, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("sample_unit_sphere: d must be >= 1");
  const NormalStream stream(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Eigen::VectorXd z = stream.draw(i, d);
    for (std::uint32_t lane = 1; !(z.norm() > 0.0); ++lane) z = stream.draw(i, d, lane);
    out.push_back(z / z.norm());
  }
  return out;
}

double cauchy_cdf(double r) { return 0.5 + std::atan(r) / std::numbers::pi; }

KsResult ks_cauchy(std::vector<double>& sample) {
  KsResult res;
  res.n = sample.size();
  if (sample.empty()) return res;
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cauchy_cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  res.statistic = d;
  res.scaled = d * std::sqrt(n);
  return res;
}

bool CauchyRatioReport::passed() const {
  return all.scaled < critical && u1_nonneg.scaled < critical && u2_positive.scaled < critical;
}

CauchyRatioReport cauchy_ratio_check(std::uint64_t n, std::uint64_t seed) {
  if (n < 1000) throw InvalidArgument("cauchy_ratio_check: n must be >= 1000");
  const auto dirs = sample_unit_sphere(2, n, seed);
  std::vector<double> all, u1_nonneg, u2_pos;
  all.reserve(n);
  for (const auto& u : dirs) {
    if (u[0] == 0.0) continue;  // ratio undefined; probability zero
    const double r = u[1] / u[0];
    all.push_back(r);
    if (u[0] >= 0.0) u1_nonneg.push_back(r);
    if (u[1] > 0.0) u2_pos.push_back(r);
  }
  CauchyRatioReport rep;
  rep.all = ks_cauchy(all);
  rep.u1_nonneg = ks_cauchy(u1_nonneg);
  rep.u2_positive = ks_cauchy(u2_pos);
  return rep;
}

}  // namespace riskrev
