#include "riskrev/gaussfn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "riskrev/errors.hpp"

namespace riskrev::gaussfn {
namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw InvalidArgument(std::string(what) + ": argument must be finite");
  }
}

// Upper tail 1 - Phi(x).
double upper_tail(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

// 20-point Gauss-Legendre rule on [-1, 1], built once by Newton iteration.
struct GaussLegendre20 {
  static constexpr int kN = 20;
  std::array<double, kN> nodes{};
  std::array<double, kN> weights{};

  GaussLegendre20() {
    for (int i = 0; i < kN; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kN + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= kN; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kN * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-17) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre20& gl20() {
  static const GaussLegendre20 rule;
  return rule;
}

// Integrates f over [lo, hi] with `panels` equal Gauss-Legendre panels.
template <class F>
double gl_integrate(F&& f, double lo, double hi, int panels) {
  const auto& rule = gl20();
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    double s = 0.0;
    for (int i = 0; i < GaussLegendre20::kN; ++i) {
      s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    total += s * half;
  }
  return total;
}

// T(h, a) for h > 0 and 0 < a <= 1 by panel quadrature of the defining
// integral. The integrand decays like exp(-h^2 x^2 / 2), so the range is cut
// where that factor drops below exp(-72) and split into panels of width 3/h.
double owens_t_quadrature(double h, double a) {
  const double h2 = h * h;
  const double upper = std::min(a, 12.0 / h);
  const int panels = std::max(1, static_cast<int>(std::ceil(h * upper / 3.0)));
  const double scale = std::exp(-0.5 * h2) * kInvTwoPi;
  if (scale == 0.0) return 0.0;
  const double s = gl_integrate(
      [h2](double x) { return std::exp(-0.5 * h2 * x * x) / (1.0 + x * x); }, 0.0,
      upper, panels);
  return scale * s;
}

// arctan(a)/(2 pi) - T(h, a) for h >= 0, a >= 0.
double deficit_nonneg(double h, double a) {
  if (a == 0.0 || h == 0.0) return 0.0;
  if (std::isinf(a)) return 0.5 * std_normal_cdf_centered(h);
  if (a <= 1.0) {
    if (h <= 1.0) {
      const double h2 = h * h;
      return kInvTwoPi *
             gl_integrate(
                 [h2](double x) {
                   const double w = 1.0 + x * x;
                   return -std::expm1(-0.5 * h2 * w) / w;
                 },
                 0.0, a, 1);
    }
    return std::atan(a) * kInvTwoPi - owens_t_quadrature(h, a);
  }
  // Reflection T(h,a) + T(ah,1/a) = [Phi(h)Q(ah) + Phi(ah)Q(h)]/2 rewritten for
  // the deficit: D(h,a) = (Phi(h)-1/2)(Phi(ah)-1/2) - D(ah, 1/a).
  const double ah = a * h;
  return std_normal_cdf_centered(h) * std_normal_cdf_centered(ah) -
         deficit_nonneg(ah, 1.0 / a);
}

// Maclaurin series of int_0^x z^2 phi(z) dz, used for |x| < 1.
double second_moment_series(double x) {
  const double x2 = x * x;
  double term = x * x2;  // x^{2k+3} / (2^k k!)
  double sum = term / 3.0;
  for (int k = 1; k < 40; ++k) {
    term *= -x2 / (2.0 * k);
    const double add = term / (2.0 * k + 3.0);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return kInvSqrt2Pi * sum;
}

double second_moment_from_zero(double x) {
  if (std::isinf(x)) return x > 0 ? 0.5 : -0.5;
  if (std::abs(x) < 1.0) return second_moment_series(x);
  return std_normal_cdf_centered(x) - x * std_normal_pdf(x);
}

}  // namespace

double std_normal_pdf(double x) {
  require_finite(x, "std_normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_cdf_centered(double x) {
  if (std::isinf(x)) return x > 0 ? 0.5 : -0.5;
  require_finite(x, "std_normal_cdf_centered");
  return 0.5 * std::erf(x * kInvSqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("std_normal_quantile: p must lie in (0, 1)");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
              67265.770927008700853) * r + 45921.953931549871457) * r +
            13731.693765509461125) * r + 1971.5909503065514427) * r +
          133.14166789178437745) * r + 3.387132872796366608);
    const double den =
        (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
              39307.89580009271061) * r + 21213.794301586595867) * r +
            5394.1960214247511077) * r + 687.1870074920579083) * r +
          42.313330701600911252) * r + 1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double truncated_second_moment(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) {
    throw InvalidArgument("truncated_second_moment: NaN limit");
  }
  return second_moment_from_zero(b) - second_moment_from_zero(a);
}

double owens_t(TParams p) {
  require_finite(p.h, "owens_t (h)");
  if (std::isnan(p.a)) throw InvalidArgument("owens_t (a): NaN");
  const double h = std::abs(p.h);
  const double sign = p.a < 0.0 ? -1.0 : 1.0;
  const double a = std::abs(p.a);

  if (a == 0.0) return 0.0;
  if (h == 0.0) return sign * std::atan(a) * kInvTwoPi;
  if (std::isinf(a)) return sign * 0.5 * upper_tail(h);
  if (a <= 1.0) return sign * owens_t_quadrature(h, a);

  const double ah = a * h;
  const double phi_h = 0.5 * std::erfc(-h * kInvSqrt2);
  const double phi_ah = 0.5 * std::erfc(-ah * kInvSqrt2);
  const double reflected =
      0.5 * (phi_h * upper_tail(ah) + phi_ah * upper_tail(h));
  return sign * (reflected - owens_t_quadrature(ah, 1.0 / a));
}

double owens_t_deficit(double h, double a) {
  require_finite(h, "owens_t_deficit (h)");
  if (std::isnan(a)) throw InvalidArgument("owens_t_deficit (a): NaN");
  const double d = deficit_nonneg(std::abs(h), std::abs(a));
  return a < 0.0 ? -d : d;
}

double int_phi_cdf_linear(double m, double b) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw InvalidArgument("int_phi_cdf_linear: m must be finite and >= 0");
  }
  require_finite(b, "int_phi_cdf_linear (b)");
  if (m == 0.0) return 0.0;
  // Phi(m)/2 - 1/4 - T(m,b) + arctan(b)/(2 pi), grouped to avoid cancellation.
  return 0.5 * std_normal_cdf_centered(m) + owens_t_deficit(m, b);
}

double int_phi_cdf(IntegralParams p) {
  if (!(p.m >= 0.0) || !std::isfinite(p.m)) {
    throw InvalidArgument("int_phi_cdf: m must be finite and >= 0");
  }
  require_finite(p.a, "int_phi_cdf (a)");
  require_finite(p.b, "int_phi_cdf (b)");
  const double m = p.m, a = p.a, b = p.b;
  if (m == 0.0) return 0.0;
  if (a == 0.0) return int_phi_cdf_linear(m, b);

  const double r = a / std::sqrt(1.0 + b * b);
  const double phi_r = std_normal_cdf(r);
  return owens_t(m, r / m) + owens_t(r, m / r) - owens_t(m, a / m + b) -
         owens_t(r, b + m / a * (1.0 + b * b)) + std_normal_cdf(m) * phi_r -
         0.5 * phi_r + owens_t(r, b);
}

double int_z_phi_phi(IntegralParams p) {
  if (!(p.m >= 0.0) || !std::isfinite(p.m)) {
    throw InvalidArgument("int_z_phi_phi: m must be finite and >= 0");
  }
  require_finite(p.a, "int_z_phi_phi (a)");
  require_finite(p.b, "int_z_phi_phi (b)");
  const double m = p.m, a = p.a, b = p.b;
  if (m == 0.0) return 0.0;

  const double s2 = 1.0 + b * b;
  const double s = std::sqrt(s2);
  const double r = a / s;
  const double lo = b * r;
  const double hi = m * s + b * r;
  const double phi_r = std_normal_pdf(r);
  return phi_r / s2 * (std_normal_pdf(lo) - std_normal_pdf(hi)) +
         a * b / (s2 * s) * phi_r * (std_normal_cdf(lo) - std_normal_cdf(hi));
}

}  // namespace riskrev::gaussfn
