#pragma once

// Scalar Gaussian special functions: the standard normal density and
// distribution, Owen's T-function and the Owen integral identities that the
// closed-form risks are assembled from.
//
// Every function here is pure and reentrant.

#include <limits>

namespace riskrev::gaussfn {

/// Absolute tolerance for analytic identities (symmetries, closed-form limits).
inline constexpr double kIdentityTol = 1e-12;
/// Absolute tolerance for agreement with adaptive quadrature.
inline constexpr double kQuadratureTol = 1e-10;

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Arguments of Owen's T(h, a). `a` may be +/- infinity.
struct TParams {
  double h = 0.0;
  double a = 0.0;
};

/// Arguments of the integrals over [0, m] with inner argument a + b z.
struct IntegralParams {
  double m = 0.0;
  double a = 0.0;
  double b = 0.0;
};

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Phi(x) - 1/2, accurate near zero.
double std_normal_cdf_centered(double x);

/// Phi^{-1}(p) for p in (0, 1) (Wichura's AS241, about 1e-16 relative).
double std_normal_quantile(double p);

/// int_a^b z^2 phi(z) dz, with a series for small arguments so that
/// Phi(b) - Phi(a) - b phi(b) + a phi(a) does not cancel.
double truncated_second_moment(double a, double b);

/// Owen's T(h, a) = phi(h) int_0^a phi(h z) / (1 + z^2) dz.
double owens_t(TParams p);
inline double owens_t(double h, double a) { return owens_t(TParams{h, a}); }

/// arctan(a) / (2 pi) - T(h, a), without cancellation for small h.
double owens_t_deficit(double h, double a);

/// int_0^m phi(z) Phi(a + b z) dz.
double int_phi_cdf(IntegralParams p);

/// int_0^m phi(z) Phi(b z) dz = Phi(m)/2 - 1/4 - T(m, b) + arctan(b)/(2 pi).
double int_phi_cdf_linear(double m, double b);

/// int_0^m z phi(z) phi(a + b z) dz.
double int_z_phi_phi(IntegralParams p);

}  // namespace riskrev::gaussfn
