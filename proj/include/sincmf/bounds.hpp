#pragma once

// Leading-order error bounds for the rational sinc approximants and for
// the Gauss-Legendre exponential sum, plus pole-count selection.
//
// All monomial bounds are increasing on [0, zmax], so the sup-norm over
// that interval is the value at zmax. Factorials go through lgamma.

#include <cmath>
#include <numbers>
#include <string>

#include "sincmf/error.hpp"

namespace sincmf {

enum class BoundKind { En, Fn, Ftilde };

namespace detail {

// log(n! / (2n+1)!)
inline double log_factorial_ratio(int n) {
  return std::lgamma(n + 1.0) - std::lgamma(2.0 * n + 2.0);
}

inline double monomial_bound(double log_coeff, double zmax, int power) {
  detail::require_arg(zmax >= 0.0, "error bound: zmax must be nonnegative");
  if (zmax == 0.0) return 0.0;
  return std::exp(log_coeff + power * std::log(zmax));
}

}  // namespace detail

/// 2 (2n+1) (n!/(2n+1)!)^2 zmax^(2n): exponential-Pade based approximant.
inline double bound_En(int n, double zmax) {
  detail::require_arg(n >= 1, "bound_En: n must be positive");
  const double lc = std::log(2.0 * (2 * n + 1)) + 2.0 * detail::log_factorial_ratio(n);
  return detail::monomial_bound(lc, zmax, 2 * n);
}

/// 2 * 2^(2n) (n!/(2n+1)!)^2 zmax^(2n+1): 1F1(1;2;.) Pade approximant.
inline double bound_Fn(int n, double zmax) {
  detail::require_arg(n >= 1, "bound_Fn: n must be positive");
  const double lc = std::log(2.0) + 2.0 * n * std::log(2.0) + 2.0 * detail::log_factorial_ratio(n);
  return detail::monomial_bound(lc, zmax, 2 * n + 1);
}

/// 2 (n+1)/(4n+6) (n!/(2n+1)!)^2 zmax^(2n+2): symmetrized 1F1 approximant.
inline double bound_Ftilde(int n, double zmax) {
  detail::require_arg(n >= 1, "bound_Ftilde: n must be positive");
  const double lc = std::log(2.0 * (n + 1.0) / (4.0 * n + 6.0)) + 2.0 * detail::log_factorial_ratio(n);
  return detail::monomial_bound(lc, zmax, 2 * n + 2);
}

inline double bound(BoundKind kind, int n, double zmax) {
  switch (kind) {
    case BoundKind::En: return bound_En(n, zmax);
    case BoundKind::Fn: return bound_Fn(n, zmax);
    case BoundKind::Ftilde: return bound_Ftilde(n, zmax);
  }
  return 0.0;
}

/// pi / (2 nu)! (rho/2)^(2 nu): Gauss-Legendre exponential-sum error.
inline double bound_expsum(int nu, double rho) {
  detail::require_arg(nu >= 1, "bound_expsum: nu must be positive");
  detail::require_arg(rho >= 0.0, "bound_expsum: rho must be nonnegative");
  if (rho == 0.0) return 0.0;
  return std::exp(std::log(std::numbers::pi) - std::lgamma(2.0 * nu + 1.0) + 2.0 * nu * std::log(0.5 * rho));
}

inline constexpr int kMaxPoleCount = 64;

/// Smallest n in [1, 64] with bound(kind, n, zmax) <= tol.
inline int select_pole_count(BoundKind kind, double zmax, double tol) {
  detail::require_arg(tol > 0.0, "select_pole_count: tolerance must be positive");
  detail::require_arg(zmax >= 0.0, "select_pole_count: zmax must be nonnegative");
  for (int n = 1; n <= kMaxPoleCount; ++n)
    if (bound(kind, n, zmax) <= tol) return n;
  throw Error(ErrorCategory::saturation, "select_pole_count: no n <= 64 reaches tolerance " + std::to_string(tol) +
                                             " on [0, " + std::to_string(zmax) + "]");
}

}  // namespace sincmf
