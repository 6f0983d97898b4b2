#pragma once

// Pole families for rational Krylov approximation of sinc-type functions.
//
// Every family is generated from a generalized Laguerre polynomial with
// alpha = -2n-1 or -2n-2 (or from the tabulated sinc Pade denominators),
// so the poles are the roots of an explicitly known polynomial. Poles
// live in the "sinc plane" (the argument z of sinc z); square_poles and
// scale_poles adapt them to the matrix arguments of the filters.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sincmf/error.hpp"
#include "sincmf/polynomial.hpp"

namespace sincmf {

enum class PoleFamily { E, L, Lbar, PadeSinc, PadeExp, Custom };

constexpr std::string_view to_string(PoleFamily f) noexcept {
  switch (f) {
    case PoleFamily::E: return "E";
    case PoleFamily::L: return "L";
    case PoleFamily::Lbar: return "Lbar";
    case PoleFamily::PadeSinc: return "pade-sinc";
    case PoleFamily::PadeExp: return "pade-exp";
    case PoleFamily::Custom: return "custom";
  }
  return "custom";
}

inline PoleFamily parse_pole_family(std::string_view s) {
  if (s == "E") return PoleFamily::E;
  if (s == "L") return PoleFamily::L;
  if (s == "Lbar") return PoleFamily::Lbar;
  if (s == "pade-sinc") return PoleFamily::PadeSinc;
  if (s == "pade-exp") return PoleFamily::PadeExp;
  throw Error(ErrorCategory::invalid_argument, "unknown pole family '" + std::string(s) + "'");
}

/// Sentinel for a pole at infinity (polynomial Krylov step).
inline cplx infinite_pole() noexcept { return {std::numeric_limits<double>::infinity(), 0.0}; }
inline bool is_infinite(cplx z) noexcept { return std::isinf(z.real()) || std::isinf(z.imag()); }

struct PoleSet {
  std::vector<cplx> poles;
  PoleFamily family = PoleFamily::Custom;
  int n = 0;

  std::size_t size() const noexcept { return poles.size(); }
  bool empty() const noexcept { return poles.empty(); }
};

namespace detail {

// Sort key: modulus quantized to ~12 significant digits, then argument.
// Quantizing keeps conjugate pairs with roundoff-level modulus
// differences ordered by argument.
inline std::tuple<double, double> pole_order_key(cplx z) {
  if (is_infinite(z)) return {std::numeric_limits<double>::infinity(), 0.0};
  const double m = std::abs(z);
  double q = 0.0;
  if (m > 0.0) {
    const double scale = std::pow(10.0, 11 - std::floor(std::log10(m)));
    q = std::round(m * scale) / scale;
  }
  return {q, m == 0.0 ? 0.0 : std::arg(z)};
}

inline void sort_poles(std::vector<cplx>& poles) {
  std::stable_sort(poles.begin(), poles.end(),
                   [](cplx a, cplx b) { return pole_order_key(a) < pole_order_key(b); });
}

inline void check_family_degree(int n, std::string_view who) {
  detail::require_arg(n >= 1 && n <= kMaxRootDegree,
                      std::string(who) + ": degree " + std::to_string(n) + " outside [1, 20]");
}

inline PoleSet make_pole_set(std::vector<cplx> poles, PoleFamily family, int n) {
  sort_poles(poles);
  return PoleSet{std::move(poles), family, n};
}

}  // namespace detail

/// E_n: zeros of L_n^(-2n-1)(i z) and L_n^(-2n-1)(-i z), plus 0.
/// 2n+1 poles, closed under conjugation and under z -> -z.
inline PoleSet poles_E(int n) {
  detail::check_family_degree(n, "poles_E");
  const auto roots = poly_roots(laguerre_coeffs(n, cplx(-2.0 * n - 1.0)));
  std::vector<cplx> p;
  p.reserve(2 * roots.size() + 1);
  for (const auto& r : roots) {
    const cplx z = cplx{0.0, -1.0} * r;  // i z = r
    p.push_back(z);
    p.push_back(std::conj(z));
  }
  p.push_back(cplx{0.0});
  return detail::make_pole_set(std::move(p), PoleFamily::E, n);
}

/// L_n: zeros of L_n^(-2n-2)(2 i z). n poles; not conjugate-closed.
inline PoleSet poles_L(int n) {
  detail::check_family_degree(n, "poles_L");
  const auto roots = poly_roots(laguerre_coeffs(n, cplx(-2.0 * n - 2.0)));
  std::vector<cplx> p;
  p.reserve(roots.size());
  for (const auto& r : roots) p.push_back(cplx{0.0, -0.5} * r);  // 2 i z = r
  return detail::make_pole_set(std::move(p), PoleFamily::L, n);
}

/// Lbar_n: zeros of L_n^(-2n-2)(i z) and L_n^(-2n-2)(-i z). 2n poles.
inline PoleSet poles_Lbar(int n) {
  detail::check_family_degree(n, "poles_Lbar");
  const auto roots = poly_roots(laguerre_coeffs(n, cplx(-2.0 * n - 2.0)));
  std::vector<cplx> p;
  p.reserve(2 * roots.size());
  for (const auto& r : roots) {
    const cplx z = cplx{0.0, -1.0} * r;
    p.push_back(z);
    p.push_back(std::conj(z));
  }
  return detail::make_pole_set(std::move(p), PoleFamily::Lbar, n);
}

/// Zeros of the tabulated [n/n] sinc Pade denominator, n in {2,...,10} even.
inline PoleSet poles_pade_sinc(int n) {
  auto roots = poly_roots(pade_sinc_denominator(n));
  return detail::make_pole_set(std::move(roots), PoleFamily::PadeSinc, n);
}

/// Zeros of the [k/k] exponential Pade denominator G_k(x), proportional
/// to L_k^(-2k-1)(x). All lie in the open left half plane.
inline PoleSet poles_pade_exp(int k) {
  detail::check_family_degree(k, "poles_pade_exp");
  auto roots = poly_roots(laguerre_coeffs(k, cplx(-2.0 * k - 1.0)));
  return detail::make_pole_set(std::move(roots), PoleFamily::PadeExp, k);
}

inline PoleSet make_poles(PoleFamily family, int n) {
  switch (family) {
    case PoleFamily::E: return poles_E(n);
    case PoleFamily::L: return poles_L(n);
    case PoleFamily::Lbar: return poles_Lbar(n);
    case PoleFamily::PadeSinc: return poles_pade_sinc(n);
    case PoleFamily::PadeExp: return poles_pade_exp(n);
    case PoleFamily::Custom: break;
  }
  throw Error(ErrorCategory::invalid_argument, "make_poles: custom pole sets have no generator");
}

/// The polynomial whose zeros (in the sinc plane) generate the family;
/// used for residual checks. E and Lbar are the product of the two
/// mirrored factors (times z for the extra pole of E).
inline Polynomial generating_polynomial(PoleFamily family, int n) {
  const cplx i{0.0, 1.0};
  switch (family) {
    case PoleFamily::E: {
      const auto l = laguerre_coeffs(n, cplx(-2.0 * n - 1.0));
      return l.compose_scaled(i) * l.compose_scaled(-i) * Polynomial({cplx{0.0}, cplx{1.0}});
    }
    case PoleFamily::L: return laguerre_coeffs(n, cplx(-2.0 * n - 2.0)).compose_scaled(2.0 * i);
    case PoleFamily::Lbar: {
      const auto l = laguerre_coeffs(n, cplx(-2.0 * n - 2.0));
      return l.compose_scaled(i) * l.compose_scaled(-i);
    }
    case PoleFamily::PadeSinc: return pade_sinc_denominator(n);
    case PoleFamily::PadeExp: return laguerre_coeffs(n, cplx(-2.0 * n - 1.0));
    case PoleFamily::Custom: break;
  }
  throw Error(ErrorCategory::invalid_argument, "generating_polynomial: custom family");
}

/// z -> z^2 elementwise; infinity stays infinity. Ordering is re-applied.
inline PoleSet square_poles(const PoleSet& ps) {
  PoleSet out = ps;
  for (auto& z : out.poles)
    if (!is_infinite(z)) z = z * z;
  detail::sort_poles(out.poles);
  return out;
}

/// z -> c z elementwise; infinity stays infinity.
inline PoleSet scale_poles(const PoleSet& ps, double c) {
  PoleSet out = ps;
  for (auto& z : out.poles)
    if (!is_infinite(z)) z *= c;
  detail::sort_poles(out.poles);
  return out;
}

/// True when the multiset of finite poles equals its conjugate to `tol`
/// (relative to the largest modulus).
inline bool is_conjugate_closed(const PoleSet& ps, double tol = 1e-10) {
  std::vector<cplx> rest;
  double scale = 1.0;
  for (const auto& z : ps.poles)
    if (!is_infinite(z)) {
      rest.push_back(z);
      scale = std::max(scale, std::abs(z));
    }
  std::vector<bool> used(rest.size(), false);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const cplx target = std::conj(rest[i]);
    bool found = false;
    for (std::size_t j = 0; j < rest.size() && !found; ++j) {
      if (!used[j] && std::abs(rest[j] - target) <= tol * scale) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace sincmf
