#pragma once

// The rational sinc approximation built from the [n/n] exponential Pade
// approximant in Laguerre form, with l = L_n^(-2n-1):
//
//   E_n(z) = -(1/(2iz)) (l(-iz)^2 - l(iz)^2) / (l(iz) l(-iz))
//
// Its poles are the set E_n without the origin; the singularity at z = 0
// is removable and is cancelled analytically below.

#include <complex>
#include <vector>

#include "sincmf/error.hpp"
#include "sincmf/poles.hpp"
#include "sincmf/polynomial.hpp"
#include "sincmf/ratkrylov.hpp"
#include "sincmf/sparse.hpp"

namespace sincmf {

namespace detail {

// Pieces of E_n as polynomials in z:
//   odd(z)  = (l(-iz) - l(iz)) / (iz)
//   even(z) = l(-iz) + l(iz)
//   den(z)  = l(iz) l(-iz)
// so that E_n = -odd * even / (2 den).
struct LaguerreSincParts {
  Polynomial odd, even, den;
};

inline LaguerreSincParts laguerre_sinc_parts(int n) {
  check_family_degree(n, "sinc_pade_exp");
  const Polynomial l = laguerre_coeffs(n, cplx{-2.0 * n - 1.0});
  const Polynomial lp = l.compose_scaled(cplx{0.0, 1.0});
  const Polynomial lm = l.compose_scaled(cplx{0.0, -1.0});
  std::vector<cplx> odd(static_cast<std::size_t>(n), cplx{0.0});
  std::vector<cplx> even(static_cast<std::size_t>(n) + 1, cplx{0.0});
  const cplx i{0.0, 1.0};
  cplx ik{1.0};  // i^k
  for (int k = 0; k <= n; ++k) {
    if (k % 2 == 1) odd[static_cast<std::size_t>(k - 1)] = -2.0 * l[k] * ik / i;
    else even[static_cast<std::size_t>(k)] = 2.0 * l[k] * ik;
    ik *= i;
  }
  return {Polynomial(std::move(odd)), Polynomial(std::move(even)), lp * lm};
}

}  // namespace detail

/// E_n(z), the Laguerre-form rational approximation of sinc z.
inline cplx sinc_pade_exp(int n, cplx z) {
  const auto p = detail::laguerre_sinc_parts(n);
  return -p.odd(z) * p.even(z) / (2.0 * p.den(z));
}

inline double sinc_pade_exp(int n, double x) { return sinc_pade_exp(n, cplx{x}).real(); }

/// E_n(A) v through 2n shifted solves with the nonzero poles of E_n and
/// polynomial matvecs. No subspace projection is involved.
inline Vec sinc_pade_exp_apply(const SparseSymMatrix& a, const Vec& v, int n) {
  detail::require(v.size() == a.order(), ErrorCategory::dimension_mismatch, "sinc_pade_exp_apply: size mismatch");
  const auto p = detail::laguerre_sinc_parts(n);
  auto horner = [&a](const Polynomial& q, const CVec& x) {
    CVec acc = q.leading() * x;
    for (int k = q.degree() - 1; k >= 0; --k) acc = a * acc + q[k] * x;
    return acc;
  };
  ShiftedSolver solver(a);
  CVec w = v.cast<cplx>();
  // den(A) = c * prod (A - zeta I) over the nonzero poles; (zeta I - A) = -(A - zeta I).
  for (const cplx& zeta : poles_E(n).poles) {
    if (zeta == cplx{0.0}) continue;
    w = -solver.solve(zeta, w);
  }
  w /= p.den.leading();
  const CVec r = -0.5 * horner(p.odd, horner(p.even, w));
  return r.real();
}

}  // namespace sincmf
