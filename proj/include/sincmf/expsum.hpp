#pragma once

// sinc(A) v and sinc^2(A) v as Gauss-Legendre discretizations of the
// inverse Fourier transform:
//
//   sinc(A)   = 1/2 int_{-1}^{1} exp(-i k A) dk
//   sinc^2(A) = 1/8 int_{-2}^{0} (2k + 4) (exp(-i k A) + exp(i k A)) dk
//
// Each quadrature node needs one matrix exponential. In Krylov mode a
// single rational Krylov space is built for (A, v) and every exponential
// is taken of the projected matrix.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "sincmf/bounds.hpp"
#include "sincmf/dense.hpp"
#include "sincmf/error.hpp"
#include "sincmf/poles.hpp"
#include "sincmf/quadrature.hpp"
#include "sincmf/ratkrylov.hpp"
#include "sincmf/sparse.hpp"

namespace sincmf {

enum class ExpSumTarget { sinc, sinc2 };
enum class ExpSumInner { dense, rational_krylov };

struct ExpSumPlan {
  QuadratureRule rule;
  ExpSumTarget target = ExpSumTarget::sinc;
  ExpSumInner inner = ExpSumInner::dense;
  PoleSet poles;  // matrix-plane poles for the Krylov space
  int k = 0;      // Krylov dimension; <= 0 means |poles| + 1
};

/// Matrix-plane poles for the inner exponentials: the zeros r of the
/// [k/k] exponential Pade denominator give the space Q(-A, v) with poles
/// r, i.e. poles -r for A. These lie in the right half plane off the
/// real axis, except for one real pole when k is odd.
inline PoleSet expsum_default_poles(int k) {
  PoleSet p = poles_pade_exp(k);
  for (auto& z : p.poles) z = -z;
  detail::sort_poles(p.poles);
  return p;
}

inline ExpSumPlan make_expsum_plan(ExpSumTarget target, int nu, ExpSumInner inner = ExpSumInner::dense,
                                   PoleSet poles = {}, int k = 0) {
  detail::require_arg(nu >= 1, "expsum plan: nu must be positive");
  ExpSumPlan plan;
  plan.target = target;
  plan.rule = target == ExpSumTarget::sinc ? gauss_legendre(nu, -1.0, 1.0) : gauss_legendre(nu, -2.0, 0.0);
  plan.inner = inner;
  plan.poles = std::move(poles);
  plan.k = k;
  return plan;
}

/// The scalar function the quadrature actually applies to each
/// eigenvalue: 1/2 sum_p w_p exp(-i l_p z).
inline cplx expsum_sinc_scalar(const QuadratureRule& rule, cplx z) {
  cplx acc{0.0};
  for (std::size_t p = 0; p < rule.size(); ++p) acc += rule.weights[p] * std::exp(cplx{0.0, -rule.nodes[p]} * z);
  return 0.5 * acc;
}

/// 1/8 [ sum_p w_p (2 l_p + 4) exp(-i l_p z) + sum_p w_p (2 l_p + 4) exp(i l_p z) ]
/// with the rule on (-2, 0). The second sum is the mirrored rule on (0, 2)
/// after using the symmetry of Gauss-Legendre nodes and weights.
inline cplx expsum_sinc2_scalar(const QuadratureRule& rule, cplx z) {
  cplx first{0.0}, second{0.0};
  for (std::size_t p = 0; p < rule.size(); ++p) {
    const double wt = rule.weights[p] * (2.0 * rule.nodes[p] + 4.0);
    first += wt * std::exp(cplx{0.0, -rule.nodes[p]} * z);
    second += wt * std::exp(cplx{0.0, rule.nodes[p]} * z);
  }
  return (first + second) / 8.0;
}

inline cplx expsum_scalar(const ExpSumPlan& plan, cplx z) {
  return plan.target == ExpSumTarget::sinc ? expsum_sinc_scalar(plan.rule, z) : expsum_sinc2_scalar(plan.rule, z);
}

namespace detail {

inline CVec expsum_apply_complex(const SparseSymMatrix& a, const Vec& v, const ExpSumPlan& plan) {
  detail::require(v.size() == a.order(), ErrorCategory::dimension_mismatch, "expsum: vector size mismatch");
  auto g = [&plan](cplx z) { return expsum_scalar(plan, z); };
  if (plan.inner == ExpSumInner::dense) {
    const SymEigen eig{DenseSymMatrix(a)};
    return eig.apply_complex([&g](double x) { return g(cplx{x}); }, v);
  }
  if (v.norm() == 0.0) return CVec::Zero(v.size());
  const int k = plan.k > 0 ? plan.k : default_dimension(plan.poles);
  const auto s = build_space(a, v, plan.poles, k);
  return apply_function(s, g, v);
}

}  // namespace detail

/// sinc(A) v ~ 1/2 sum_p w_p exp(-i l_p A) v.
inline Vec expsum_sinc(const SparseSymMatrix& a, const Vec& v, const ExpSumPlan& plan) {
  detail::require_arg(plan.target == ExpSumTarget::sinc, "expsum_sinc: plan targets sinc^2");
  return detail::expsum_apply_complex(a, v, plan).real();
}

/// sinc^2(A) v from the symmetric-weight exponential sum on (-2, 0).
inline Vec expsum_sinc2(const SparseSymMatrix& a, const Vec& v, const ExpSumPlan& plan) {
  detail::require_arg(plan.target == ExpSumTarget::sinc2, "expsum_sinc2: plan targets sinc");
  return detail::expsum_apply_complex(a, v, plan).real();
}

/// Complex result before truncation, for realness checks.
inline CVec expsum_apply_complex(const SparseSymMatrix& a, const Vec& v, const ExpSumPlan& plan) {
  return detail::expsum_apply_complex(a, v, plan);
}

struct ExpSumErrorCheck {
  double error = 0.0;  // || sinc(A) - exponential sum ||_2
  double bound = 0.0;  // pi / (2 nu)! (rho(A)/2)^(2 nu)
  double rho = 0.0;
};

inline constexpr Eigen::Index kExpSumCheckMaxOrder = 512;

/// Exact operator-norm error of the nu-point sum against its a-priori
/// bound. For symmetric A the norm is the max over eigenvalues.
inline ExpSumErrorCheck expsum_error_check(const DenseSymMatrix& a, int nu) {
  detail::require(a.order() <= kExpSumCheckMaxOrder, ErrorCategory::scale_guard,
                  "expsum_error_check: order exceeds 512");
  const auto rule = gauss_legendre(nu, -1.0, 1.0);
  const SymEigen eig(a);
  ExpSumErrorCheck out;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double l = eig.values(i);
    out.rho = std::max(out.rho, std::abs(l));
    out.error = std::max(out.error, std::abs(cplx{sinc(l)} - expsum_sinc_scalar(rule, cplx{l})));
  }
  out.bound = bound_expsum(nu, out.rho);
  return out;
}

}  // namespace sincmf
