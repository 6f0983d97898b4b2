#pragma once

// Rational Arnoldi with prescribed poles and projected evaluation of
// matrix functions,
//
//   f(A) v  ~  V_k f(V_k^H A V_k) V_k^H v,
//
// where span(V_k) = q_{k-1}(A)^{-1} span{v, A v, ..., A^{k-1} v} and
// q_{k-1}(z) = prod_j (zeta_j - z). The denominator is never formed:
// column j+1 comes from the shift-invert step (zeta_j I - A)^{-1} v_j
// (or A v_j for an infinite pole), orthogonalized by modified
// Gram-Schmidt with one reorthogonalization pass.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "sincmf/error.hpp"
#include "sincmf/poles.hpp"
#include "sincmf/scalar.hpp"
#include "sincmf/sparse.hpp"

namespace sincmf {

/// Solves (zeta I - A) x = b, caching one sparse LU factorization per
/// distinct pole. Not thread-safe: give each thread its own solver.
class ShiftedSolver {
 public:
  explicit ShiftedSolver(const SparseSymMatrix& a) : a_(a.matrix().cast<cplx>()), order_(a.order()) {}

  CVec solve(cplx pole, const CVec& rhs) {
    detail::require(rhs.size() == order_, ErrorCategory::dimension_mismatch, "ShiftedSolver: rhs size mismatch");
    auto& lu = factor(pole);
    CVec x = lu.solve(rhs);
    detail::require(lu.info() == Eigen::Success && x.allFinite(), ErrorCategory::pole_collision,
                    "shifted solve failed at pole " + describe(pole) + " (pole on the spectrum?)");
    return x;
  }

  std::size_t factorizations() const noexcept { return cache_.size(); }
  Eigen::Index order() const noexcept { return order_; }

 private:
  using CSpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;
  using LU = Eigen::SparseLU<CSpMat, Eigen::COLAMDOrdering<int>>;

  static std::string describe(cplx z) { return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")"; }

  LU& factor(cplx pole) {
    const auto key = std::make_pair(pole.real(), pole.imag());
    if (auto it = cache_.find(key); it != cache_.end()) return *it->second;
    CSpMat shifted = -a_;
    for (Eigen::Index i = 0; i < order_; ++i) shifted.coeffRef(i, i) += pole;
    shifted.makeCompressed();
    auto lu = std::make_unique<LU>();
    lu->compute(shifted);
    detail::require(lu->info() == Eigen::Success, ErrorCategory::pole_collision,
                    "sparse LU of (zeta I - A) failed at pole " + describe(pole) + ": pole collides with the spectrum");
    auto& ref = *lu;
    cache_.emplace(key, std::move(lu));
    return ref;
  }

  CSpMat a_;
  Eigen::Index order_;
  std::map<std::pair<double, double>, std::unique_ptr<LU>> cache_;
};

/// Orthonormal basis of a rational Krylov space and the projected matrix.
struct RationalKrylovSpace {
  Eigen::MatrixXcd basis;      // order x k, orthonormal columns, basis.col(0) = v / |v|
  Eigen::MatrixXcd projected;  // V^H A V
  PoleSet poles_used;          // poles actually consumed, in order
  double seed_norm = 0.0;
  bool breakdown = false;  // true when the space became A-invariant early

  Eigen::Index dim() const noexcept { return basis.cols(); }
};

inline constexpr double kBreakdownTol = 1e-14;

/// Rational Arnoldi for (A, v) with k-1 poles taken cyclically from
/// `poles` (an empty set means all poles at infinity). Stops early, with
/// `breakdown` set, when the space is invariant.
inline RationalKrylovSpace build_space(const SparseSymMatrix& a, const CVec& v, const PoleSet& poles, int k,
                                       ShiftedSolver& solver) {
  detail::require(v.size() == a.order(), ErrorCategory::dimension_mismatch, "build_space: seed size mismatch");
  detail::require(solver.order() == a.order(), ErrorCategory::dimension_mismatch, "build_space: solver mismatch");
  detail::require_arg(k >= 1, "build_space: dimension k must be positive");
  const double beta = v.norm();
  detail::require_arg(beta > 0.0 && std::isfinite(beta), "build_space: zero seed vector");

  const Eigen::Index n = a.order();
  const Eigen::Index kmax = std::min<Eigen::Index>(k, n);
  RationalKrylovSpace s;
  s.seed_norm = beta;
  s.poles_used.family = poles.family;
  s.poles_used.n = poles.n;
  Eigen::MatrixXcd v_basis(n, kmax);
  v_basis.col(0) = v / beta;
  Eigen::Index cols = 1;
  for (Eigen::Index j = 0; j + 1 < kmax; ++j) {
    const cplx pole = poles.empty() ? infinite_pole() : poles.poles[static_cast<std::size_t>(j) % poles.size()];
    CVec w = is_infinite(pole) ? CVec(a * CVec(v_basis.col(j))) : solver.solve(pole, v_basis.col(j));
    const double wnorm = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < cols; ++i) {
        const cplx c = v_basis.col(i).dot(w);
        w -= c * v_basis.col(i);
      }
    }
    s.poles_used.poles.push_back(pole);
    const double rnorm = w.norm();
    if (!(rnorm > kBreakdownTol * wnorm)) {
      s.breakdown = true;
      break;
    }
    v_basis.col(cols++) = w / rnorm;
  }
  s.basis = v_basis.leftCols(cols);
  const Eigen::MatrixXcd av = a.matrix().cast<cplx>() * s.basis;
  s.projected = s.basis.adjoint() * av;
  return s;
}

inline RationalKrylovSpace build_space(const SparseSymMatrix& a, const Vec& v, const PoleSet& poles, int k,
                                       ShiftedSolver& solver) {
  return build_space(a, CVec(v.cast<cplx>()), poles, k, solver);
}

inline RationalKrylovSpace build_space(const SparseSymMatrix& a, const Vec& v, const PoleSet& poles, int k) {
  ShiftedSolver solver(a);
  return build_space(a, v, poles, k, solver);
}

/// Eigendecomposition of the small projected matrix, used to evaluate
/// any number of functions of it. Hermitian path when the matrix is
/// Hermitian to 1e-8 relative, general diagonalization otherwise.
class ProjectedSpectrum {
 public:
  explicit ProjectedSpectrum(const Eigen::MatrixXcd& h) {
    const double hn = h.norm();
    const double skew = (h - h.adjoint()).norm();
    hermitian_ = skew <= 1e-8 * std::max(hn, 1e-300);
    if (hermitian_) {
      const Eigen::MatrixXcd hs = 0.5 * (h + h.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
      detail::require(es.info() == Eigen::Success, ErrorCategory::convergence,
                      "projected Hermitian eigensolver failed");
      values_ = es.eigenvalues().cast<cplx>();
      vectors_ = es.eigenvectors();
      inverse_ = vectors_.adjoint();
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h);
      detail::require(es.info() == Eigen::Success, ErrorCategory::convergence, "projected eigensolver failed");
      values_ = es.eigenvalues();
      vectors_ = es.eigenvectors();
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectors_);
      const auto& sv = svd.singularValues();
      const double cond = sv(0) / sv(sv.size() - 1);
      detail::require(std::isfinite(cond) && cond <= 1e12, ErrorCategory::not_diagonalizable,
                      "projected matrix is numerically non-diagonalizable (eigenvector condition " +
                          std::to_string(cond) + "); use more or different poles");
      inverse_ = vectors_.inverse();
    }
  }

  bool hermitian() const noexcept { return hermitian_; }
  const Eigen::VectorXcd& values() const noexcept { return values_; }

  /// f(H) x.
  template <class F>
  CVec apply(F&& f, const CVec& x) const {
    CVec c = inverse_ * x;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= f(values_(i));
    return vectors_ * c;
  }

 private:
  bool hermitian_ = false;
  Eigen::VectorXcd values_;
  Eigen::MatrixXcd vectors_;
  Eigen::MatrixXcd inverse_;
};

namespace detail {

inline void check_seed(const RationalKrylovSpace& s, const CVec& v) {
  require(v.size() == s.basis.rows(), ErrorCategory::dimension_mismatch, "apply_function: vector size mismatch");
  const CVec c = s.basis.adjoint() * v;
  const double vn = v.norm();
  double off = std::abs(c(0) - cplx{vn});
  if (c.size() > 1) off = std::max(off, c.tail(c.size() - 1).norm());
  require_arg(off <= 1e-10 * std::max(vn, 1e-300), "apply_function: v is not the seed vector of the space");
}

}  // namespace detail

/// V_k f(A_k) V_k^H v, with v the seed of the space. f maps cplx -> cplx.
template <class F>
CVec apply_function(const RationalKrylovSpace& s, F&& f, const CVec& v) {
  detail::check_seed(s, v);
  const ProjectedSpectrum spec(s.projected);
  CVec e1 = CVec::Zero(s.dim());
  e1(0) = s.seed_norm;
  return s.basis * spec.apply(std::forward<F>(f), e1);
}

template <class F>
CVec apply_function(const RationalKrylovSpace& s, F&& f, const Vec& v) {
  return apply_function(s, std::forward<F>(f), CVec(v.cast<cplx>()));
}

/// Ratio |Im y| / |y| of a result that should be real.
inline double imaginary_residue(const CVec& y) {
  const double n = y.norm();
  return n == 0.0 ? 0.0 : y.imag().norm() / n;
}

/// How sinc-plane poles are turned into poles for the filter arguments
/// h^2 A. `squared`: zeta -> zeta^2 for sigma and (2 zeta)^2 for psi.
/// `direct`: the poles are used unchanged on h^2 A.
enum class PoleMapping { squared, direct };

inline PoleSet sigma_matrix_poles(const PoleSet& sinc_plane, PoleMapping m) {
  return m == PoleMapping::squared ? square_poles(sinc_plane) : sinc_plane;
}

inline PoleSet psi_matrix_poles(const PoleSet& sinc_plane, PoleMapping m) {
  return m == PoleMapping::squared ? square_poles(scale_poles(sinc_plane, 2.0)) : sinc_plane;
}

inline int default_dimension(const PoleSet& poles) { return static_cast<int>(poles.size()) + 1; }

/// sinc(A) v on a rational Krylov space of dimension k (k <= 0 selects
/// |poles| + 1).
inline Vec sinc_apply(const SparseSymMatrix& a, const Vec& v, const PoleSet& poles, int k = 0) {
  if (a.is_zero()) return v;
  if (k <= 0) k = default_dimension(poles);
  const auto s = build_space(a, v, poles, k);
  return apply_function(s, [](cplx z) { return sinc(z); }, v).real();
}

/// psi(h^2 A) v; the space is built for h^2 A with mapped poles.
inline Vec psi_apply(const SparseSymMatrix& a, const Vec& v, const PoleSet& poles, int k, double h,
                     PoleMapping mapping = PoleMapping::squared) {
  if (h == 0.0 || a.is_zero()) return v;
  const auto b = a.scaled(h * h);
  const auto mp = psi_matrix_poles(poles, mapping);
  if (k <= 0) k = default_dimension(mp);
  const auto s = build_space(b, v, mp, k);
  return apply_function(s, [](cplx z) { return psi(z); }, v).real();
}

/// sigma(h^2 A) v; the space is built for h^2 A with mapped poles.
inline Vec sigma_apply(const SparseSymMatrix& a, const Vec& v, const PoleSet& poles, int k, double h,
                       PoleMapping mapping = PoleMapping::squared) {
  if (h == 0.0 || a.is_zero()) return v;
  const auto b = a.scaled(h * h);
  const auto mp = sigma_matrix_poles(poles, mapping);
  if (k <= 0) k = default_dimension(mp);
  const auto s = build_space(b, v, mp, k);
  return apply_function(s, [](cplx z) { return sigma(z); }, v).real();
}

/// Repeated psi/sigma products with a fixed matrix h^2 A: the shifted
/// factorizations are computed once and reused for every new seed.
class KrylovFilter {
 public:
  KrylovFilter(const SparseSymMatrix& a, double h, const PoleSet& sinc_plane_poles,
               PoleMapping mapping = PoleMapping::squared, int k_psi = 0, int k_sigma = 0)
      : b_(a.scaled(h * h)),
        trivial_(h == 0.0 || a.is_zero()),
        psi_poles_(psi_matrix_poles(sinc_plane_poles, mapping)),
        sigma_poles_(sigma_matrix_poles(sinc_plane_poles, mapping)),
        k_psi_(k_psi > 0 ? k_psi : default_dimension(psi_poles_)),
        k_sigma_(k_sigma > 0 ? k_sigma : default_dimension(sigma_poles_)),
        solver_(b_) {}

  Vec psi(const Vec& v) { return apply(v, psi_poles_, k_psi_, [](cplx z) { return sincmf::psi(z); }); }
  Vec sigma(const Vec& v) { return apply(v, sigma_poles_, k_sigma_, [](cplx z) { return sincmf::sigma(z); }); }

  std::size_t factorizations() const noexcept { return solver_.factorizations(); }
  int psi_dimension() const noexcept { return k_psi_; }

 private:
  template <class F>
  Vec apply(const Vec& v, const PoleSet& poles, int k, F&& f) {
    if (trivial_) return v;
    if (v.norm() == 0.0) return Vec::Zero(v.size());
    const auto s = build_space(b_, v, poles, k, solver_);
    return apply_function(s, std::forward<F>(f), v).real();
  }

  SparseSymMatrix b_;
  bool trivial_;
  PoleSet psi_poles_, sigma_poles_;
  int k_psi_, k_sigma_;
  ShiftedSolver solver_;
};

}  // namespace sincmf
