#pragma once

// Dense spectral reference for functions of symmetric matrices. Cubic
// cost; this is the ground truth the Krylov and exponential-sum paths are
// measured against.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "sincmf/error.hpp"
#include "sincmf/scalar.hpp"
#include "sincmf/sparse.hpp"

namespace sincmf {

inline constexpr Eigen::Index kDenseOracleMaxOrder = 5000;

/// Dense symmetric matrix with its eigendecomposition cached on demand.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;

  explicit DenseSymMatrix(Eigen::MatrixXd a) : a_(std::move(a)) {
    detail::require(a_.rows() == a_.cols(), ErrorCategory::dimension_mismatch, "DenseSymMatrix: not square");
    detail::require(a_.rows() <= kDenseOracleMaxOrder, ErrorCategory::scale_guard,
                    "DenseSymMatrix: order " + std::to_string(a_.rows()) + " exceeds the dense oracle limit of 5000");
    if (a_.size() == 0) return;
    const double amax = a_.cwiseAbs().maxCoeff();
    const double asym = (a_ - a_.transpose()).cwiseAbs().maxCoeff();
    detail::require(asym <= 1e-12 * amax, ErrorCategory::invalid_argument,
                    "DenseSymMatrix: matrix is not symmetric");
  }

  explicit DenseSymMatrix(const SparseSymMatrix& s) : DenseSymMatrix(checked_dense(s)) {}

  Eigen::Index order() const noexcept { return a_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }

 private:
  static Eigen::MatrixXd checked_dense(const SparseSymMatrix& s) {
    detail::require(s.order() <= kDenseOracleMaxOrder, ErrorCategory::scale_guard,
                    "DenseSymMatrix: order " + std::to_string(s.order()) + " exceeds the dense oracle limit of 5000");
    return s.to_dense();
  }

  Eigen::MatrixXd a_;
};

/// A = Q diag(lambda) Q^T, ascending eigenvalues.
struct SymEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  explicit SymEigen(const DenseSymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix());
    detail::require(es.info() == Eigen::Success, ErrorCategory::convergence,
                    "symmetric eigendecomposition did not converge");
    values = es.eigenvalues();
    vectors = es.eigenvectors();
  }

  /// Q f(Lambda) Q^T v for a real-valued f.
  template <class F>
  Vec apply(F&& f, const Vec& v) const {
    detail::require(v.size() == values.size(), ErrorCategory::dimension_mismatch, "dense apply: vector size mismatch");
    Vec c = vectors.transpose() * v;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= f(values(i));
    return vectors * c;
  }

  /// Q f(Lambda) Q^T v for a complex-valued f.
  template <class F>
  CVec apply_complex(F&& f, const Vec& v) const {
    detail::require(v.size() == values.size(), ErrorCategory::dimension_mismatch, "dense apply: vector size mismatch");
    const Vec c = vectors.transpose() * v;
    CVec d(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) d(i) = f(values(i)) * c(i);
    return vectors.cast<cplx>() * d;
  }
};

/// f(A) = Q f(Lambda) Q^T for a real-valued scalar function f.
template <class F>
DenseSymMatrix funm_sym(const DenseSymMatrix& a, F&& f) {
  const SymEigen eig(a);
  Eigen::VectorXd fl(eig.values.size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(eig.values(i));
  Eigen::MatrixXd r = eig.vectors * fl.asDiagonal() * eig.vectors.transpose();
  r = 0.5 * (r + r.transpose()).eval();
  return DenseSymMatrix(std::move(r));
}

inline Vec sinc_apply_dense(const DenseSymMatrix& a, const Vec& v) {
  return SymEigen(a).apply([](double x) { return sinc(x); }, v);
}

inline Vec psi_apply_dense(const DenseSymMatrix& a, const Vec& v) {
  return SymEigen(a).apply([](double x) { return psi(x); }, v);
}

inline Vec sigma_apply_dense(const DenseSymMatrix& a, const Vec& v) {
  return SymEigen(a).apply([](double x) { return sigma(x); }, v);
}

/// exp(-i t A) = Q exp(-i t Lambda) Q^T.
inline Eigen::MatrixXcd expm_i_dense(const DenseSymMatrix& a, double t) {
  const SymEigen eig(a);
  Eigen::VectorXcd d(eig.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(cplx{0.0, -t * eig.values(i)});
  const Eigen::MatrixXcd q = eig.vectors.cast<cplx>();
  return q * d.asDiagonal() * q.transpose();
}

}  // namespace sincmf
