#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "sincmf/error.hpp"
#include "sincmf/scalar.hpp"

namespace sincmf {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sparse symmetric (assumed positive semi-definite) matrix in CSR form.
/// Symmetry is checked on construction; positive semi-definiteness is not.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  explicit SparseSymMatrix(SpMat a, double sym_tol = 1e-12) : a_(std::move(a)) {
    detail::require(a_.rows() == a_.cols(), ErrorCategory::dimension_mismatch,
                     "SparseSymMatrix: matrix is not square");
    a_.makeCompressed();
    const double amax = max_abs();
    const SpMat at = a_.transpose();
    const SpMat diff = a_ - at;
    double dmax = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
      for (SpMat::InnerIterator it(diff, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
    detail::require(dmax <= sym_tol * amax, ErrorCategory::invalid_argument,
                    "SparseSymMatrix: matrix is not symmetric (max |A - A^T| = " + std::to_string(dmax) + ")");
  }

  static SparseSymMatrix from_triplets(Eigen::Index n, const std::vector<Eigen::Triplet<double>>& t) {
    SpMat a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return SparseSymMatrix(std::move(a));
  }

  static SparseSymMatrix from_dense(const Eigen::MatrixXd& d, double drop_tol = 0.0) {
    SpMat a = d.sparseView(1.0, drop_tol);
    return SparseSymMatrix(std::move(a), 1e-10);
  }

  Eigen::Index order() const noexcept { return a_.rows(); }
  Eigen::Index nonzeros() const noexcept { return a_.nonZeros(); }
  const SpMat& matrix() const noexcept { return a_; }

  Vec operator*(const Vec& x) const {
    detail::require(x.size() == order(), ErrorCategory::dimension_mismatch, "SparseSymMatrix: matvec size mismatch");
    return a_ * x;
  }
  CVec operator*(const CVec& x) const {
    detail::require(x.size() == order(), ErrorCategory::dimension_mismatch, "SparseSymMatrix: matvec size mismatch");
    return a_.cast<cplx>() * x;
  }

  SparseSymMatrix scaled(double c) const {
    SparseSymMatrix out;
    out.a_ = a_ * c;
    return out;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (int k = 0; k < a_.outerSize(); ++k)
      for (SpMat::InnerIterator it(a_, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
  }

  bool is_zero() const noexcept { return max_abs() == 0.0; }

  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(a_); }

 private:
  SpMat a_;
};

/// Power-method estimate of the spectral radius: at most `max_iter`
/// iterations, stopping when successive Rayleigh quotients agree to
/// `rtol`. Deterministic start vector.
inline double estimate_spectral_radius(const SparseSymMatrix& a, int max_iter = 30, double rtol = 1e-3) {
  const Eigen::Index n = a.order();
  if (n == 0 || a.is_zero()) return 0.0;
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Vec x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = dist(gen);
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec y = a * x;
    const double next = std::abs(x.dot(y));
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (it > 0 && std::abs(next - lambda) <= rtol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace sincmf
