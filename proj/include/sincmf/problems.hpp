#pragma once

// Test matrices and the synthetic oscillatory benchmark with its exact
// spectral reference solution.

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "sincmf/dense.hpp"
#include "sincmf/error.hpp"
#include "sincmf/integrators.hpp"
#include "sincmf/quadrature.hpp"
#include "sincmf/sparse.hpp"

namespace sincmf {

/// tridiag(-1, 2, -1), no 1/h^2 scaling.
inline SparseSymMatrix laplacian_1d(int n) {
  detail::require_arg(n >= 2, "laplacian_1d: n must be at least 2");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(3 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  return SparseSymMatrix::from_triplets(n, t);
}

/// 5-point Laplacian on a sqrt(n) x sqrt(n) grid with Dirichlet
/// truncation, no 1/h^2 scaling.
inline SparseSymMatrix laplacian_2d(int n) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  detail::require_arg(n >= 4 && side * side == n, "laplacian_2d: n must be a perfect square >= 4");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(5 * static_cast<std::size_t>(n));
  auto id = [side](int i, int j) { return i * side + j; };
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      const int r = id(i, j);
      t.emplace_back(r, r, 4.0);
      if (i > 0) t.emplace_back(r, id(i - 1, j), -1.0);
      if (i + 1 < side) t.emplace_back(r, id(i + 1, j), -1.0);
      if (j > 0) t.emplace_back(r, id(i, j - 1), -1.0);
      if (j + 1 < side) t.emplace_back(r, id(i, j + 1), -1.0);
    }
  return SparseSymMatrix::from_triplets(n, t);
}

/// Pentadiagonal Toeplitz T_N with diagonals (1, -10, 0, 10, 1) from the
/// second subdiagonal to the second superdiagonal. Its eigenvalues lie
/// near the curve 2 cos(2 theta) + 20 i sin(theta).
inline SpMat rutishauser_factor(int n) {
  detail::require_arg(n >= 5, "rutishauser: N must be at least 5");
  constexpr int offsets[] = {-2, -1, 1, 2};
  constexpr double values[] = {1.0, -10.0, 10.0, 1.0};
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < 4; ++d) {
      const int j = i + offsets[d];
      if (j >= 0 && j < n) t.emplace_back(i, j, values[d]);
    }
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

/// A = T_N T_N^T, symmetric positive definite by construction.
inline SparseSymMatrix rutishauser(int n) {
  const SpMat tn = rutishauser_factor(n);
  SpMat a = tn * SpMat(tn.transpose());
  return SparseSymMatrix(std::move(a));
}

/// y'' + A y = 1/2 sin(t) * ones, y(0) = ones, y'(0) = 0.
struct SyntheticProblem {
  int N = 0;
  SparseSymMatrix A;
  double forcing_scale = 0.5;
  Vec y0;
  Vec y1;

  Vec forcing(double t) const { return Vec::Constant(A.order(), forcing_scale * std::sin(t)); }
};

inline SyntheticProblem synthetic_problem(int n) {
  SyntheticProblem p;
  p.N = n;
  p.A = rutishauser(n);
  p.y0 = Vec::Ones(n);
  p.y1 = Vec::Zero(n);
  return p;
}

inline SecondOrderIVP to_ivp(const SyntheticProblem& p, double tf = 1.0) {
  SecondOrderIVP ivp;
  ivp.A = p.A;
  const Eigen::Index n = p.A.order();
  const double scale = p.forcing_scale;
  ivp.forcing = [n, scale](double t) -> Vec { return Vec::Constant(n, scale * std::sin(t)); };
  ivp.y0 = p.y0;
  ivp.y1 = p.y1;
  ivp.t0 = 0.0;
  ivp.tf = tf;
  return ivp;
}

inline constexpr Eigen::Index kReferenceMaxOrder = 2000;

namespace detail {

// Solution of u'' + lambda u = c sin t, u(0) = a, u'(0) = 0.
inline double forced_mode(double lambda, double a, double c, double t) {
  const double omega = std::sqrt(std::max(lambda, 0.0));
  const double homogeneous = a * std::cos(omega * t);
  if (std::abs(lambda - 1.0) > 1e-4) {
    // sin(omega t)/omega, continuous at omega = 0
    const double sinc_term = omega == 0.0 ? t : std::sin(omega * t) / omega;
    return homogeneous + c * (std::sin(t) - sinc_term) / (lambda - 1.0);
  }
  // Near resonance: Duhamel integral int_0^t sin(omega (t-s))/omega c sin(s) ds.
  const auto rule = gauss_legendre(40, 0.0, t > 0.0 ? t : 1.0);
  if (t == 0.0) return a;
  double acc = 0.0;
  for (std::size_t p = 0; p < rule.size(); ++p) {
    const double s = rule.nodes[p];
    acc += rule.weights[p] * std::sin(omega * (t - s)) / omega * std::sin(s);
  }
  return homogeneous + c * acc;
}

}  // namespace detail

/// Exact solution by diagonalizing A: every mode is a forced harmonic
/// oscillator solved in closed form.
class SyntheticReference {
 public:
  explicit SyntheticReference(const SyntheticProblem& p) : eig_(checked(p)), forcing_scale_(p.forcing_scale) {
    a_ = eig_.vectors.transpose() * p.y0;
    const Vec ones = Vec::Ones(p.A.order());
    c_ = forcing_scale_ * (eig_.vectors.transpose() * ones);
    detail::require((p.y1.array() == 0.0).all(), ErrorCategory::invalid_argument,
                    "synthetic reference: only zero initial velocity is supported");
  }

  Vec operator()(double t) const {
    Vec m(a_.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = detail::forced_mode(eig_.values(i), a_(i), c_(i), t);
    return eig_.vectors * m;
  }

  double lambda_max() const { return eig_.values(eig_.values.size() - 1); }

 private:
  static DenseSymMatrix checked(const SyntheticProblem& p) {
    detail::require(p.A.order() <= kReferenceMaxOrder, ErrorCategory::scale_guard,
                    "synthetic reference: order exceeds 2000");
    return DenseSymMatrix(p.A);
  }

  SymEigen eig_;
  double forcing_scale_;
  Vec a_, c_;
};

inline Vec synthetic_reference(const SyntheticProblem& p, double t) { return SyntheticReference(p)(t); }

}  // namespace sincmf
