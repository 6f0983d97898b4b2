#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "sincmf/error.hpp"

namespace sincmf {

/// Gauss-Legendre rule on (a, b): ascending nodes, positive weights.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = -1.0;
  double b = 1.0;

  std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace detail

/// nu-point Gauss-Legendre rule mapped to (a, b). Nodes come from the
/// Golub-Welsch eigenproblem and are then refined by Newton on P_nu; the
/// rule is symmetrized so that mirrored nodes and weights agree exactly.
inline QuadratureRule gauss_legendre(int nu, double a, double b) {
  detail::require_arg(nu >= 1, "gauss_legendre: need at least one node");
  detail::require_arg(std::isfinite(a) && std::isfinite(b) && a < b,
                      "gauss_legendre: invalid interval");
  std::vector<double> x(static_cast<std::size_t>(nu)), w(static_cast<std::size_t>(nu));
  if (nu == 1) {
    x[0] = 0.0;
    w[0] = 2.0;
  } else {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nu, nu);
    for (int k = 1; k < nu; ++k) {
      const double beta = k / std::sqrt(4.0 * k * k - 1.0);
      jac(k, k - 1) = beta;
      jac(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    detail::require(es.info() == Eigen::Success, ErrorCategory::convergence,
                    "gauss_legendre: Jacobi eigenproblem failed");
    for (int i = 0; i < nu; ++i) {
      double xi = es.eigenvalues()(i);
      for (int it = 0; it < 3; ++it) {
        const auto [p, dp] = detail::legendre_with_derivative(nu, xi);
        xi -= p / dp;
      }
      const auto [p, dp] = detail::legendre_with_derivative(nu, xi);
      (void)p;
      x[static_cast<std::size_t>(i)] = xi;
      w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    for (int i = 0; i < nu / 2; ++i) {
      const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(nu - 1 - i);
      const double xs = 0.5 * (x[hi] - x[lo]);
      const double ws = 0.5 * (w[hi] + w[lo]);
      x[lo] = -xs;
      x[hi] = xs;
      w[lo] = w[hi] = ws;
    }
    if (nu % 2 == 1) x[static_cast<std::size_t>(nu / 2)] = 0.0;
  }
  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  rule.nodes.resize(x.size());
  rule.weights.resize(w.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes[i] = mid + half * x[i];
    rule.weights[i] = half * w[i];
  }
  return rule;
}

}  // namespace sincmf
