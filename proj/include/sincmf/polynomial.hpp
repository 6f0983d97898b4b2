#pragma once

// Dense polynomials in the monomial basis, generalized Laguerre
// polynomials, companion-matrix root finding and the tabulated diagonal
// Pade denominators of sinc.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sincmf/error.hpp"
#include "sincmf/scalar.hpp"

namespace sincmf {

/// Polynomial with complex coefficients, ascending degree order.
/// Trailing zero coefficients are trimmed so the leading coefficient is
/// nonzero; the zero polynomial is stored as {0}.
class Polynomial {
 public:
  Polynomial() : coeffs_{cplx{0.0}} {}

  explicit Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial from_real(const std::vector<double>& coeffs) {
    return Polynomial(std::vector<cplx>(coeffs.begin(), coeffs.end()));
  }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == cplx{0.0}; }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  cplx operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  cplx leading() const noexcept { return coeffs_.back(); }

  bool has_real_coefficients() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c.imag() == 0.0; });
  }

  /// Horner evaluation.
  cplx operator()(cplx z) const noexcept {
    cplx acc{0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Euclidean norm of the coefficient vector.
  double norm() const noexcept {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
  }

  /// p(c z) as a polynomial in z.
  Polynomial compose_scaled(cplx c) const {
    std::vector<cplx> out(coeffs_.size());
    cplx pw{1.0};
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      out[k] = coeffs_[k] * pw;
      pw *= c;
    }
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> out(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{0.0});
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
  }

 private:
  void trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == cplx{0.0}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(cplx{0.0});
  }

  std::vector<cplx> coeffs_;
};

inline constexpr int kMaxLaguerreDegree = 64;
inline constexpr int kMaxRootDegree = 20;

/// Generalized Laguerre polynomial L_n^(alpha)(x) from the three-term
/// recurrence (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}.
/// Valid for any complex alpha, including the negative integers used by
/// the pole families.
inline Polynomial laguerre_coeffs(int n, cplx alpha) {
  detail::require_arg(n >= 0 && n <= kMaxLaguerreDegree,
                      "laguerre_coeffs: degree " + std::to_string(n) + " outside [0, 64]");
  std::vector<cplx> prev{cplx{1.0}};
  if (n == 0) return Polynomial(prev);
  std::vector<cplx> cur{1.0 + alpha, cplx{-1.0}};
  for (int k = 1; k < n; ++k) {
    std::vector<cplx> next(static_cast<std::size_t>(k) + 2, cplx{0.0});
    const cplx a = 2.0 * k + 1.0 + alpha;
    const cplx b = static_cast<double>(k) + alpha;
    for (std::size_t j = 0; j < cur.size(); ++j) {
      next[j] += a * cur[j];
      next[j + 1] -= cur[j];
    }
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= b * prev[j];
    for (auto& c : next) c /= static_cast<double>(k + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return Polynomial(std::move(cur));
}

namespace detail {

// Parlett-Reinsch balancing with radix-2 scaling (similarity transform).
template <class Mat>
void balance(Mat& a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

// Up to two Newton corrections, kept only when they reduce |p(z)|.
inline cplx polish_root(const Polynomial& p, cplx z) {
  std::vector<cplx> dc;
  for (int k = 1; k <= p.degree(); ++k) dc.push_back(static_cast<double>(k) * p[k]);
  const Polynomial dp(std::move(dc));
  for (int it = 0; it < 2; ++it) {
    const cplx d = dp(z);
    if (d == cplx{0.0}) break;
    const cplx cand = z - p(z) / d;
    if (!(std::abs(p(cand)) < std::abs(p(z)))) break;
    z = cand;
  }
  return z;
}

}  // namespace detail

/// All complex roots of p via the eigenvalues of its balanced companion
/// matrix. Real-coefficient input goes through the real eigensolver so
/// complex roots come out as exact conjugate pairs.
inline std::vector<cplx> poly_roots(const Polynomial& p) {
  const int n = p.degree();
  detail::require_arg(n >= 1, "poly_roots: constant polynomial has no roots");
  detail::require_arg(n <= kMaxRootDegree,
                      "poly_roots: degree " + std::to_string(n) + " exceeds the supported maximum of 20");
  std::vector<cplx> roots;
  roots.reserve(static_cast<std::size_t>(n));
  if (p.has_real_coefficients()) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    const double lead = p.leading().real();
    for (int j = 0; j < n; ++j) c(0, j) = -p[n - 1 - j].real() / lead;
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    detail::balance(c);
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    detail::require(es.info() == Eigen::Success, ErrorCategory::convergence,
                    "poly_roots: companion eigensolver did not converge");
    for (Eigen::Index i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i));
  } else {
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) c(0, j) = -p[n - 1 - j] / p.leading();
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    detail::balance(c);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
    detail::require(es.info() == Eigen::Success, ErrorCategory::convergence,
                    "poly_roots: companion eigensolver did not converge");
    for (Eigen::Index i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i));
  }
  const bool real = p.has_real_coefficients();
  for (auto& r : roots) {
    if (real && r.imag() != 0.0) continue;  // keep conjugate pairs exact
    r = detail::polish_root(p, r);
    if (real) r = {r.real(), 0.0};
  }
  if (real) {
    // Polish conjugate pairs together so they stay exact mirrors.
    for (auto& r : roots) {
      if (r.imag() > 0.0) {
        const cplx polished = detail::polish_root(p, r);
        const cplx old = r;
        for (auto& s : roots)
          if (s == std::conj(old)) s = std::conj(polished);
        r = polished;
      }
    }
  }
  return roots;
}

/// Exact rational number with 128-bit parts, used for the Pade table.
struct Rational {
  __int128 num;
  __int128 den;

  double to_double() const noexcept {
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
  }
};

namespace detail {

consteval __int128 i128(const char* s) {
  __int128 v = 0;
  for (; *s != '\0'; ++s) v = v * 10 + (*s - '0');
  return v;
}

}  // namespace detail

inline constexpr std::array<int, 5> kPadeSincDegrees{2, 4, 6, 8, 10};

/// Denominator coefficients (ascending, monomial basis) of the diagonal
/// [n/n] Pade approximant of sinc, n in {2, 4, 6, 8, 10}, as exact
/// rationals.
inline std::vector<Rational> pade_sinc_denominator_rational(int n) {
  using detail::i128;
  const Rational zero{0, 1}, one{1, 1};
  switch (n) {
    case 2:
      return {one, zero, {1, 20}};
    case 4:
      return {one, zero, {13, 396}, zero, {5, 11088}};
    case 6:
      return {one, zero, {1671, 69212}, zero, {97, 351384}, zero, {2623, 1644477120}};
    case 8:
      return {one,
              zero,
              {2290747, 120289892},
              zero,
              {1281433, 7217393520},
              zero,
              {560401, i128("562956694560")},
              zero,
              {1029037, i128("346781323848960")}};
    case 10:
      return {one,
              zero,
              {i128("34046903537"), i128("2167379498676")},
              zero,
              {i128("1679739379"), i128("13726736824948")},
              zero,
              {i128("101555058991"), i128("168015258737363520")},
              zero,
              {i128("3924840709"), i128("2016183104848362240")},
              zero,
              {i128("37291724011"), i128("11008359752472057830400")}};
    default:
      throw Error(ErrorCategory::invalid_argument,
                  "pade_sinc_denominator: degree " + std::to_string(n) + " not tabulated (use 2, 4, 6, 8 or 10)");
  }
}

inline Polynomial pade_sinc_denominator(int n) {
  const auto table = pade_sinc_denominator_rational(n);
  std::vector<cplx> c;
  c.reserve(table.size());
  for (const auto& q : table) c.emplace_back(q.to_double(), 0.0);
  return Polynomial(std::move(c));
}

}  // namespace sincmf
