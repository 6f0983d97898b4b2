#pragma once

// Scalar sinc and the two Gautschi filter functions.

#include <cmath>
#include <complex>

namespace sincmf {

using cplx = std::complex<double>;

namespace detail {

// Below this modulus the Taylor series is used instead of sin(z)/z.
inline constexpr double kSincSeriesThreshold = 1e-2;
inline constexpr int kSincSeriesTerms = 8;

// sum_{k<terms} (-1)^k w^k / (2k+1)!, i.e. sinc(sqrt(w)).
inline cplx sinc_series_in_square(cplx w) {
  cplx term{1.0, 0.0};
  cplx sum = term;
  for (int k = 1; k < kSincSeriesTerms; ++k) {
    term *= -w / static_cast<double>((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

}  // namespace detail

/// Unnormalized sinc: sin(z)/z, with value 1 at the origin.
inline cplx sinc(cplx z) {
  if (std::abs(z) < detail::kSincSeriesThreshold) return detail::sinc_series_in_square(z * z);
  return std::sin(z) / z;
}

inline double sinc(double x) {
  if (std::abs(x) < detail::kSincSeriesThreshold) return detail::sinc_series_in_square({x * x, 0.0}).real();
  return std::sin(x) / x;
}

/// sigma(z) = sinc(sqrt z). Entire in z; the branch of the square root is
/// irrelevant because sinc is even.
inline cplx sigma(cplx z) {
  constexpr double t = detail::kSincSeriesThreshold * detail::kSincSeriesThreshold;
  if (std::abs(z) < t) return detail::sinc_series_in_square(z);
  return sinc(std::sqrt(z));
}

/// psi(z) = sinc(sqrt(z) / 2)^2.
inline cplx psi(cplx z) {
  const cplx s = sigma(z / 4.0);
  return s * s;
}

inline double sigma(double x) { return sigma(cplx{x, 0.0}).real(); }
inline double psi(double x) { return psi(cplx{x, 0.0}).real(); }

}  // namespace sincmf
