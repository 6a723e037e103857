#pragma once

#include <cmath>
#include <complex>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"

namespace stokes_summa {

namespace detail {

// Lanczos rational approximation, g = 607/128, 15 terms. Relative error is
// below 1e-13 on the half-plane Re z > 0.5 in double precision.
inline constexpr double lanczos_g = 4.7421875;
inline constexpr double lanczos_coeff[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5, 1.5808870322491248884e-4,
    -2.1026444172410488319e-4,  2.1743961811521264320e-4,  -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5, 3.6899182659531622704e-6};

inline constexpr double log_sqrt_2pi = 0.91893853320467274178;

template <class T>
T lanczos_sum(const T& zm1) {
  T s = T(lanczos_coeff[0]);
  for (int i = 1; i < 15; ++i) s += T(lanczos_coeff[i]) / (zm1 + T(i));
  return s;
}

}  // namespace detail

/// log Gamma(x) for real x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
  if (x < 0.5) {
    // reflection keeps the Lanczos argument away from zero
    return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
  }
  const double zm1 = x - 1.0;
  const double t = zm1 + detail::lanczos_g + 0.5;
  return detail::log_sqrt_2pi + (zm1 + 0.5) * std::log(t) - t +
         std::log(detail::lanczos_sum(zm1));
}

inline double gamma_fn(double x) {
  if (x > 0.0) return std::exp(log_gamma(x));
  // negative non-integer arguments via reflection
  if (x == std::floor(x)) throw domain_error("gamma_fn: pole at non-positive integer");
  return pi / (std::sin(pi * x) * std::exp(log_gamma(1.0 - x)));
}

/// Gamma on the complex plane (reflection formula for Re z < 0.5).
inline complex gamma_fn(complex z) {
  if (z.imag() == 0.0 && z.real() > 0.0) return complex(gamma_fn(z.real()), 0.0);
  if (z.real() < 0.5) {
    const complex s = std::sin(pi * z);
    if (s == complex(0.0, 0.0)) throw domain_error("gamma_fn: pole at non-positive integer");
    return pi / (s * gamma_fn(1.0 - z));
  }
  const complex zm1 = z - 1.0;
  const complex t = zm1 + (detail::lanczos_g + 0.5);
  return std::exp(detail::log_sqrt_2pi + (zm1 + 0.5) * std::log(t) - t) *
         detail::lanczos_sum(zm1);
}

/// Gamma_s(u): Gamma(1 + s u) for s >= 0, 1 / Gamma(1 - s u) for s < 0.
inline double gamma_s(double s, double u) {
  if (u < 0.0) throw domain_error("gamma_s: u must be nonnegative");
  if (s >= 0.0) return std::exp(log_gamma(1.0 + s * u));
  return std::exp(-log_gamma(1.0 - s * u));
}

/// log Gamma_s(u); the numerically safe route for large arguments.
inline double log_gamma_s(double s, double u) {
  if (u < 0.0) throw domain_error("log_gamma_s: u must be nonnegative");
  if (s >= 0.0) return log_gamma(1.0 + s * u);
  return -log_gamma(1.0 - s * u);
}

}  // namespace stokes_summa
