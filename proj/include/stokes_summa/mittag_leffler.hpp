#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/gamma.hpp"

namespace stokes_summa {

namespace detail {

struct MlSum {
  complex value;
  double error;  // a-posteriori absolute estimate
};

/// Compensated Taylor sum of E_alpha. Tracks the largest partial sum so the
/// cancellation loss is part of the reported error.
inline MlSum ml_taylor(double alpha, complex z, int max_terms = 2000) {
  complex sum(0.0), comp(0.0);
  complex zn(1.0);
  double max_mag = 0.0;
  double last_term = std::numeric_limits<double>::infinity();
  int n = 0;
  for (; n < max_terms; ++n) {
    const complex term = zn * std::exp(-log_gamma(1.0 + alpha * n));
    // Kahan step
    const complex y = term - comp;
    const complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    max_mag = std::max(max_mag, std::abs(sum));
    last_term = std::abs(term);
    zn *= z;
    if (last_term < 1e-18 * (max_mag + 1.0) && n > alpha * 2) break;
  }
  const double err = last_term + 2e-16 * max_mag * std::sqrt(static_cast<double>(n + 1));
  return MlSum{sum, err};
}

/// Large-|z| evaluation for 0 < alpha < 2: sum of exponential branches plus
/// the algebraic series -sum z^{-j}/Gamma(1-alpha j) truncated at its
/// smallest term.
inline MlSum ml_asymptotic(double alpha, complex z) {
  const double az = std::arg(z);
  complex expo(0.0);
  // branches z^{1/alpha} e^{2 pi i m / alpha} with |arg z + 2 pi m| <= 3 pi alpha / 4
  for (int m = -2; m <= 2; ++m) {
    const double theta = az + 2.0 * pi * m;
    if (std::abs(theta) <= 0.75 * pi * alpha + 1e-12) {
      const complex w = std::pow(std::abs(z), 1.0 / alpha) *
                        std::exp(complex(0.0, theta / alpha));
      expo += std::exp(w) / alpha;
    }
  }
  complex alg(0.0);
  double best = std::numeric_limits<double>::infinity();
  complex zinv = 1.0 / z;
  complex zj = zinv;
  for (int j = 1; j <= 120; ++j) {
    const double g = 1.0 - alpha * j;
    double mag;
    complex term(0.0);
    if (g == std::floor(g) && g <= 0.0) {
      mag = 0.0;  // 1/Gamma at a pole
    } else {
      const double inv_gamma =
          (g > 0.0) ? std::exp(-log_gamma(g))
                    : std::sin(pi * g) * std::exp(log_gamma(1.0 - g)) / pi;
      term = zj * inv_gamma;
      mag = std::abs(term);
    }
    if (mag > best && j > 3) break;  // past optimal truncation
    alg -= term;
    if (mag > 0.0) best = mag;
    zj *= zinv;
    if (best < 1e-18) break;
  }
  return MlSum{expo + alg, best + 1e-16 * std::abs(expo)};
}

}  // namespace detail

/// Mittag-Leffler function E_alpha(z) = sum z^n / Gamma(1 + alpha n).
/// Taylor summation inside the switchover radius, exponential plus
/// algebraic asymptotics beyond. Throws accuracy_error when neither route
/// reaches the requested relative tolerance.
inline complex mittag_leffler(double alpha, complex z, double rel_tol = 1e-8) {
  if (!(alpha > 0.0)) throw domain_error("mittag_leffler: alpha must be positive");
  if (z == complex(0.0)) return complex(1.0);
  if (alpha == 1.0) return std::exp(z);
  if (alpha == 2.0) return std::cosh(std::sqrt(z));

  // switchover radius: keep the largest Taylor term below ~e^12 relative to
  // the answer so cancellation stays under control
  const double rho = std::pow(12.0 / alpha, alpha);
  if (std::abs(z) <= std::max(2.0, rho)) {
    auto s = detail::ml_taylor(alpha, z);
    if (s.error <= rel_tol * std::max(std::abs(s.value), 1e-300)) return s.value;
    if (alpha < 2.0) {
      auto a = detail::ml_asymptotic(alpha, z);
      if (a.error <= rel_tol * std::max(std::abs(a.value), 1e-300)) return a.value;
    }
    throw accuracy_error("mittag_leffler: tolerance not reached", s.error);
  }
  if (alpha < 2.0) {
    auto a = detail::ml_asymptotic(alpha, z);
    if (a.error <= rel_tol * std::max(std::abs(a.value), 1e-300)) return a.value;
    auto s = detail::ml_taylor(alpha, z, 4000);
    if (s.error <= rel_tol * std::max(std::abs(s.value), 1e-300)) return s.value;
    throw accuracy_error("mittag_leffler: tolerance not reached", a.error);
  }
  auto s = detail::ml_taylor(alpha, z, 4000);
  if (s.error <= rel_tol * std::max(std::abs(s.value), 1e-300)) return s.value;
  throw accuracy_error("mittag_leffler: tolerance not reached", s.error);
}

}  // namespace stokes_summa
