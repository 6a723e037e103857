#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "stokes_summa/cover.hpp"

namespace stokes_summa {

/// Sparse formal power series in t with z-dependent complex coefficients.
/// The solutions of interest live on the powers t^{n(q+1)}, so a stride is
/// carried along: coefficients are zero off the stride lattice.
///
/// Besides the plain coefficient evaluator a series may carry its
/// coefficients as (log-magnitude, phase) pairs. Factorial-type
/// coefficients overflow double around n = 171 while their Borel-divided
/// ratios stay tame; the log channel keeps those quotients finite.
struct FormalSeries {
  using CoeffFn = std::function<complex(int power, complex z)>;
  /// (log |c|, arg c); log |c| = -inf encodes a zero coefficient.
  using LogCoeffFn = std::function<std::array<double, 2>(int power, complex z)>;

  CoeffFn coefficient;  // total for every power up to any truncation order
  int stride = 1;
  LogCoeffFn log_coefficient;  // optional

  complex coeff(int power, complex z) const { return coefficient(power, z); }

  bool has_log_channel() const { return static_cast<bool>(log_coefficient); }

  std::array<double, 2> log_coeff(int power, complex z) const {
    if (log_coefficient) return log_coefficient(power, z);
    const complex c = coefficient(power, z);
    if (c == complex(0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
    return {std::log(std::abs(c)), std::arg(c)};
  }

  /// Truncated sum at (t, z), including the first n_terms stride powers.
  complex partial_sum(complex t, complex z, int n_terms) const {
    complex acc(0.0);
    complex tn(1.0);
    complex tstride(1.0);
    for (int i = 0; i < stride; ++i) tstride *= t;
    for (int n = 0; n < n_terms; ++n) {
      acc += coefficient(n * stride, z) * tn;
      tn *= tstride;
    }
    return acc;
  }
};

}  // namespace stokes_summa
