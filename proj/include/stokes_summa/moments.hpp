#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/gamma.hpp"

namespace stokes_summa {

/// Moment function of real order s: a positive function on [0, oo) with
/// m(0) = 1 growing like Gamma_s. Built from Gamma_s atoms and closed under
/// product and quotient; the order adds under products and subtracts under
/// quotients. Evaluation is carried in log space so that m(n) for large n
/// never overflows intermediate arithmetic.
class MomentFunction {
 public:
  MomentFunction() : MomentFunction(one()) {}

  double order() const { return order_; }
  const std::string& expression() const { return expr_; }

  double operator()(double u) const { return std::exp(log_eval_(u)); }
  double log_at(double u) const { return log_eval_(u); }

  /// The constant moment function 1 (order 0).
  static MomentFunction one() {
    return MomentFunction(0.0, [](double) { return 0.0; }, "1");
  }

  /// Gamma_s as a moment function of order s.
  static MomentFunction gamma_moment(double s) {
    return MomentFunction(
        s, [s](double u) { return log_gamma_s(s, u); },
        "Gamma_" + trim(s));
  }

  friend MomentFunction moment_product(const MomentFunction& a, const MomentFunction& b) {
    auto fa = a.log_eval_;
    auto fb = b.log_eval_;
    return MomentFunction(a.order_ + b.order_,
                          [fa, fb](double u) { return fa(u) + fb(u); },
                          "(" + a.expr_ + ")*(" + b.expr_ + ")");
  }

  friend MomentFunction moment_quotient(const MomentFunction& a, const MomentFunction& b) {
    auto fa = a.log_eval_;
    auto fb = b.log_eval_;
    return MomentFunction(a.order_ - b.order_,
                          [fa, fb](double u) { return fa(u) - fb(u); },
                          "(" + a.expr_ + ")/(" + b.expr_ + ")");
  }

  /// Integer power m^n (n >= 0).
  static MomentFunction power(const MomentFunction& a, int n) {
    if (n < 0) throw domain_error("MomentFunction::power: negative exponent");
    auto fa = a.log_eval_;
    return MomentFunction(a.order_ * n,
                          [fa, n](double u) { return n * fa(u); },
                          "(" + a.expr_ + ")^" + std::to_string(n));
  }

 private:
  MomentFunction(double order, std::function<double(double)> log_eval, std::string expr)
      : order_(order), log_eval_(std::move(log_eval)), expr_(std::move(expr)) {}

  static std::string trim(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  double order_;
  std::function<double(double)> log_eval_;
  std::string expr_;
};

/// Affine-envelope attestation of the growth sandwich
/// a c^n Gamma_s(n) <= m(n) <= A C^n Gamma_s(n): fit the residual
/// y_n = log(m(n)/Gamma_s(n)) by least squares and widen the intercepts
/// until every residual lies between the two envelopes.
struct MomentSandwich {
  double a, c;  // lower envelope a * c^n
  double A, C;  // upper envelope A * C^n
  double max_residual;
  bool attested;
};

inline MomentSandwich attest_moment_sandwich(const MomentFunction& m, int n_max = 40) {
  const double s = m.order();
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  std::vector<double> ys(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double y = m.log_at(n) - log_gamma_s(s, n);
    ys[static_cast<std::size_t>(n)] = y;
    sx += n;
    sxx += static_cast<double>(n) * n;
    sy += y;
    sxy += n * y;
  }
  const int cnt = n_max + 1;
  const double det = cnt * sxx - sx * sx;
  if (det == 0.0) return MomentSandwich{0, 0, 0, 0, 0, false};
  const double slope = (cnt * sxy - sx * sy) / det;
  const double icept = (sy - slope * sx) / cnt;
  double lo = 0.0, hi = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double r = ys[static_cast<std::size_t>(n)] - (icept + slope * n);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return MomentSandwich{std::exp(icept + lo), std::exp(slope),
                        std::exp(icept + hi), std::exp(slope),
                        std::max(std::abs(lo), std::abs(hi)), true};
}

/// Slope of log m(n) against n log n; estimates the order of a moment
/// function from its values alone. The regressors n, log n and 1 absorb
/// the C K^n prefactors and the Stirling half-log correction, leaving the
/// order as the leading coefficient.
inline double fit_moment_order(const MomentFunction& m, int n_max = 60) {
  constexpr int dim = 4;
  double A[dim][dim] = {};
  double b[dim] = {};
  for (int n = 2; n <= n_max; ++n) {
    const double ln = std::log(static_cast<double>(n));
    const double x[dim] = {n * ln, static_cast<double>(n), ln, 1.0};
    const double y = m.log_at(n);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) A[i][j] += x[i] * x[j];
      b[i] += x[i] * y;
    }
  }
  // Gaussian elimination with partial pivoting
  for (int c = 0; c < dim; ++c) {
    int piv = c;
    for (int rr = c + 1; rr < dim; ++rr)
      if (std::abs(A[rr][c]) > std::abs(A[piv][c])) piv = rr;
    if (A[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < dim; ++j) std::swap(A[c][j], A[piv][j]);
      std::swap(b[c], b[piv]);
    }
    for (int rr = c + 1; rr < dim; ++rr) {
      const double f = A[rr][c] / A[c][c];
      for (int j = c; j < dim; ++j) A[rr][j] -= f * A[c][j];
      b[rr] -= f * b[c];
    }
  }
  double x[dim];
  for (int i = dim - 1; i >= 0; --i) {
    double acc = b[i];
    for (int j = i + 1; j < dim; ++j) acc -= A[i][j] * x[j];
    x[i] = acc / A[i][i];
  }
  return x[0];
}

}  // namespace stokes_summa
