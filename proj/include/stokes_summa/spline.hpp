#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"

namespace stokes_summa {

/// Natural cubic spline with complex values over a strictly increasing
/// real grid. Evaluation outside the grid returns zero; the kernel tables
/// built on top only ever query the decayed region out there.
class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(std::vector<double> x, std::vector<complex> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw domain_error("CubicSpline: need >= 3 points");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i] < x_[i + 1])) throw domain_error("CubicSpline: grid must increase");
    m_.assign(n, complex(0.0));
    // tridiagonal solve for second derivatives (natural ends)
    std::vector<double> diag(n, 0.0), sub(n, 0.0);
    std::vector<complex> rhs(n, complex(0.0));
    diag[0] = 1.0;
    diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      sub[i] = h0;
      diag[i] = 2.0 * (h0 + h1);
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // forward elimination (upper diagonal equals next sub entry)
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) c[i] = x_[i + 1] - x_[i];
    for (std::size_t i = 1; i < n; ++i) {
      const double w = sub[i] / diag[i - 1];
      diag[i] -= w * c[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m_[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
      m_[i] = (rhs[i] - c[i] * m_[i + 1]) / diag[i];
  }

  bool empty() const { return x_.empty(); }
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

  complex eval(double x) const {
    if (x_.empty() || x < x_.front() || x > x_.back()) return complex(0.0);
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i =
        std::min(x_.size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                                    0, (it - x_.begin()) - 1)));
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h) / 6.0;
  }

 private:
  std::vector<double> x_;
  std::vector<complex> y_;
  std::vector<complex> m_;  // second derivatives
};

}  // namespace stokes_summa
