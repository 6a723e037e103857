#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "stokes_summa/errors.hpp"

namespace stokes_summa {

using rational = boost::multiprecision::cpp_rational;
using Polynomial = std::vector<rational>;  // coefficient of z^j at index j

namespace detail {

inline Polynomial poly_derivative(const Polynomial& p, int times) {
  Polynomial q = p;
  for (int t = 0; t < times; ++t) {
    if (q.size() <= 1) return Polynomial{rational(0)};
    Polynomial d(q.size() - 1);
    for (std::size_t j = 1; j < q.size(); ++j) d[j - 1] = q[j] * static_cast<int>(j);
    q = std::move(d);
  }
  return q;
}

inline bool poly_is_zero(const Polynomial& p) {
  for (const auto& c : p)
    if (c != 0) return false;
  return true;
}

inline Polynomial poly_scale(const Polynomial& p, const rational& f) {
  Polynomial q = p;
  for (auto& c : q) c *= f;
  return q;
}

inline Polynomial poly_sub(const Polynomial& x, const Polynomial& y) {
  Polynomial q(std::max(x.size(), y.size()), rational(0));
  for (std::size_t j = 0; j < x.size(); ++j) q[j] += x[j];
  for (std::size_t j = 0; j < y.size(); ++j) q[j] -= y[j];
  return q;
}

inline rational rat_pow(const rational& base, int e) {
  if (e >= 0) {
    rational acc(1);
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
  }
  if (base == 0) throw domain_error("rat_pow: zero to a negative power");
  rational acc(1);
  for (int i = 0; i < -e; ++i) acc /= base;
  return acc;
}

inline rational factorial_rat(int n) {
  rational acc(1);
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace detail

struct ExactResidualReport {
  bool exact = true;
  int first_failure = -1;
};

/// Substitutes the truncated formal solution into the equation in exact
/// rational arithmetic. The coefficient of t^{n(q+1)-1} in
/// d_t u - a (d_t t)^p t^q d_z^r u must vanish identically as a polynomial
/// in z, which amounts to the recurrence
///   n(q+1) u_n = a (n(q+1))^p d_z^r u_{n-1},
/// for the closed-form coefficients u_n = a^n (n!)^{p-1} (q+1)^{n(p-1)}
/// phi^{(nr)}.
inline ExactResidualReport exact_pde_residual(int p, int q, int r, const rational& a,
                                              const Polynomial& phi, int n_terms) {
  if (p < 0 || q < 0 || r < 0) throw domain_error("exact_pde_residual: bad exponents");
  if (a == 0) throw domain_error("exact_pde_residual: a must be nonzero");
  const int qp1 = q + 1;
  auto coeff = [&](int n) -> Polynomial {
    const rational pref = detail::rat_pow(a, n) *
                          detail::rat_pow(detail::factorial_rat(n), p - 1) *
                          detail::rat_pow(rational(qp1), n * (p - 1));
    return detail::poly_scale(detail::poly_derivative(phi, n * r), pref);
  };
  Polynomial prev = coeff(0);
  for (int n = 1; n <= n_terms; ++n) {
    Polynomial un = coeff(n);
    const rational lhs_f = rational(n) * qp1;
    const rational rhs_f = a * detail::rat_pow(rational(n) * qp1, p);
    const Polynomial residual = detail::poly_sub(
        detail::poly_scale(un, lhs_f),
        detail::poly_scale(detail::poly_derivative(prev, r), rhs_f));
    if (!detail::poly_is_zero(residual)) return ExactResidualReport{false, n};
    prev = std::move(un);
  }
  return ExactResidualReport{true, -1};
}

}  // namespace stokes_summa
