#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/formal_series.hpp"
#include "stokes_summa/gamma.hpp"
#include "stokes_summa/initial_data.hpp"
#include "stokes_summa/kernels.hpp"
#include "stokes_summa/moments.hpp"

namespace stokes_summa {

/// The Cauchy problem d_t u = a (d_t t)^p t^q d_z^r u, u(0, z) = phi(z).
struct CauchyProblem {
  int p = 0;
  int q = 0;
  int r = 0;
  complex a{1.0};
  InitialDatum phi = InitialDatum::constant(complex(1.0));

  void validate() const {
    if (p < 0 || q < 0 || r < 0) throw domain_error("CauchyProblem: p, q, r must be >= 0");
    if (a == complex(0.0)) throw domain_error("CauchyProblem: a must be nonzero");
  }
};

enum class RegimeTag {
  entire_1a,      // r = 0, p = 0: entire in t
  convergent_1b,  // r = 0, p = 1: geometric, positive radius
  summable_1c,    // r = 0, p >= 2: k = (q+1)/(p-1)
  translation_2a, // r = 1, p = 0: shifted datum, convergent
  summable_2      // r >= 1 otherwise: k = (q+1)/(p-1+r)
};

struct Regime {
  RegimeTag tag;
  double k = 0.0;  // summability index, 0 for the convergent regimes

  bool summable() const {
    return tag == RegimeTag::summable_1c || tag == RegimeTag::summable_2;
  }
  std::string name() const {
    switch (tag) {
      case RegimeTag::entire_1a: return "Entire1a";
      case RegimeTag::convergent_1b: return "Convergent1b";
      case RegimeTag::summable_1c: return "Summable1c";
      case RegimeTag::translation_2a: return "Translation2a";
      case RegimeTag::summable_2: return "Summable2";
    }
    return "?";
  }
};

/// Classification is exact in (p, r). The case r = 1, p >= 1 folds into the
/// Case 2 formulas with a single translate, where they remain valid.
inline Regime classify(const CauchyProblem& cp) {
  cp.validate();
  if (cp.r == 0) {
    if (cp.p == 0) return Regime{RegimeTag::entire_1a, 0.0};
    if (cp.p == 1) return Regime{RegimeTag::convergent_1b, 0.0};
    return Regime{RegimeTag::summable_1c, static_cast<double>(cp.q + 1) / (cp.p - 1)};
  }
  if (cp.r == 1 && cp.p == 0) return Regime{RegimeTag::translation_2a, 0.0};
  return Regime{RegimeTag::summable_2,
                static_cast<double>(cp.q + 1) / (cp.p - 1 + cp.r)};
}

/// The unique formal solution
///   sum_n a^n (n!)^{p-1} (q+1)^{n(p-1)} phi^{(nr)}(z) t^{n(q+1)}.
inline FormalSeries formal_solution(const CauchyProblem& cp) {
  cp.validate();
  const int p = cp.p, q = cp.q, r = cp.r;
  const complex a = cp.a;
  const InitialDatum phi = cp.phi;
  const int stride = q + 1;
  auto log_coeff = [p, q, r, a, phi](int power, complex z) -> std::array<double, 2> {
    if (power % (q + 1) != 0) return {-std::numeric_limits<double>::infinity(), 0.0};
    const int n = power / (q + 1);
    const complex dphi = phi.derivative_eval(n * r, z);
    if (dphi == complex(0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
    const double log_mag =
        (p - 1) * (log_gamma(n + 1.0) + n * std::log(static_cast<double>(q + 1))) +
        n * std::log(std::abs(a)) + std::log(std::abs(dphi));
    const double phase = n * std::arg(a) + std::arg(dphi);
    return {log_mag, phase};
  };
  FormalSeries fs;
  fs.stride = stride;
  fs.log_coefficient = log_coeff;
  fs.coefficient = [log_coeff](int power, complex z) -> complex {
    const auto [lm, ph] = log_coeff(power, z);
    if (lm == -std::numeric_limits<double>::infinity()) return complex(0.0);
    return std::polar(std::exp(lm), ph);
  };
  return fs;
}

/// Closed-form sums for the convergent regimes.
inline complex exact_sum(const CauchyProblem& cp, complex t, complex z) {
  const Regime reg = classify(cp);
  const int qp1 = cp.q + 1;
  complex tq(1.0);
  for (int i = 0; i < qp1; ++i) tq *= t;
  switch (reg.tag) {
    case RegimeTag::entire_1a:
      return cp.phi.eval(z) * std::exp(cp.a * tq / static_cast<double>(qp1));
    case RegimeTag::convergent_1b: {
      if (!(std::abs(cp.a * tq) < 1.0))
        throw domain_error("exact_sum: |a t^{q+1}| >= 1, outside the disc of convergence");
      return cp.phi.eval(z) / (complex(1.0) - cp.a * tq);
    }
    case RegimeTag::translation_2a: {
      const complex w = z + cp.a * tq / static_cast<double>(qp1);
      if (auto z0 = cp.phi.singular_point(); z0 && *z0 == w)
        throw domain_error("exact_sum: shifted argument hits the singular point of phi");
      return cp.phi.eval(w);
    }
    default:
      throw domain_error("exact_sum: no closed form in a divergent regime");
  }
}

/// Sum of the Borel transform of the formal solution in closed form.
/// Case 1 (r = 0, p >= 2): phi(z) / (1 - a (q+1)^{p-1} s^{q+1}).
/// Case 2 (r >= 1): the r-term average of shifted data,
///   (1/r) sum_j phi(z + e^{2 pi i j / r} a^{1/r} (q+1)^{(p-1)/r} s^{(q+1)/r}),
/// with a^{1/r} on the principal branch and s^{(q+1)/r} on the cover.
inline complex borel_closed_form(const CauchyProblem& cp, CoverPoint s, complex z) {
  const Regime reg = classify(cp);
  if (!reg.summable())
    throw domain_error("borel_closed_form: defined for the summable regimes only");
  const int qp1 = cp.q + 1;
  if (reg.tag == RegimeTag::summable_1c) {
    const complex sq = s.is_origin() ? complex(0.0) : s.pow_value(qp1);
    const complex denom =
        complex(1.0) - cp.a * std::pow(static_cast<double>(qp1), cp.p - 1) * sq;
    if (denom == complex(0.0))
      throw singular_evaluation_error("borel_closed_form: pole of the Borel sum");
    return cp.phi.eval(z) / denom;
  }
  // Case 2, r >= 1
  const int r = cp.r;
  if (s.is_origin()) return cp.phi.eval(z);
  const complex a_root = std::exp(std::log(cp.a) / static_cast<double>(r));
  const double qfac =
      std::pow(static_cast<double>(qp1), static_cast<double>(cp.p - 1) / r);
  const complex spow = s.pow_value(static_cast<double>(qp1) / r);
  complex acc(0.0);
  for (int j = 0; j < r; ++j) {
    const complex rot = std::polar(1.0, 2.0 * pi * j / r);
    acc += cp.phi.eval(z + rot * a_root * qfac * spow);
  }
  return acc / static_cast<double>(r);
}

/// The kernel pair attached to a summable regime (the moment function the
/// Borel transform divides by, and its forward kernel).
inline KernelPair kernel_for(const CauchyProblem& cp, Direction d = 0.0,
                             double eval_tol = 1e-11) {
  const Regime reg = classify(cp);
  if (!reg.summable()) throw domain_error("kernel_for: convergent regime has no kernel");
  if (reg.tag == RegimeTag::summable_1c) return kernel_iterated_case1(cp.p, cp.q, d, eval_tol);
  if (cp.r == 1) {
    // m = Gamma(1 + n/(q+1))^p: the Case 1 family one level up
    return kernel_iterated_case1(cp.p + 1, cp.q, d, eval_tol);
  }
  return kernel_iterated_case2(cp.p, cp.q, cp.r, d, eval_tol);
}

struct GevreyEstimate {
  double order = 0.0;
  bool degenerate = false;
};

/// Least-squares Gevrey order of a formal series at z: slope of
/// log|c_j(z)| against j log j (with j and 1 as nuisance regressors), taken
/// over the stride lattice j = n * stride up to N coefficients.
inline GevreyEstimate gevrey_estimate(const FormalSeries& fs, complex z, int N) {
  if (N < 20) throw domain_error("gevrey_estimate: need N >= 20");
  double a11 = 0, a12 = 0, a13 = 0, a22 = 0, a23 = 0, a33 = 0;
  double b1 = 0, b2 = 0, b3 = 0;
  int used = 0;
  for (int n = 1; n <= N; ++n) {
    const int j = n * fs.stride;
    if (j < 2) continue;
    const double y = fs.log_coeff(j, z)[0];
    if (!std::isfinite(y)) continue;
    const double x1 = j * std::log(static_cast<double>(j));
    const double x2 = j;
    a11 += x1 * x1; a12 += x1 * x2; a13 += x1;
    a22 += x2 * x2; a23 += x2; a33 += 1.0;
    b1 += x1 * y; b2 += x2 * y; b3 += y;
    ++used;
  }
  if (used < 5) return GevreyEstimate{0.0, true};
  const double det = a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) +
                     a13 * (a12 * a23 - a22 * a13);
  if (det == 0.0) return GevreyEstimate{0.0, true};
  const double det1 = b1 * (a22 * a33 - a23 * a23) - a12 * (b2 * a33 - a23 * b3) +
                      a13 * (b2 * a23 - a22 * b3);
  return GevreyEstimate{det1 / det, false};
}

}  // namespace stokes_summa
