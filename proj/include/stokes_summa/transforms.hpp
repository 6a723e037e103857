#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/formal_series.hpp"
#include "stokes_summa/kernels.hpp"
#include "stokes_summa/moments.hpp"
#include "stokes_summa/quadrature.hpp"

namespace stokes_summa {

/// m-moment Borel transform: divide the coefficient of t^j by m(j). The
/// quotient is formed in log space when the source provides it, so
/// factorial-against-factorial cancellations never overflow.
inline FormalSeries borel(const MomentFunction& m, const FormalSeries& f) {
  FormalSeries out;
  out.stride = f.stride;
  if (f.has_log_channel()) {
    auto src = f.log_coefficient;
    auto log_coeff = [m, src](int j, complex z) -> std::array<double, 2> {
      auto lc = src(j, z);
      lc[0] -= m.log_at(static_cast<double>(j));
      return lc;
    };
    out.log_coefficient = log_coeff;
    out.coefficient = [log_coeff](int j, complex z) -> complex {
      const auto [lm, ph] = log_coeff(j, z);
      if (lm == -std::numeric_limits<double>::infinity()) return complex(0.0);
      return std::polar(std::exp(lm), ph);
    };
    return out;
  }
  auto coeff = f.coefficient;
  out.coefficient = [m, coeff](int j, complex z) -> complex {
    return coeff(j, z) * std::exp(-m.log_at(static_cast<double>(j)));
  };
  return out;
}

/// Caller-attested growth of a function along the integration ray:
/// |v(x e^{i d})| <= scale * exp(rate * x^order). Polynomial factors are
/// picked up by the sampled tail estimate, so order/rate only need to
/// capture genuine exponential growth.
struct GrowthAttestation {
  double order = 0.0;
  double rate = 0.0;
  double scale = 1.0;
};

/// m-moment Laplace transform in the direction d:
///   (T_{m,d} v)(t) = int_{e^{id} R_+} e(s/t) v(s) ds/s.
/// The ray argument of s/t is d - arg(t) on the cover; t must sit where the
/// kernel decays along the ray, |d - arg t| < pi/(2k).
inline QuadratureOutcome laplace(const KernelPair& kp, Direction d,
                                 const std::function<complex(CoverPoint)>& v,
                                 const GrowthAttestation& vg, CoverPoint t,
                                 const QuadratureConfig& cfg = {}) {
  if (t.is_origin()) throw domain_error("laplace: t must be nonzero");
  const double delta = d - t.arg;
  const double cosk = std::cos(kp.k * delta);
  if (!(cosk > 0.05))
    throw domain_error("laplace: t outside the sector where the kernel decays on the ray");

  // seed truncation radius from the flatness envelope and the attested
  // growth; the ray integral then verifies and extends by sampling
  const double bk = std::pow(kp.flatness.b * t.mod, kp.k);
  double c_net = cosk / bk;
  if (vg.rate > 0.0) {
    if (std::abs(vg.order - kp.k) < 1e-12) {
      c_net -= vg.rate;
      if (!(c_net > 0.0))
        throw domain_error("laplace: attested growth of v exceeds the kernel decay");
    } else if (vg.order > kp.k) {
      throw domain_error("laplace: attested growth order of v exceeds the kernel order");
    }
  }
  const double L =
      std::log(std::max(4.0 * kp.flatness.a * std::max(vg.scale, 1.0) / cfg.abs_tol, 2.0));
  double R = std::pow(L / c_net, 1.0 / kp.k);
  if (vg.rate > 0.0 && vg.order < kp.k && vg.order > 0.0) {
    // beyond R0 the kernel must also beat exp(rate x^order)
    const double R0 = std::pow(2.0 * vg.rate * bk / cosk, 1.0 / (kp.k - vg.order));
    R = std::max(R, R0 * std::pow(2.0 * L, 1.0 / kp.k));
  }

  auto integrand = [&kp, &v, &t, d](CoverPoint s) -> complex {
    const CoverPoint w{s.mod / t.mod, d - t.arg};
    const complex ev = kp.e(w);
    if (ev == complex(0.0)) return complex(0.0);
    return ev * v(s) / s.value();
  };
  RayQuadratureSpec spec;
  spec.direction = d;
  spec.radius = R;
  spec.abs_tol = cfg.abs_tol;
  spec.max_segments = cfg.max_segments;
  spec.max_radius_doublings = cfg.max_radius_doublings;
  spec.origin_exponent = kp.k - 1.0;
  return ray_integral(integrand, spec);
}

/// Negatively oriented boundary of a sector: direction d, opening slightly
/// larger than pi/k, finite radius.
struct ContourGammaD {
  Direction direction = 0.0;
  double opening = 0.0;  // 0 means "pi/k + 0.1" resolved against the kernel
  double radius = 4.0;
};

/// Inverse m-moment Laplace transform in a direction:
///   (T^-_{m,d} v)(s) = -(1/2 pi i) oint_{gamma(d)} E(s/t) v(t) dt/t.
/// v must be analytic on the sector S_d(opening, R).
inline QuadratureOutcome inverse_laplace(const KernelPair& kp, const ContourGammaD& contour,
                                         const std::function<complex(CoverPoint)>& v,
                                         complex s, const QuadratureConfig& cfg = {}) {
  if (!(contour.radius > 0.0)) throw domain_error("inverse_laplace: degenerate contour");
  const double opening = contour.opening > 0.0 ? contour.opening : pi / kp.k + 0.1;
  if (!(opening > pi / kp.k))
    throw domain_error("inverse_laplace: contour opening must exceed pi/k");
  const double w2 = 0.5 * opening;
  const double R = contour.radius;
  const double th_p = contour.direction + w2;
  const double th_m = contour.direction - w2;

  auto F = [&](double x, double th) -> complex {
    const complex t = std::polar(x, th);
    return kp.E(s / t) * v(CoverPoint::polar(x, th));
  };
  std::vector<double> bp;
  const double x_min = R * 1e-10;
  bp.push_back(x_min);
  for (double x = x_min; x < R; x *= 2.0) bp.push_back(std::min(x * 2.0, R));
  if (bp.back() < R) bp.push_back(R);
  const double leg_tol = cfg.abs_tol / 3.0;
  auto leg_p = integrate_adaptive([&](double x) { return F(x, th_p) / x; }, bp, leg_tol,
                                  cfg.max_segments);
  auto leg_m = integrate_adaptive([&](double x) { return F(x, th_m) / x; }, bp, leg_tol,
                                  cfg.max_segments);
  std::vector<double> arc_bp;
  for (int i = 0; i <= 8; ++i) arc_bp.push_back(th_m + (th_p - th_m) * i / 8.0);
  auto arc = integrate_adaptive([&](double th) { return F(R, th); }, arc_bp, leg_tol,
                                cfg.max_segments);
  QuadratureOutcome out;
  const complex total = (leg_p.value - leg_m.value) - complex(0.0, 1.0) * arc.value;
  out.value = -total / complex(0.0, 2.0 * pi);
  out.error = (leg_p.error + leg_m.error + arc.error) / (2.0 * pi);
  out.evaluations = leg_p.evaluations + leg_m.evaluations + arc.evaluations;
  return out;
}

/// k-sum of a formal series in the direction d: the moment Laplace
/// transform of its Borel sum. theta exposes the direction freedom within
/// the nonsingular window around d; the default evaluates at theta = d.
/// The caller is responsible for the window being free of singular
/// directions.
inline QuadratureOutcome k_sum(const KernelPair& kp, Direction d,
                               const std::function<complex(CoverPoint)>& borel_sum,
                               const GrowthAttestation& vg, CoverPoint t,
                               const QuadratureConfig& cfg = {},
                               double theta = std::numeric_limits<double>::quiet_NaN()) {
  const double th = std::isfinite(theta) ? theta : d;
  return laplace(kp, th, borel_sum, vg, t, cfg);
}

/// Pointwise sum of a convergent series as a function on the cover.
/// Terms are added until they stop mattering relative to the running
/// magnitude; meant for entire Borel transforms of convergent series.
/// Terms are assembled in log space so factorial-sized coefficient
/// quotients never overflow on the way in.
inline std::function<complex(CoverPoint)> series_sum_function(const FormalSeries& fs,
                                                              complex z, int max_terms = 600) {
  FormalSeries local = fs;
  return [local, z, max_terms](CoverPoint s) -> complex {
    const double log_s = s.mod > 0.0 ? std::log(s.mod) : -1e300;
    complex acc(0.0);
    double max_mag = 0.0;
    int quiet = 0;
    for (int n = 0; n < max_terms; ++n) {
      const int j = n * local.stride;
      const auto [lm, ph] = local.log_coeff(j, z);
      const double lterm = lm + j * log_s;
      const complex term =
          (lterm == -std::numeric_limits<double>::infinity())
              ? complex(0.0)
              : std::polar(std::exp(lterm), ph + j * s.arg);
      acc += term;
      max_mag = std::max(max_mag, std::abs(acc));
      if (std::abs(term) < 1e-17 * (max_mag + 1e-300)) {
        if (++quiet >= 3) return acc;
      } else {
        quiet = 0;
      }
    }
    throw accuracy_error("series_sum_function: no convergence at this point", 1.0);
  };
}

}  // namespace stokes_summa
