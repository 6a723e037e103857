#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "stokes_summa/errors.hpp"

namespace stokes_summa {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// A direction on the universal cover of the punctured plane: a plain real
/// angle in radians, deliberately NOT reduced mod 2*pi. Distinct reals are
/// distinct directions even when they name the same ray in the plane.
using Direction = double;

/// Point on the universal cover of C \ {0}: modulus plus an explicit cover
/// argument. Fractional powers and ray geometry are well defined here,
/// unlike on the principal branch.
struct CoverPoint {
  double mod = 0.0;  // modulus, >= 0 (mod == 0 marks the origin)
  double arg = 0.0;  // argument on the cover

  complex value() const { return std::polar(mod, arg); }

  bool is_origin() const { return mod == 0.0; }

  /// Lift a plane point using the principal argument in (-pi, pi].
  static CoverPoint from_complex(complex z) {
    return CoverPoint{std::abs(z), std::arg(z)};
  }

  static CoverPoint polar(double modulus, double argument) {
    return CoverPoint{modulus, argument};
  }

  /// z^alpha with the branch fixed by the cover argument.
  CoverPoint pow(double alpha) const {
    return CoverPoint{std::pow(mod, alpha), alpha * arg};
  }

  complex pow_value(double alpha) const { return pow(alpha).value(); }

  friend CoverPoint operator/(const CoverPoint& a, const CoverPoint& b) {
    return CoverPoint{a.mod / b.mod, a.arg - b.arg};
  }

  friend CoverPoint operator*(const CoverPoint& a, const CoverPoint& b) {
    return CoverPoint{a.mod * b.mod, a.arg + b.arg};
  }
};

/// Sector on the universal cover: direction d, opening alpha, radius R
/// (infinite when unbounded). Membership uses the cover argument, so a
/// point with argument 0.01 is NOT in a sector centered at 2*pi.
struct Sector {
  Direction direction = 0.0;
  double opening = pi;
  double radius = std::numeric_limits<double>::infinity();

  static Sector unbounded(Direction d, double opening) {
    return Sector{d, opening, std::numeric_limits<double>::infinity()};
  }

  bool contains(const CoverPoint& t) const {
    if (!(t.mod > 0.0) || !(t.mod < radius)) return false;
    return std::abs(t.arg - direction) < opening / 2.0;
  }
};

inline bool sector_contains(const Sector& s, const CoverPoint& t) { return s.contains(t); }

/// Exponential growth class O^k: |f(x)| <= c1 * exp(c2 * |x|^k).
struct GrowthClass {
  double k = 0.0;
};

/// Result of fitting the O^k envelope to samples (|x|, |f(x)|):
/// log|f| <= log(c1) + c2 |x|^k with c2 >= 0 and c1 inflated until every
/// sample sits below the envelope.
struct GrowthFit {
  double c1 = 1.0;
  double c2 = 0.0;
  bool attested = false;
};

/// Least-squares fit of the growth envelope over the sample set. Samples
/// with |f| == 0 are skipped.
inline GrowthFit attest_exponential_growth(std::span<const std::pair<double, double>> samples,
                                           double k) {
  double sxx = 0, sx = 0, sxy = 0, sy = 0;
  int n = 0;
  for (const auto& [x, fx] : samples) {
    if (!(fx > 0.0) || !std::isfinite(fx)) continue;
    const double u = std::pow(x, k);
    const double y = std::log(fx);
    sxx += u * u;
    sx += u;
    sxy += u * y;
    sy += y;
    ++n;
  }
  if (n < 2) return GrowthFit{};
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return GrowthFit{};
  double c2 = (n * sxy - sx * sy) / det;
  double logc1 = (sy - c2 * sx) / n;
  if (c2 < 0.0) {  // membership only needs an upper envelope
    c2 = 0.0;
    logc1 = -std::numeric_limits<double>::infinity();
  }
  // Raise the intercept until the envelope dominates every sample.
  for (const auto& [x, fx] : samples) {
    if (!(fx > 0.0) || !std::isfinite(fx)) continue;
    logc1 = std::max(logc1, std::log(fx) - c2 * std::pow(x, k));
  }
  return GrowthFit{std::exp(logc1), c2, true};
}

}  // namespace stokes_summa
