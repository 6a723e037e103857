#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/gamma.hpp"
#include "stokes_summa/mittag_leffler.hpp"
#include "stokes_summa/moments.hpp"
#include "stokes_summa/quadrature.hpp"
#include "stokes_summa/spline.hpp"

namespace stokes_summa {

/// Exponential flatness envelope |e(z)| <= a * exp(-(|z|/b)^k), fitted on
/// the real ray and inflated until it dominates every sample.
struct FlatnessEnvelope {
  double a = 1.0;
  double b = 1.0;
};

namespace detail {

/// Tabulated kernel values along one ray, splined over log-modulus.
/// Moduli outside the table evaluate to zero; the table extends until the
/// values drop below 1e-17 of the peak on both sides.
struct KernelRayTable {
  double angle = 0.0;
  CubicSpline spline;  // over log(modulus)
  double lo = 0.0, hi = 0.0;
  double peak = 0.0;
  double fit_error = 0.0;  // validated against direct evaluation

  complex eval(double mod) const {
    if (mod < lo || mod > hi) return complex(0.0);
    return spline.eval(std::log(mod));
  }
};

inline KernelRayTable build_kernel_ray_table(
    const std::function<complex(CoverPoint)>& direct, double angle, int per_decade = 72) {
  // locate the peak with a coarse dyadic scan
  double peak = 0.0, x_peak = 1.0;
  for (int j = -40; j <= 40; ++j) {
    const double x = std::pow(2.0, j);
    const double v = std::abs(direct(CoverPoint::polar(x, angle)));
    if (v > peak) {
      peak = v;
      x_peak = x;
    }
  }
  if (!(peak > 0.0)) throw accuracy_error("kernel table: no support found", 0.0);
  const double floor = 1e-17 * peak;
  double lo = x_peak, hi = x_peak;
  while (lo > x_peak * 1e-24 &&
         std::abs(direct(CoverPoint::polar(lo / 2.0, angle))) > floor)
    lo /= 2.0;
  lo /= 2.0;
  while (hi < x_peak * 1e24 && std::abs(direct(CoverPoint::polar(hi * 2.0, angle))) > floor)
    hi *= 2.0;
  hi *= 2.0;

  const double llo = std::log(lo), lhi = std::log(hi);
  const int n = std::max(8, static_cast<int>((lhi - llo) / std::log(10.0) * per_decade));
  std::vector<double> xs(static_cast<std::size_t>(n) + 1);
  std::vector<complex> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = llo + (lhi - llo) * static_cast<double>(i) / n;
    xs[i] = lx;
    ys[i] = direct(CoverPoint::polar(std::exp(lx), angle));
  }
  KernelRayTable t;
  t.angle = angle;
  t.spline = CubicSpline(xs, ys);
  t.lo = lo;
  t.hi = hi;
  t.peak = peak;
  // validate at off-grid points
  double worst = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double lx = llo + (lhi - llo) * (i + 0.371) / 16.0;
    const double x = std::exp(lx);
    worst = std::max(worst,
                     std::abs(t.spline.eval(lx) - direct(CoverPoint::polar(x, angle))));
  }
  t.fit_error = worst;
  return t;
}

}  // namespace detail

/// A kernel pair (e, E) with its moment function. The forward kernel e is
/// holomorphic on the sector S_0(pi/k) and exponentially flat of order k
/// there; E is entire with the power series sum z^n / m(n). Closed-form
/// pairs evaluate directly; the iterated constructions integrate against
/// their inner kernel, tabulating it once at construction when another
/// quadrature level sits below.
class KernelPair {
 public:
  enum class Backing { closed_form, iterated_case1, iterated_case2, contour_quotient };

  MomentFunction moment;
  double k = 1.0;       // kernel order
  Backing backing = Backing::closed_form;
  int depth = 0;        // nesting depth of quadrature levels under e()
  FlatnessEnvelope flatness;
  double eval_tol = 1e-12;  // absolute accuracy budget for one e() evaluation

  complex e(const CoverPoint& z) const { return e_fn_(z); }

  /// Entire kernel E(z) = sum z^n / m(n). Mittag-Leffler route for the
  /// closed-form family, direct compensated series otherwise.
  complex E(complex z, double rel_tol = 1e-10) const {
    if (backing == Backing::closed_form) return mittag_leffler(1.0 / k, z, rel_tol);
    complex sum(0.0), comp(0.0);
    double max_mag = 0.0;
    const double lz = (z == complex(0.0)) ? -1e300 : std::log(std::abs(z));
    const double az = std::arg(z);
    for (int n = 0; n < 4000; ++n) {
      const double lt = n * lz - moment.log_at(n);
      const complex term = std::exp(complex(lt, n * az));
      const complex y = term - comp;
      const complex t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      max_mag = std::max(max_mag, std::abs(sum));
      if (std::exp(lt) < 1e-18 * (max_mag + 1.0) && n > 4) {
        const double err = std::exp(lt) + 2e-16 * max_mag;
        if (err > rel_tol * std::max(std::abs(sum), 1e-300))
          throw accuracy_error("KernelPair::E: cancellation too severe", err);
        return sum;
      }
    }
    throw accuracy_error("KernelPair::E: series did not converge", 1.0);
  }

  /// Half-width pi/(2k) of the decay sector of e.
  double decay_halfwidth() const { return pi / (2.0 * k); }

  using EvalFn = std::function<complex(const CoverPoint&)>;

  static KernelPair make(MomentFunction m, double order_k, Backing b, int depth, EvalFn fn,
                         double eval_tol) {
    KernelPair kp;
    kp.moment = std::move(m);
    kp.k = order_k;
    kp.backing = b;
    kp.depth = depth;
    kp.e_fn_ = std::move(fn);
    kp.eval_tol = eval_tol;
    kp.fit_flatness();
    return kp;
  }

 private:
  EvalFn e_fn_;

  void fit_flatness() {
    // sample the real ray on both sides of the peak
    std::vector<std::pair<double, double>> pts;
    double peak = 0.0, x_peak = 1.0;
    for (int j = -20; j <= 20; ++j) {
      const double x = std::pow(2.0, 0.5 * j);
      const double v = std::abs(e_fn_(CoverPoint::polar(x, 0.0)));
      if (v > peak) {
        peak = v;
        x_peak = x;
      }
    }
    for (int i = 0; i <= 16; ++i) {
      const double x = x_peak * std::pow(2.0, 0.35 * i);
      const double v = std::abs(e_fn_(CoverPoint::polar(x, 0.0)));
      if (v > 0.0 && std::isfinite(v)) pts.emplace_back(x, v);
    }
    // least squares for log|e| = log(a) - (x/b)^k, then inflate a
    double sxx = 0, sx = 0, sxy = 0, sy = 0;
    for (auto& [x, v] : pts) {
      const double u = std::pow(x, k);
      const double y = std::log(v);
      sxx += u * u;
      sx += u;
      sxy += u * y;
      sy += y;
    }
    const double n = static_cast<double>(pts.size());
    const double det = n * sxx - sx * sx;
    double beta = 0.0, loga = std::log(std::max(peak, 1e-300));
    if (det > 0.0 && n >= 2) {
      beta = -(n * sxy - sx * sy) / det;
      loga = (sy + beta * sx) / n;
    }
    if (beta <= 0.0) beta = 1.0;
    for (auto& [x, v] : pts) loga = std::max(loga, std::log(v) + beta * std::pow(x, k));
    flatness.a = std::exp(loga) * 1.25;
    flatness.b = std::pow(beta, -1.0 / k);
  }
};

/// e(z) = k z^k exp(-z^k), m(u) = Gamma(1 + u/k), E = Mittag-Leffler of
/// index 1/k. For k <= 1/2 the same closed form applies, consistent with
/// the ramified construction e_m(z) = e_{m~}(z^{1/p}) / p for this family.
inline KernelPair kernel_closed_form(double k, double eval_tol = 1e-12) {
  if (!(k > 0.0)) throw domain_error("kernel_closed_form: k must be positive");
  auto fn = [k](const CoverPoint& z) -> complex {
    if (z.is_origin()) return complex(0.0);
    const complex zk = z.pow_value(k);
    return k * zk * std::exp(-zk);
  };
  return KernelPair::make(MomentFunction::gamma_moment(1.0 / k), k,
                          KernelPair::Backing::closed_form, 0, fn, eval_tol);
}

namespace detail {

/// Direction for the inner integration ray so that both the outer factor
/// exp(-(uz)^{q+1}) and the inner kernel at 1/u stay in their decay zones.
inline double balance_ray(double arg_z, int qp1, double k_inner) {
  const double d = -arg_z * qp1 / (qp1 + k_inner);
  return d;
}

struct IteratedLevel {
  int qp1;
  std::shared_ptr<const KernelPair> inner;
  std::shared_ptr<const KernelRayTable> inner_table;  // may be null: evaluate inner directly
  double table_angle = 0.0;
  double tol;
  int max_segments;
};

/// One level of the kernel recursion:
///   e(z) = int_{ray} (q+1) (uz)^{q+1} exp(-(uz)^{q+1}) e_inner(1/u) du/u.
inline complex iterated_kernel_eval(const IteratedLevel& lv, const CoverPoint& z) {
  if (z.is_origin()) return complex(0.0);
  const int qp1 = lv.qp1;
  const double k_inner = lv.inner->k;
  double du = balance_ray(z.arg, qp1, k_inner);
  if (lv.inner_table && std::abs(du - (-lv.table_angle)) < 1e-12) du = -lv.table_angle;
  if (std::cos(qp1 * (du + z.arg)) < 0.05)
    throw domain_error("iterated kernel: argument outside the decay sector");
  if (std::cos(k_inner * du) < 0.05)
    throw domain_error("iterated kernel: inner ray outside the decay sector");

  const bool use_table = lv.inner_table && std::abs(-du - lv.inner_table->angle) < 1e-12;
  auto integrand = [&](CoverPoint u) -> complex {
    const CoverPoint uz = u * z;
    const complex w = uz.pow_value(qp1);
    const CoverPoint uinv{1.0 / u.mod, -u.arg};
    const complex inner_val =
        use_table ? lv.inner_table->eval(uinv.mod) : lv.inner->e(uinv);
    return static_cast<double>(qp1) * w * std::exp(-w) * inner_val / u.value();
  };
  RayQuadratureSpec spec;
  spec.direction = du;
  spec.radius = 8.0 / std::max(z.mod, 1e-12);
  spec.abs_tol = lv.tol;
  spec.max_segments = lv.max_segments;
  spec.origin_exponent = qp1;
  complex value = ray_integral(integrand, spec).value;
  // deep in the flat tail the result is far below the absolute budget;
  // one refinement pass restores relative accuracy there
  const double mag = std::abs(value);
  if (mag > 0.0 && mag < lv.tol * 1e5) {
    spec.abs_tol = std::max(mag * 3e-7, lv.tol * 1e-3);
    value = ray_integral(integrand, spec).value;
  }
  return value;
}

/// The quotient-moment kernel (Case 2 with p = 0) through the inverse
/// moment Laplace transform:
///   e(u) = -(1/2 pi i) oint E_{1/(q+1)}(1/(u zeta)) e2(1/zeta) dzeta/zeta
/// over the negatively oriented boundary of a sector whose opening is
/// slightly larger than pi/(q+1). The contour bisects -arg(u) so both
/// factors decay toward the origin on the legs.
struct QuotientContour {
  int qp1;
  int r;
  double tol;
  int max_segments;
};

inline complex quotient_kernel_eval(const QuotientContour& qc, const CoverPoint& u) {
  if (u.is_origin()) return complex(0.0);
  const double w2 = 0.5 * (pi / qc.qp1 + 0.1);
  const double d = -u.arg;
  const double alpha = 1.0 / qc.qp1;
  const double kk = static_cast<double>(qc.qp1) / qc.r;
  const double R = 8.0 * std::max(1.0, 1.0 / u.mod);

  auto F = [&](double x, double theta) -> complex {
    // E_{alpha}(1/(u zeta)) * e2(1/zeta), zeta = x e^{i theta}
    const complex inv_uzeta = std::polar(1.0 / (u.mod * x), -(u.arg + theta));
    const CoverPoint zinv{1.0 / x, -theta};
    const complex ek = zinv.pow_value(kk);
    const complex e2 = kk * ek * std::exp(-ek);
    if (e2 == complex(0.0)) return complex(0.0);
    return mittag_leffler(alpha, inv_uzeta, 1e-12) * e2;
  };

  const double th_p = d + w2, th_m = d - w2;
  std::vector<double> bp;
  const double x_min = R * 1e-13;
  bp.push_back(x_min);
  for (double x = x_min; x < R; x *= 2.0) bp.push_back(std::min(x * 2.0, R));
  if (bp.back() < R) bp.push_back(R);

  const double leg_tol = qc.tol / 3.0;
  auto leg_p = integrate_adaptive([&](double x) { return F(x, th_p) / x; }, bp, leg_tol,
                                  qc.max_segments);
  auto leg_m = integrate_adaptive([&](double x) { return F(x, th_m) / x; }, bp, leg_tol,
                                  qc.max_segments);
  std::vector<double> arc_bp;
  for (int i = 0; i <= 8; ++i) arc_bp.push_back(th_m + (th_p - th_m) * i / 8.0);
  auto arc = integrate_adaptive([&](double th) { return F(R, th); }, arc_bp, leg_tol,
                                qc.max_segments);
  const complex total = (leg_p.value - leg_m.value) - complex(0.0, 1.0) * arc.value;
  return -total / complex(0.0, 2.0 * pi);
}

}  // namespace detail

/// Case 1 kernel family: m(u) = Gamma(1 + u/(q+1))^{p-1}, order
/// (q+1)/(p-1). Closed form for p = 2; one recursion level per extra p.
inline KernelPair kernel_iterated_case1(int p, int q, Direction d = 0.0,
                                        double eval_tol = 1e-11, int max_segments = 4000) {
  if (p < 2) throw domain_error("kernel_iterated_case1: requires p >= 2");
  if (q < 0) throw domain_error("kernel_iterated_case1: requires q >= 0");
  if (p > 4) throw domain_error("kernel_iterated_case1: depth cap p <= 4");
  const int qp1 = q + 1;
  if (p == 2) {
    auto kp = kernel_closed_form(static_cast<double>(qp1), eval_tol);
    return kp;
  }
  auto inner = std::make_shared<KernelPair>(
      kernel_iterated_case1(p - 1, q, d, eval_tol / 2.0, max_segments));
  std::shared_ptr<const detail::KernelRayTable> table;
  if (inner->depth >= 1) {
    auto fn = [inner](const CoverPoint& zz) { return inner->e(zz); };
    table = std::make_shared<detail::KernelRayTable>(
        detail::build_kernel_ray_table(fn, -d));
  }
  detail::IteratedLevel lv{qp1, inner, table, -d, eval_tol / (p - 1), max_segments};
  auto fn = [lv](const CoverPoint& z) { return detail::iterated_kernel_eval(lv, z); };
  const MomentFunction m =
      MomentFunction::power(MomentFunction::gamma_moment(1.0 / qp1), p - 1);
  return KernelPair::make(m, static_cast<double>(qp1) / (p - 1),
                          KernelPair::Backing::iterated_case1, inner->depth + 1, fn,
                          eval_tol);
}

/// Case 2 kernel family: m(u) = Gamma(1 + ur/(q+1)) Gamma(1 + u/(q+1))^{p-1}
/// of order (p-1+r)/(q+1). p = 1 is closed form, p = 0 is the
/// quotient-moment contour construction, p >= 2 iterates.
inline KernelPair kernel_iterated_case2(int p, int q, int r, Direction d = 0.0,
                                        double eval_tol = 1e-11, int max_segments = 4000) {
  if (r < 2) throw domain_error("kernel_iterated_case2: requires r >= 2");
  if (p < 0 || q < 0) throw domain_error("kernel_iterated_case2: requires p, q >= 0");
  if (p > 4) throw domain_error("kernel_iterated_case2: depth cap p <= 4");
  const int qp1 = q + 1;
  const MomentFunction m2 = MomentFunction::gamma_moment(static_cast<double>(r) / qp1);
  const MomentFunction m1 = MomentFunction::gamma_moment(1.0 / qp1);
  if (p == 1) return kernel_closed_form(static_cast<double>(qp1) / r, eval_tol);
  if (p == 0) {
    detail::QuotientContour qc{qp1, r, eval_tol, max_segments};
    auto fn = [qc](const CoverPoint& u) { return detail::quotient_kernel_eval(qc, u); };
    return KernelPair::make(moment_quotient(m2, m1), static_cast<double>(qp1) / (r - 1),
                            KernelPair::Backing::contour_quotient, 1, fn, eval_tol);
  }
  auto inner = std::make_shared<KernelPair>(
      kernel_iterated_case2(p - 1, q, r, d, eval_tol / 2.0, max_segments));
  std::shared_ptr<const detail::KernelRayTable> table;
  if (inner->depth >= 1) {
    auto fn = [inner](const CoverPoint& zz) { return inner->e(zz); };
    table = std::make_shared<detail::KernelRayTable>(
        detail::build_kernel_ray_table(fn, -d));
  }
  detail::IteratedLevel lv{qp1, inner, table, -d, eval_tol / p, max_segments};
  auto fn = [lv](const CoverPoint& z) { return detail::iterated_kernel_eval(lv, z); };
  return KernelPair::make(moment_product(m2, MomentFunction::power(m1, p - 1)),
                          static_cast<double>(qp1) / (p - 1 + r),
                          KernelPair::Backing::iterated_case2, inner->depth + 1, fn,
                          eval_tol);
}

// -------- kernel tabulation cache files --------
// little-endian f64 pairs (x, e(x)) preceded by an 8-byte count

inline bool save_kernel_samples(const std::string& path, const std::vector<double>& xs,
                                const std::vector<double>& es) {
  if (xs.size() != es.size()) return false;
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) return false;
  const std::uint64_t count = xs.size();
  unsigned char hdr[8];
  for (int i = 0; i < 8; ++i) hdr[i] = static_cast<unsigned char>((count >> (8 * i)) & 0xff);
  bool ok = std::fwrite(hdr, 1, 8, f) == 8;
  for (std::size_t i = 0; ok && i < xs.size(); ++i) {
    double pair[2] = {xs[i], es[i]};
    static_assert(sizeof(double) == 8);
    ok = std::fwrite(pair, 8, 2, f) == 2;
  }
  std::fclose(f);
  return ok;
}

inline bool load_kernel_samples(const std::string& path, std::vector<double>& xs,
                                std::vector<double>& es) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return false;
  unsigned char hdr[8];
  if (std::fread(hdr, 1, 8, f) != 8) {
    std::fclose(f);
    return false;
  }
  std::uint64_t count = 0;
  for (int i = 7; i >= 0; --i) count = (count << 8) | hdr[i];
  xs.assign(count, 0.0);
  es.assign(count, 0.0);
  bool ok = true;
  for (std::uint64_t i = 0; ok && i < count; ++i) {
    double pair[2];
    ok = std::fread(pair, 8, 2, f) == 2;
    if (ok) {
      xs[i] = pair[0];
      es[i] = pair[1];
    }
  }
  std::fclose(f);
  return ok;
}

/// File name key for a cached kernel tabulation.
inline std::string kernel_cache_name(int p, int q, int r, Direction d, double tol) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "kernel_p%d_q%d_r%d_d%.6f_tol%.1e.bin", p, q, r, d, tol);
  return buf;
}

}  // namespace stokes_summa
