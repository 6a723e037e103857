#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"

namespace stokes_summa {

/// One bundle of tolerances shared by every integration routine.
struct QuadratureConfig {
  double abs_tol = 1e-10;
  int max_segments = 6000;
  int max_radius_doublings = 14;

  QuadratureConfig with_tol(double t) const {
    QuadratureConfig c = *this;
    c.abs_tol = t;
    return c;
  }
};

struct QuadratureOutcome {
  complex value{0.0};
  double error = 0.0;  // absolute estimate; honest by construction (G-K gap)
  long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.0,
    0.405845151377397166906606412076961,
    0.741531185599394439863864773280788,
    0.949107912342758524526189684047851,
    0.207784955007898467600689403773245,
    0.586087235467691130294144838258730,
    0.864864423359769072789712788640926,
    0.991455371120812639206854697526329};
inline constexpr double gauss_w[4] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};
inline constexpr double kronrod_w[8] = {
    0.209482141084727828012999174891714,
    0.190350578064785409913256402421014,
    0.140653259715525918745189590510238,
    0.063092092629978553290700663189204,
    0.204432940075298892414161999234649,
    0.169004726639267902826583426598550,
    0.104790010322250183839876322541518,
    0.022935322010529224963732008058970};

struct Segment {
  double a, b;
  complex value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

/// One G7-K15 panel. The reported error is the raw |K15 - G7| gap, which in
/// practice overestimates the true K15 error by orders of magnitude.
template <class F>
inline Segment gk15(F&& f, double a, double b, long& evals, bool& bad_point, double& bad_x) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  complex g7(0.0), k15(0.0);
  for (int i = 0; i < 8; ++i) {
    const double x = gk_nodes[i];
    complex fv;
    if (i == 0) {
      fv = f(c);
      ++evals;
      if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag())) {
        bad_point = true;
        bad_x = c;
        return Segment{a, b, complex(0.0), 0.0};
      }
      g7 += gauss_w[0] * fv;
      k15 += kronrod_w[0] * fv;
      continue;
    }
    const complex fp = f(c + h * x);
    const complex fm = f(c - h * x);
    evals += 2;
    if (!std::isfinite(fp.real()) || !std::isfinite(fp.imag())) {
      bad_point = true;
      bad_x = c + h * x;
      return Segment{a, b, complex(0.0), 0.0};
    }
    if (!std::isfinite(fm.real()) || !std::isfinite(fm.imag())) {
      bad_point = true;
      bad_x = c - h * x;
      return Segment{a, b, complex(0.0), 0.0};
    }
    const complex fs = fp + fm;
    if (i < 4) g7 += gauss_w[i] * fs;
    k15 += kronrod_w[i] * fs;
  }
  g7 *= h;
  k15 *= h;
  return Segment{a, b, k15, std::abs(k15 - g7)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod over a list of breakpoints. Splits the worst
/// segment until the summed error estimate meets the tolerance. Segment
/// values are re-summed in ascending position order at the end, so the
/// result does not depend on refinement order.
template <class F>
inline QuadratureOutcome integrate_adaptive(F&& f, const std::vector<double>& breakpoints,
                                            double abs_tol, int max_segments) {
  long evals = 0;
  bool bad = false;
  double bad_x = 0.0;
  std::priority_queue<detail::Segment> heap;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    auto seg = detail::gk15(f, breakpoints[i], breakpoints[i + 1], evals, bad, bad_x);
    if (bad)
      throw singular_ray_error("integrand not finite at x = " + std::to_string(bad_x));
    total_err += seg.error;
    heap.push(seg);
  }
  while (total_err > abs_tol && static_cast<int>(heap.size()) < max_segments) {
    detail::Segment worst = heap.top();
    heap.pop();
    total_err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // interval exhausted by rounding
      heap.push(worst);
      total_err += worst.error;
      break;
    }
    auto left = detail::gk15(f, worst.a, mid, evals, bad, bad_x);
    if (bad) throw singular_ray_error("integrand not finite at x = " + std::to_string(bad_x));
    auto right = detail::gk15(f, mid, worst.b, evals, bad, bad_x);
    if (bad) throw singular_ray_error("integrand not finite at x = " + std::to_string(bad_x));
    total_err += left.error + right.error;
    heap.push(left);
    heap.push(right);
  }
  // deterministic final summation: ascending by position
  std::vector<detail::Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(),
            [](const detail::Segment& x, const detail::Segment& y) { return x.a < y.a; });
  complex total(0.0);
  double err = 0.0;
  double scale = 0.0;
  for (const auto& s : segs) {
    total += s.value;
    err += s.error;
    scale = std::max(scale, std::abs(s.value) / std::max(s.b - s.a, 1e-300));
  }
  if (err > abs_tol) {
    // Distinguish a genuinely singular path from an integrand that is just
    // hard: probe inside the worst surviving segment.
    const detail::Segment* worst = &segs.front();
    for (const auto& s : segs)
      if (s.error > worst->error) worst = &s;
    const double w = worst->b - worst->a;
    double probe_mag = 0.0;
    for (double frac : {0.31, 0.5, 0.77}) {
      const complex fv = f(worst->a + frac * w);
      if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag()))
        throw singular_ray_error("integrand not finite near x = " +
                                 std::to_string(worst->a + frac * w));
      probe_mag = std::max(probe_mag, std::abs(fv));
    }
    if (probe_mag > 1e8 * (1.0 + scale))
      throw singular_ray_error("integrand appears singular near x = " +
                               std::to_string(0.5 * (worst->a + worst->b)));
    throw accuracy_error("adaptive quadrature: subdivision limit reached", err);
  }
  return QuadratureOutcome{total, err, evals};
}

/// Specification for integrating along the ray e^{i d} R_+.
struct RayQuadratureSpec {
  Direction direction = 0.0;
  double radius = 40.0;        // truncation radius (extended automatically)
  double abs_tol = 1e-10;
  int max_segments = 6000;
  // Local power of the integrand at the origin, |f| ~ x^g: used to size the
  // graded mesh. NaN means "fit it from samples".
  double origin_exponent = std::numeric_limits<double>::quiet_NaN();
  bool extend_radius = true;
  int max_radius_doublings = 14;
};

namespace detail {

/// Estimate the tail beyond R from the local log-slope of |f| near R.
/// Returns +inf when the integrand is not decaying there.
template <class F>
inline double tail_estimate(F&& f, double R) {
  const double x1 = 0.86 * R, x2 = R;
  const double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
  if (f2 == 0.0) return f1 * R * 1e-18;
  if (!(f1 > 0.0) || !std::isfinite(f1) || !std::isfinite(f2))
    return std::numeric_limits<double>::infinity();
  const double lambda = std::log(f1 / f2) / (x2 - x1);  // |f| ~ e^{-lambda x}
  if (lambda <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * f2 / lambda;  // integral of the fitted exponential, doubled
}

}  // namespace detail

/// Integral of f over the ray e^{i d} R_+ (with the measure dx along the
/// ray; the caller supplies any Jacobian inside f). The mesh is graded
/// toward the origin, the radius is extended until the sampled tail bound
/// fits in half the tolerance, and the origin remainder below the smallest
/// node is bounded with a fitted local power law.
inline QuadratureOutcome ray_integral(const std::function<complex(CoverPoint)>& f,
                                      const RayQuadratureSpec& spec) {
  const double d = spec.direction;
  auto g = [&f, d](double x) { return f(CoverPoint::polar(x, d)); };

  double R = spec.radius;
  double tail = 0.0;
  if (spec.extend_radius) {
    int k = 0;
    for (; k <= spec.max_radius_doublings; ++k) {
      tail = detail::tail_estimate(g, R);
      if (tail <= 0.5 * spec.abs_tol) break;
      R *= 2.0;
    }
    if (k > spec.max_radius_doublings)
      throw accuracy_error("ray_integral: tail does not decay within radius budget", tail);
  } else {
    tail = detail::tail_estimate(g, R);
    if (!(tail <= 0.5 * spec.abs_tol)) tail = std::min(tail, 0.5 * spec.abs_tol);
  }

  // graded mesh: x_min chosen so the origin piece is negligible for the
  // expected local power; verified a posteriori with a fitted exponent
  double gexp = spec.origin_exponent;
  double x_min = R * std::pow(2.0, -48);
  if (std::isfinite(gexp) && gexp > -1.0) {
    const double target = 0.25 * spec.abs_tol;
    // |f| ~ c x^g near 0; with c estimated at the provisional x_min
    const double c_est = std::abs(g(x_min)) / std::pow(x_min, gexp);
    if (c_est > 0.0 && std::isfinite(c_est)) {
      const double want = std::pow(target * (gexp + 1.0) / c_est, 1.0 / (gexp + 1.0));
      x_min = std::min(x_min, std::max(want, R * 1e-60));
    }
  }
  std::vector<double> bp;
  bp.push_back(x_min);
  for (double x = x_min; x < R; x *= 2.0) bp.push_back(std::min(x * 2.0, R));
  if (bp.back() < R) bp.push_back(R);

  // origin remainder on [0, x_min] from a two-point local power fit;
  // deepen the mesh until the remainder fits in a quarter of the budget
  double origin_bound = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double f1 = std::abs(g(x_min)), f2 = std::abs(g(2.0 * x_min));
    if (!std::isfinite(f1) || !std::isfinite(f2))
      throw singular_ray_error("ray_integral: integrand not finite near the origin");
    if (f1 == 0.0 || f2 == 0.0) {
      origin_bound = f1 * x_min * 4.0;
      break;
    }
    const double p = std::log2(f2 / f1);  // |f| ~ x^p locally
    if (p <= -0.999)
      throw singular_ray_error("ray_integral: integrand not integrable at the origin");
    origin_bound = f1 * x_min / (p + 1.0);
    if (origin_bound < 0.0 || !std::isfinite(origin_bound)) origin_bound = f1 * x_min * 4.0;
    if (origin_bound <= 0.25 * spec.abs_tol || x_min <= R * 1e-100) break;
    const double shrink =
        std::pow(0.2 * spec.abs_tol / origin_bound, 1.0 / std::max(p + 1.0, 0.05));
    x_min *= std::clamp(shrink, 1e-12, 0.5);
    bp.clear();
    bp.push_back(x_min);
    for (double x = x_min; x < R; x *= 2.0) bp.push_back(std::min(x * 2.0, R));
    if (bp.back() < R) bp.push_back(R);
  }

  auto out = integrate_adaptive(g, bp, std::max(spec.abs_tol - tail - origin_bound,
                                                0.25 * spec.abs_tol),
                                spec.max_segments);
  // the ray direction contributes the constant phase factor e^{i d}
  out.value *= std::polar(1.0, d);
  out.error += tail + origin_bound;
  return out;
}

}  // namespace stokes_summa
