#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "stokes_summa/cauchy.hpp"
#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/kernels.hpp"
#include "stokes_summa/transforms.hpp"

namespace stokes_summa {

/// A Stokes line for a summable problem. Directions are cover-valued, so
/// Case 2 lines with indices differing by a full turn of theta_z stay
/// distinct.
struct StokesLine {
  enum class Origin { case1, case2 };

  Direction direction = 0.0;
  double k_sum = 1.0;
  int index = 0;  // root index k (Case 1) or translate index l (Case 2)
  Origin origin = Origin::case1;
  double theta_z = 0.0;  // arg(z0 - z), Case 2 only
  bool conditioning_warning = false;

  /// Anti-Stokes companions at +- pi/(2k) from the line.
  std::array<Direction, 2> anti_stokes() const {
    const double off = pi / (2.0 * k_sum);
    return {direction - off, direction + off};
  }
};

namespace detail {

inline double wrap_pi(double x) {
  double y = std::fmod(x + pi, 2.0 * pi);
  if (y < 0.0) y += 2.0 * pi;
  return y - pi;
}

}  // namespace detail

/// The singular (Stokes) directions of the Borel sum. Case 1 has the q+1
/// lines d_k = (2 pi k - arg a)/(q+1); Case 2 has the r lines
/// delta_l = (r theta_z - 2 pi l - arg a)/(q+1) with theta_z = arg(z0 - z).
/// Convergent regimes return the empty list.
inline std::vector<StokesLine> singular_directions(const CauchyProblem& cp, complex z) {
  const Regime reg = classify(cp);
  std::vector<StokesLine> lines;
  if (!reg.summable()) return lines;
  const double arg_a = std::arg(cp.a);
  const int qp1 = cp.q + 1;
  if (reg.tag == RegimeTag::summable_1c) {
    for (int k = 0; k <= cp.q; ++k) {
      StokesLine L;
      L.direction = (2.0 * pi * k - arg_a) / qp1;
      L.k_sum = reg.k;
      L.index = k;
      L.origin = StokesLine::Origin::case1;
      lines.push_back(L);
    }
    return lines;
  }
  const auto z0 = cp.phi.singular_point();
  if (!z0)
    throw domain_error(
        "singular_directions: Case 2 requires a datum with a singular point z0");
  if (*z0 == z)
    throw domain_error("singular_directions: z coincides with the singular point of phi");
  const double theta_z = std::arg(*z0 - z);
  const bool warn = std::abs(z - *z0) < 0.1 * std::abs(*z0);
  for (int l = 0; l < cp.r || (cp.r == 1 && l == 0); ++l) {
    StokesLine L;
    L.direction = (cp.r * theta_z - 2.0 * pi * l - arg_a) / qp1;
    L.k_sum = reg.k;
    L.index = l;
    L.origin = StokesLine::Origin::case2;
    L.theta_z = theta_z;
    L.conditioning_warning = warn;
    lines.push_back(L);
    if (cp.r <= 1) break;
  }
  return lines;
}

namespace detail {

/// Cover distance from a direction to the nearest singular direction,
/// accounting for all cover copies (the Case 2 set repeats with period
/// 2 pi r/(q+1) per translate; Case 1 poles live in the plane, period 2 pi).
inline double distance_to_singular(const CauchyProblem& cp, complex z, double dir) {
  const Regime reg = classify(cp);
  if (!reg.summable()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  if (reg.tag == RegimeTag::summable_1c) {
    for (const auto& L : singular_directions(cp, z))
      best = std::min(best, std::abs(wrap_pi(dir - L.direction)));
    return best;
  }
  const auto z0 = cp.phi.singular_point();
  const double theta_z = std::arg(*z0 - z);
  const double arg_a = std::arg(cp.a);
  const int qp1 = cp.q + 1;
  const double period = 2.0 * pi * cp.r / qp1;
  for (int j = 0; j < cp.r; ++j) {
    const double base = (cp.r * theta_z - 2.0 * pi * j - arg_a) / qp1;
    const double m = std::round((dir - base) / period);
    for (int dm = -1; dm <= 1; ++dm)
      best = std::min(best, std::abs(dir - (base + (m + dm) * period)));
  }
  return best;
}

/// Growth attestation of the Borel sum along a ray (for the truncation
/// radius of the Laplace integral).
inline GrowthAttestation borel_sum_growth(const CauchyProblem& cp, complex z) {
  GrowthAttestation g;
  const Regime reg = classify(cp);
  g.scale = std::abs(cp.phi.eval(z)) + 1.0;
  if (reg.tag == RegimeTag::summable_2 &&
      cp.phi.variant() == InitialDatum::Variant::exponential) {
    const int qp1 = cp.q + 1;
    const double c = std::pow(std::abs(cp.a), 1.0 / cp.r) *
                     std::pow(static_cast<double>(qp1),
                              static_cast<double>(cp.p - 1) / cp.r);
    g.order = static_cast<double>(qp1) / cp.r;
    g.rate = cp.phi.growth_rate() * c;
    g.scale = std::exp(std::abs(cp.phi.lambda()) * std::abs(z)) + 1.0;
  }
  return g;
}

}  // namespace detail

/// One lateral Borel-Laplace sum u^d(t, z): the moment Laplace transform of
/// the closed-form Borel sum along a nonsingular direction.
inline QuadratureOutcome lateral_sum(const CauchyProblem& cp, Direction d_side, CoverPoint t,
                                     complex z, const KernelPair& kp,
                                     const QuadratureConfig& cfg = {}) {
  const Regime reg = classify(cp);
  if (!reg.summable())
    throw domain_error("lateral_sum: regime " + reg.name() + " needs no resummation");
  if (t.is_origin()) throw domain_error("lateral_sum: t must be nonzero");
  if (detail::distance_to_singular(cp, z, d_side) < 1e-9)
    throw singular_ray_error("lateral_sum: direction lies on a Stokes line");
  auto v = [&cp, z](CoverPoint s) { return borel_closed_form(cp, s, z); };
  return laplace(kp, d_side, v, detail::borel_sum_growth(cp, z), t, cfg);
}

inline QuadratureOutcome lateral_sum(const CauchyProblem& cp, Direction d_side, CoverPoint t,
                                     complex z, const QuadratureConfig& cfg = {}) {
  const KernelPair kp = kernel_for(cp);
  return lateral_sum(cp, d_side, t, z, kp, cfg);
}

/// Case 1 closed-form jump across the line d_k:
///   J(t, z) = 2 pi i phi(z)/(q+1) * e_m(s_k / t),
/// where s_k is the pole of the Borel sum sitting on the ray, carried on
/// the cover with argument d_k. (The pole has modulus
/// |a|^{-1/(q+1)} (q+1)^{-(p-1)/(q+1)}; the jump equals the residue of the
/// lateral-sum difference and vanishes exponentially as t -> 0.)
inline complex jump_closed_form_case1(const CauchyProblem& cp, int k_index, CoverPoint t,
                                      complex z, const KernelPair& kp) {
  const Regime reg = classify(cp);
  if (reg.tag != RegimeTag::summable_1c)
    throw domain_error("jump_closed_form_case1: requires the Case 1 summable regime");
  if (t.is_origin()) throw domain_error("jump_closed_form_case1: t must be nonzero");
  if (k_index < 0 || k_index > cp.q)
    throw domain_error("jump_closed_form_case1: line index out of range");
  const int qp1 = cp.q + 1;
  const double d_k = (2.0 * pi * k_index - std::arg(cp.a)) / qp1;
  const double mod = std::pow(std::abs(cp.a), -1.0 / qp1) *
                     std::pow(static_cast<double>(qp1),
                              -static_cast<double>(cp.p - 1) / qp1);
  const CoverPoint pole = CoverPoint::polar(mod, d_k);
  const complex ev = kp.e(pole / t);
  return complex(0.0, 2.0 * pi) * cp.phi.eval(z) / static_cast<double>(qp1) * ev;
}

inline complex jump_closed_form_case1(const CauchyProblem& cp, int k_index, CoverPoint t,
                                      complex z) {
  const KernelPair kp = kernel_for(cp);
  return jump_closed_form_case1(cp, k_index, t, z, kp);
}

/// Koethe pairing of a hyperfunction defining function g against the test
/// function e(s/t)/s: the contour -gamma_{d-} + gamma_{d+} realized as the
/// difference of two truncated rays with lateral offset eps.
inline QuadratureOutcome hyperfunction_pairing(const std::function<complex(CoverPoint)>& g,
                                               Direction d, const KernelPair& kp,
                                               CoverPoint t, double eps,
                                               const GrowthAttestation& vg = {},
                                               const QuadratureConfig& cfg = {}) {
  if (t.is_origin()) throw domain_error("hyperfunction_pairing: t must be nonzero");
  if (!(eps > 0.0)) throw domain_error("hyperfunction_pairing: eps must be positive");
  auto plus = laplace(kp, d + eps, g, vg, t, cfg);
  auto minus = laplace(kp, d - eps, g, vg, t, cfg);
  QuadratureOutcome out;
  out.value = plus.value - minus.value;
  out.error = plus.error + minus.error;
  out.evaluations = plus.evaluations + minus.evaluations;
  return out;
}

/// Clamp a requested lateral offset to a third of the gap to the nearest
/// other singular direction and to the interior of the kernel decay sector.
inline double clamp_lateral_offset(const CauchyProblem& cp, double eps, double k_sum) {
  const double gap = 2.0 * pi / (cp.q + 1);
  return std::min({eps, gap / 3.0, 0.45 * pi / k_sum});
}

struct Case2Jump {
  complex value;
  double error = 0.0;
  double eps_used = 0.0;
  bool conditioning_warning = false;
};

/// Case 2 jump across the line delta_l: the pairing of the single selected
/// translate of phi (the one whose singular points sit on the line),
/// divided by r, against e(s/t)/s.
inline Case2Jump jump_case2(const CauchyProblem& cp, int l_index, CoverPoint t, complex z,
                            const KernelPair& kp, double eps = 0.25,
                            const QuadratureConfig& cfg = {}) {
  const Regime reg = classify(cp);
  if (reg.tag != RegimeTag::summable_2)
    throw domain_error("jump_case2: requires the Case 2 summable regime");
  if (t.is_origin()) throw domain_error("jump_case2: t must be nonzero");
  const auto lines = singular_directions(cp, z);
  if (l_index < 0 || l_index >= static_cast<int>(lines.size()))
    throw domain_error("jump_case2: line index out of range");
  const StokesLine& line = lines[static_cast<std::size_t>(l_index)];
  const int qp1 = cp.q + 1;
  const int r = cp.r;
  const complex a_root = std::exp(std::log(cp.a) / static_cast<double>(r));
  const double qfac =
      std::pow(static_cast<double>(qp1), static_cast<double>(cp.p - 1) / r);
  const complex rot = std::polar(1.0, 2.0 * pi * l_index / r);
  const InitialDatum phi = cp.phi;
  auto g = [phi, z, rot, a_root, qfac, qp1, r](CoverPoint s) -> complex {
    const complex shift = rot * a_root * qfac * s.pow_value(static_cast<double>(qp1) / r);
    return phi.eval(z + shift) / static_cast<double>(r);
  };
  Case2Jump out;
  out.eps_used = clamp_lateral_offset(cp, eps, line.k_sum);
  auto pairing = hyperfunction_pairing(g, line.direction, kp, t, out.eps_used,
                                       detail::borel_sum_growth(cp, z), cfg);
  out.value = pairing.value;
  out.error = pairing.error;
  out.conditioning_warning = line.conditioning_warning;
  return out;
}

inline Case2Jump jump_case2(const CauchyProblem& cp, int l_index, CoverPoint t, complex z,
                            double eps = 0.25, const QuadratureConfig& cfg = {}) {
  const KernelPair kp = kernel_for(cp);
  return jump_case2(cp, l_index, t, z, kp, eps, cfg);
}

/// Jump at an arbitrary base point z in the disc. In Case 1, z enters only
/// through the factor phi(z); in Case 2 the line itself moves with z
/// (theta_z is recomputed), and the pairing is taken on the moved line.
inline complex jump_at_z(const CauchyProblem& cp, int line_index, CoverPoint t, complex z,
                         const KernelPair& kp, double eps = 0.25,
                         const QuadratureConfig& cfg = {}) {
  const Regime reg = classify(cp);
  if (reg.tag == RegimeTag::summable_1c)
    return jump_closed_form_case1(cp, line_index, t, z, kp);
  return jump_case2(cp, line_index, t, z, kp, eps, cfg).value;
}

// -------- multi-route jump reports --------

struct JumpSample {
  CoverPoint t;
  std::optional<complex> closed;
  std::optional<complex> pairing;
  std::optional<complex> lateral;
  double eps = 0.0;
  double max_rel_disagreement = 0.0;
};

struct JumpReport {
  StokesLine line;
  std::vector<JumpSample> samples;
  double max_rel_disagreement = 0.0;
};

namespace detail {

inline double rel_deviation(complex x, complex y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  if (scale == 0.0) return 0.0;
  return std::abs(x - y) / scale;
}

inline double max_pairwise_deviation(const JumpSample& s) {
  double m = 0.0;
  if (s.closed && s.pairing) m = std::max(m, rel_deviation(*s.closed, *s.pairing));
  if (s.closed && s.lateral) m = std::max(m, rel_deviation(*s.closed, *s.lateral));
  if (s.pairing && s.lateral) m = std::max(m, rel_deviation(*s.pairing, *s.lateral));
  return m;
}

}  // namespace detail

/// Evaluate the jump across one Stokes line by every route available in the
/// regime: the closed formula (Case 1 only), the hyperfunction pairing, and
/// the brute-force difference of lateral sums at offset eps.
inline JumpSample jump_sample(const CauchyProblem& cp, const StokesLine& line, double t_mod,
                              complex z, const KernelPair& kp, double eps,
                              const QuadratureConfig& cfg) {
  JumpSample s;
  s.t = CoverPoint::polar(t_mod, line.direction);
  s.eps = clamp_lateral_offset(cp, eps, line.k_sum);
  if (line.origin == StokesLine::Origin::case1) {
    s.closed = jump_closed_form_case1(cp, line.index, s.t, z, kp);
    auto g = [&cp, z](CoverPoint sp) { return borel_closed_form(cp, sp, z); };
    s.pairing = hyperfunction_pairing(g, line.direction, kp, s.t, s.eps,
                                      detail::borel_sum_growth(cp, z), cfg)
                    .value;
  } else {
    s.pairing = jump_case2(cp, line.index, s.t, z, kp, s.eps, cfg).value;
  }
  const auto hi = lateral_sum(cp, line.direction + s.eps, s.t, z, kp, cfg);
  const auto lo = lateral_sum(cp, line.direction - s.eps, s.t, z, kp, cfg);
  s.lateral = hi.value - lo.value;
  s.max_rel_disagreement = detail::max_pairwise_deviation(s);
  return s;
}

inline JumpReport jump_report(const CauchyProblem& cp, int line_index,
                              const std::vector<double>& t_moduli, complex z,
                              double eps = 0.25, const QuadratureConfig& cfg = {}) {
  const auto lines = singular_directions(cp, z);
  if (lines.empty()) throw domain_error("jump_report: no Stokes lines in this regime");
  if (line_index < 0 || line_index >= static_cast<int>(lines.size()))
    throw domain_error("jump_report: line index out of range");
  JumpReport rep;
  rep.line = lines[static_cast<std::size_t>(line_index)];
  const KernelPair kp = kernel_for(cp);
  for (double tm : t_moduli)
    rep.samples.push_back(jump_sample(cp, rep.line, tm, z, kp, eps, cfg));
  for (const auto& s : rep.samples)
    rep.max_rel_disagreement = std::max(rep.max_rel_disagreement, s.max_rel_disagreement);
  return rep;
}

}  // namespace stokes_summa
