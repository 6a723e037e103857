#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stokes_summa/stokes.hpp"

using namespace stokes_summa;

namespace {

CauchyProblem euler() {
  return CauchyProblem{2, 0, 0, complex(1.0), InitialDatum::constant(complex(1.0))};
}

double rel(complex a, complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("singular directions in Case 1") {
  // a = 1, q = 1, p = 2: lines at 0 and pi
  CauchyProblem cp{2, 1, 0, complex(1.0), InitialDatum::constant(complex(1.0))};
  auto lines = singular_directions(cp, complex(0.0));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].direction == Catch::Approx(0.0).margin(1e-15));
  CHECK(lines[1].direction == Catch::Approx(pi));
  CHECK(lines[0].k_sum == Catch::Approx(2.0));

  // a = i, q = 0: single line at -pi/2
  CauchyProblem ci{2, 0, 0, complex(0.0, 1.0), InitialDatum::constant(complex(1.0))};
  auto li = singular_directions(ci, complex(0.0));
  REQUIRE(li.size() == 1);
  CHECK(li[0].direction == Catch::Approx(-pi / 2.0));
}

TEST_CASE("singular directions in Case 2 live on the cover") {
  CauchyProblem cp{0, 0, 2, complex(1.0), InitialDatum::rational_pole(complex(1.0), 1)};
  auto lines = singular_directions(cp, complex(0.0));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].direction == Catch::Approx(0.0).margin(1e-15));
  CHECK(lines[1].direction == Catch::Approx(-2.0 * pi));  // distinct cover direction
  CHECK(lines[0].k_sum == Catch::Approx(1.0));
}

TEST_CASE("convergent regimes expose no Stokes lines") {
  CauchyProblem cp{1, 0, 0, complex(1.0), InitialDatum::constant(complex(1.0))};
  CHECK(singular_directions(cp, complex(0.0)).empty());
}

TEST_CASE("anti-Stokes companions sit at +- pi/(2k)") {
  CauchyProblem cp{3, 1, 0, complex(1.0), InitialDatum::constant(complex(1.0))};
  for (const auto& L : singular_directions(cp, complex(0.0))) {
    const auto anti = L.anti_stokes();
    CHECK(anti[0] == Catch::Approx(L.direction - pi / (2.0 * L.k_sum)));
    CHECK(anti[1] == Catch::Approx(L.direction + pi / (2.0 * L.k_sum)));
  }
}

TEST_CASE("lateral sums bracket the Euler Stokes line") {
  const CauchyProblem cp = euler();
  const KernelPair kp = kernel_for(cp);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-11;
  const CoverPoint t = CoverPoint::polar(0.15, 0.0);
  const complex hi = lateral_sum(cp, 0.3, t, complex(0.0), kp, cfg).value;
  const complex lo = lateral_sum(cp, -0.3, t, complex(0.0), kp, cfg).value;
  // the two lateral sums differ by the exponentially small jump
  const double want = std::abs(2.0 * pi / 0.15 * std::exp(-1.0 / 0.15));
  CHECK(std::abs(hi - lo) == Catch::Approx(want).epsilon(1e-6));

  // on the negative axis the integrand is real: imaginary part vanishes
  const complex neg = lateral_sum(cp, pi, CoverPoint::polar(0.2, pi), complex(0.0), kp, cfg).value;
  CHECK(std::abs(neg.imag()) < 1e-9);

  CHECK_THROWS_AS(lateral_sum(cp, 0.3, CoverPoint{0.0, 0.0}, complex(0.0), kp, cfg),
                  domain_error);
  CHECK_THROWS_AS(lateral_sum(cp, 0.0, t, complex(0.0), kp, cfg), singular_ray_error);
}

TEST_CASE("Euler closed-form jump against the lateral difference") {
  const CauchyProblem cp = euler();
  const KernelPair kp = kernel_for(cp);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  const CoverPoint t = CoverPoint::polar(0.2, 0.0);
  const complex closed = jump_closed_form_case1(cp, 0, t, complex(0.0), kp);
  CHECK(rel(closed, complex(0.0, 2.0 * pi * 5.0 * std::exp(-5.0))) < 1e-12);
  const complex hi = lateral_sum(cp, 0.3, t, complex(0.0), kp, cfg).value;
  const complex lo = lateral_sum(cp, -0.3, t, complex(0.0), kp, cfg).value;
  CHECK(rel(closed, hi - lo) < 1e-5);

  // linearity in phi: the zero datum has zero jump
  CauchyProblem zero = cp;
  zero.phi = InitialDatum::constant(complex(0.0));
  CHECK(std::abs(jump_closed_form_case1(zero, 0, t, complex(0.0), kp)) == 0.0);
  CHECK_THROWS_AS(jump_closed_form_case1(cp, 0, CoverPoint{0.0, 0.0}, complex(0.0), kp),
                  domain_error);
}

TEST_CASE("hyperfunction pairing reproduces the closed form and kills entire data") {
  const CauchyProblem cp = euler();
  const KernelPair kp = kernel_for(cp);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  const CoverPoint t = CoverPoint::polar(0.2, 0.0);
  auto g = [&cp](CoverPoint s) { return borel_closed_form(cp, s, complex(0.0)); };
  const complex pairing =
      hyperfunction_pairing(g, 0.0, kp, t, 0.25, GrowthAttestation{}, cfg).value;
  const complex closed = jump_closed_form_case1(cp, 0, t, complex(0.0), kp);
  CHECK(rel(pairing, closed) < 1e-5);

  // an entire defining function represents the zero hyperfunction
  auto entire = [](CoverPoint s) { return std::exp(-s.value() * 0.3); };
  const complex zero =
      hyperfunction_pairing(entire, 0.0, kp, t, 0.25, GrowthAttestation{}, cfg).value;
  CHECK(std::abs(zero) < 1e-8);

  // linearity on samples
  auto g2 = [](CoverPoint s) { return 1.0 / (complex(2.0) - s.value()); };
  const complex p1 =
      hyperfunction_pairing(g, 0.0, kp, t, 0.25, GrowthAttestation{}, cfg).value;
  const complex p2 =
      hyperfunction_pairing(g2, 0.0, kp, t, 0.25, GrowthAttestation{}, cfg).value;
  auto gsum = [&g, &g2](CoverPoint s) { return g(s) + g2(s); };
  const complex ps =
      hyperfunction_pairing(gsum, 0.0, kp, t, 0.25, GrowthAttestation{}, cfg).value;
  CHECK(std::abs(ps - (p1 + p2)) < 1e-9);
}

TEST_CASE("three-route agreement across Case 1 problems") {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-11;
  for (int q : {0, 1}) {
    for (complex a : {complex(1.0), std::polar(1.0, pi / 3.0)}) {
      for (int datum : {0, 1}) {
        CauchyProblem cp;
        cp.p = 2;
        cp.q = q;
        cp.r = 0;
        cp.a = a;
        cp.phi = datum == 0 ? InitialDatum::constant(complex(1.0))
                            : InitialDatum::rational_pole(complex(1.0), 1);
        const complex z = datum == 0 ? complex(0.0) : complex(0.3, 0.0);
        const auto rep = jump_report(cp, 0, {0.14, 0.18, 0.22, 0.26, 0.3}, z, 0.25, cfg);
        CHECK(rep.max_rel_disagreement < 1e-4);
      }
    }
  }
}

TEST_CASE("Case 2 jump: pairing equals the lateral difference") {
  CauchyProblem cp{0, 0, 2, complex(1.0), InitialDatum::rational_pole(complex(1.0), 1)};
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-10;
  const KernelPair kp = kernel_for(cp);
  const CoverPoint t = CoverPoint::polar(0.1, 0.0);
  const auto jump = jump_case2(cp, 0, t, complex(0.0), kp, 0.2, cfg);
  const complex hi = lateral_sum(cp, 0.2, t, complex(0.0), kp, cfg).value;
  const complex lo = lateral_sum(cp, -0.2, t, complex(0.0), kp, cfg).value;
  CHECK(rel(jump.value, hi - lo) < 1e-4);
  CHECK_FALSE(jump.conditioning_warning);
  CHECK_THROWS_AS(jump_case2(cp, 0, CoverPoint{0.0, 0.0}, complex(0.0), kp, 0.2, cfg),
                  domain_error);
  CHECK_THROWS_AS(jump_case2(cp, 5, t, complex(0.0), kp, 0.2, cfg), domain_error);
}

TEST_CASE("Case 2 non-selected translates pair to zero") {
  CauchyProblem cp{0, 0, 2, complex(1.0), InitialDatum::rational_pole(complex(1.0), 1)};
  const KernelPair kp = kernel_for(cp);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-10;
  // translate j = 1 along the l = 0 line (direction 0)
  auto g1 = [](CoverPoint s) -> complex {
    const complex shift = std::polar(1.0, pi) * s.pow_value(0.5);
    return 1.0 / (complex(1.0) - shift) / 2.0;
  };
  const complex val = hyperfunction_pairing(g1, 0.0, kp, CoverPoint::polar(0.12, 0.0), 0.2,
                                            GrowthAttestation{}, cfg)
                          .value;
  CHECK(std::abs(val) < 1e-8);
}

TEST_CASE("two-route agreement for the Case 2 family") {
  struct Row {
    int p, r, q;
  };
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-10;
  for (Row row : {Row{0, 2, 0}, Row{1, 2, 0}, Row{0, 3, 0}}) {
    CauchyProblem cp;
    cp.p = row.p;
    cp.q = row.q;
    cp.r = row.r;
    cp.a = complex(1.0);
    cp.phi = InitialDatum::rational_pole(complex(1.0), 1);
    const auto rep = jump_report(cp, 0, {0.08, 0.11, 0.14}, complex(0.0), 0.2, cfg);
    CHECK(rep.max_rel_disagreement < 1e-3);
  }
}

TEST_CASE("jump scales with phi(z) in Case 1 and the line moves with z in Case 2") {
  const KernelPair kp = kernel_for(euler());
  CauchyProblem cp = euler();
  cp.phi = InitialDatum::rational_pole(complex(1.0), 1);
  const CoverPoint t = CoverPoint::polar(0.2, 0.0);
  const complex j0 = jump_closed_form_case1(cp, 0, t, complex(0.0), kp);
  const complex j5 = jump_closed_form_case1(cp, 0, t, complex(0.5), kp);
  CHECK(rel(j5, 2.0 * j0) < 1e-12);

  CauchyProblem c2{0, 0, 2, complex(1.0), InitialDatum::rational_pole(complex(1.0), 1)};
  // z0 - z real positive keeps the line at direction 0
  auto lines_half = singular_directions(c2, complex(0.5));
  CHECK(lines_half[0].direction == Catch::Approx(0.0).margin(1e-15));
  // z = 0.5i tilts it by r theta_z/(q+1) with theta_z = arg(1 - 0.5i)
  auto lines_tilt = singular_directions(c2, complex(0.0, 0.5));
  CHECK(lines_tilt[0].theta_z == Catch::Approx(-0.4636476090008061).epsilon(1e-12));
  CHECK(lines_tilt[0].direction == Catch::Approx(2.0 * -0.4636476090008061).epsilon(1e-12));
}

TEST_CASE("conditioning warning near the datum singularity") {
  CauchyProblem c2{0, 0, 2, complex(1.0), InitialDatum::rational_pole(complex(1.0), 1)};
  auto lines = singular_directions(c2, complex(0.95, 0.0));
  CHECK(lines[0].conditioning_warning);
  CHECK_THROWS_AS(singular_directions(c2, complex(1.0, 0.0)), domain_error);
}

TEST_CASE("jump decays monotonically toward the origin on the line") {
  const CauchyProblem cp = euler();
  const KernelPair kp = kernel_for(cp);
  double prev = std::numeric_limits<double>::infinity();
  for (double tm : {0.3, 0.2, 0.1, 0.05}) {
    const double mag =
        std::abs(jump_closed_form_case1(cp, 0, CoverPoint::polar(tm, 0.0), complex(0.0), kp));
    CHECK(mag < prev);
    prev = mag;
  }
}

TEST_CASE("lateral sums continue one another away from Stokes lines") {
  const CauchyProblem cp = euler();
  const KernelPair kp = kernel_for(cp);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-11;
  const CoverPoint t = CoverPoint::polar(0.18, 0.8);
  const complex u1 = lateral_sum(cp, 0.8, t, complex(0.0), kp, cfg).value;
  const complex u2 = lateral_sum(cp, 0.85, t, complex(0.0), kp, cfg).value;
  CHECK(std::abs(u1 - u2) < 1e-6);
}

TEST_CASE("jump_at_z dispatches by regime") {
  const CauchyProblem cp = euler();
  const KernelPair kp = kernel_for(cp);
  const CoverPoint t = CoverPoint::polar(0.2, 0.0);
  CHECK(rel(jump_at_z(cp, 0, t, complex(0.0), kp),
            jump_closed_form_case1(cp, 0, t, complex(0.0), kp)) < 1e-13);
}
