#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "stokes_summa/cauchy.hpp"
#include "stokes_summa/transforms.hpp"

using namespace stokes_summa;

TEST_CASE("borel transform divides coefficients termwise") {
  // sum n! t^n -> sum t^n under Gamma_1
  FormalSeries factorial{[](int n, complex) { return complex(std::exp(log_gamma(n + 1.0))); },
                         1};
  const auto b = borel(MomentFunction::gamma_moment(1.0), factorial);
  for (int n = 0; n < 12; ++n)
    CHECK(std::abs(b.coeff(n, complex(0.0)) - complex(1.0)) < 1e-12);

  // the identity moment leaves a series untouched
  const auto same = borel(MomentFunction::one(), factorial);
  for (int n = 0; n < 8; ++n)
    CHECK(std::abs(same.coeff(n, complex(0.0)) - factorial.coeff(n, complex(0.0))) < 1e-9);
}

TEST_CASE("Borel transform of the Case 1c solution sums to a geometric pole") {
  const CauchyProblem cp{2, 0, 0, complex(1.0), InitialDatum::constant(complex(1.0))};
  const KernelPair kp = kernel_for(cp);
  const auto b = borel(kp.moment, formal_solution(cp));
  auto v = series_sum_function(b, complex(0.0));
  for (double s : {0.1, 0.35, 0.6}) {
    CHECK(std::abs(v(CoverPoint::polar(s, 0.0)) - complex(1.0 / (1.0 - s))) < 1e-12);
  }
}

TEST_CASE("Laplace transform of monomials") {
  const KernelPair kp = kernel_closed_form(1.0);
  // T(s^2) at t = 0.5: m(2) t^2 = 0.5
  auto v2 = [](CoverPoint s) { return s.pow_value(2.0); };
  const auto out = laplace(kp, 0.0, v2, GrowthAttestation{}, CoverPoint::polar(0.5, 0.0));
  CHECK(std::abs(out.value - complex(0.5)) < 1e-8);
}

TEST_CASE("Laplace along the negative axis resums the alternating factorial series") {
  const KernelPair kp = kernel_closed_form(1.0);
  auto v = [](CoverPoint s) { return 1.0 / (complex(1.0) - s.value()); };
  const auto out =
      laplace(kp, pi, v, GrowthAttestation{}, CoverPoint::polar(0.2, pi),
              QuadratureConfig{}.with_tol(1e-11));
  // frozen oracle: 5 e^5 E_1(5)
  CHECK(std::abs(out.value - complex(0.8521108814236610)) < 1e-9);
}

TEST_CASE("Laplace reports a singular ray when the pole sits on it") {
  const KernelPair kp = kernel_closed_form(1.0);
  auto v = [](CoverPoint s) { return 1.0 / (complex(1.0) - s.value()); };
  QuadratureConfig cfg;
  cfg.max_segments = 700;
  CHECK_THROWS_AS(laplace(kp, 0.0, v, GrowthAttestation{}, CoverPoint::polar(0.2, 0.0), cfg),
                  singular_ray_error);
}

TEST_CASE("Laplace rejects t outside the decay sector") {
  const KernelPair kp = kernel_closed_form(1.0);
  auto v = [](CoverPoint) { return complex(1.0); };
  CHECK_THROWS_AS(
      laplace(kp, 0.0, v, GrowthAttestation{}, CoverPoint::polar(0.2, 0.9 * pi)),
      domain_error);
  CHECK_THROWS_AS(laplace(kp, 0.0, v, GrowthAttestation{}, CoverPoint{0.0, 0.0}),
                  domain_error);
}

TEST_CASE("inverse Laplace recovers monomials and Laplace images") {
  const KernelPair kp = kernel_closed_form(1.0);
  // v(t) = m(1) t is the image of s; T^- v at s = 0.5 must return 0.5
  auto v_mono = [&kp](CoverPoint t) { return std::exp(kp.moment.log_at(1.0)) * t.value(); };
  ContourGammaD contour{0.0, 0.0, 2.0};
  const auto mono = inverse_laplace(kp, contour, v_mono, complex(0.5),
                                    QuadratureConfig{}.with_tol(1e-9));
  CHECK(std::abs(mono.value - complex(0.5)) < 1e-6);

  // roundtrip through the forward transform of 1/(1+s)
  auto f = [](CoverPoint s) { return 1.0 / (complex(1.0) + s.value()); };
  auto v = [&kp, &f](CoverPoint t) {
    return laplace(kp, t.arg, f, GrowthAttestation{}, t, QuadratureConfig{}.with_tol(1e-11))
        .value;
  };
  ContourGammaD c2{0.0, 0.0, 1.5};
  const auto back =
      inverse_laplace(kp, c2, v, complex(0.3), QuadratureConfig{}.with_tol(1e-7));
  CHECK(std::abs(back.value - complex(1.0 / 1.3)) < 1e-4);

  CHECK_THROWS_AS(inverse_laplace(kp, ContourGammaD{0.0, 0.0, 0.0}, v_mono, complex(0.5)),
                  domain_error);
}

TEST_CASE("k-sum is Gevrey-asymptotic to the Euler series") {
  const CauchyProblem cp{2, 0, 0, complex(1.0), InitialDatum::constant(complex(1.0))};
  const KernelPair kp = kernel_for(cp);
  const FormalSeries fs = formal_solution(cp);
  // the Borel sum continues the divergent series past |s| = 1
  auto v = [&cp](CoverPoint s) { return borel_closed_form(cp, s, complex(0.0)); };
  const double d = pi / 2.0;
  const CoverPoint t = CoverPoint::polar(0.1, d);
  const complex u = k_sum(kp, d, v, GrowthAttestation{}, t,
                          QuadratureConfig{}.with_tol(1e-12))
                        .value;
  const int N = 6;
  const complex partial = fs.partial_sum(t.value(), complex(0.0), N);
  const double c_fit =
      std::abs(u - partial) / (std::exp(log_gamma(N + 1.0)) * std::pow(t.mod, N));
  CHECK(c_fit <= 10.0);

  // direction freedom: theta and theta + 0.01 agree in the overlap
  const complex u2 = k_sum(kp, d, v, GrowthAttestation{}, t,
                           QuadratureConfig{}.with_tol(1e-12), d + 0.01)
                         .value;
  CHECK(std::abs(u - u2) < 1e-7);

  CHECK_THROWS_AS(k_sum(kp, d, v, GrowthAttestation{}, CoverPoint::polar(0.1, d + pi)),
                  domain_error);
}

TEST_CASE("monomial identity across kernels and directions") {
  for (double k : {1.0, 2.0, 0.5}) {
    const KernelPair kp = kernel_closed_form(k);
    for (double d : {0.0, pi / 4.0, pi}) {
      const CoverPoint t = CoverPoint::polar(0.35, d);
      for (int n = 0; n <= 6; ++n) {
        auto v = [n](CoverPoint s) { return s.pow_value(static_cast<double>(n)); };
        const complex want =
            std::exp(kp.moment.log_at(n)) * t.pow_value(static_cast<double>(n));
        QuadratureConfig cfg;
        cfg.abs_tol = 1e-10 * std::max(1.0, std::abs(want));
        const complex got = laplace(kp, d, v, GrowthAttestation{}, t, cfg).value;
        CHECK(std::abs(got - want) <= 1e-7 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST_CASE("roundtrip: k_sum of the Borel transform restores convergent sums") {
  const KernelPair kp = kernel_closed_form(1.0);
  const complex z(0.2, 0.1);
  std::mt19937 rng(93u);
  std::uniform_real_distribution<double> ud(-pi, pi), ut(0.05, 0.3);
  std::vector<CauchyProblem> problems;
  problems.push_back({0, 0, 0, complex(1.1, 0.3),
                      InitialDatum::polynomial({complex(1.0), complex(0.5, -0.2)})});
  problems.push_back({1, 0, 0, complex(0.7), InitialDatum::exponential(complex(0.4))});
  for (int i = 0; i < 20; ++i) {
    const auto& cp = problems[static_cast<std::size_t>(i) % problems.size()];
    const double d = ud(rng);
    const CoverPoint t = CoverPoint::polar(ut(rng), d);
    const auto b = borel(kp.moment, formal_solution(cp));
    auto v = series_sum_function(b, z);
    GrowthAttestation vg{1.0, 1.5, 5.0};
    const complex got =
        k_sum(kp, d, v, vg, t, QuadratureConfig{}.with_tol(1e-10)).value;
    const complex want = exact_sum(cp, t.value(), z);
    CHECK(std::abs(got - want) <= 1e-7 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("the summed direction moves continuously between Stokes lines") {
  const KernelPair kp = kernel_closed_form(1.0);
  auto v = [](CoverPoint s) { return 1.0 / (complex(1.0) - s.value()); };
  double prev_d = 0.7;
  complex prev = laplace(kp, prev_d, v, GrowthAttestation{}, CoverPoint::polar(0.2, 1.0),
                         QuadratureConfig{}.with_tol(1e-11))
                     .value;
  double max_step = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double d = 0.7 + 1e-3 * i;
    const complex cur = laplace(kp, d, v, GrowthAttestation{}, CoverPoint::polar(0.2, 1.0),
                                QuadratureConfig{}.with_tol(1e-11))
                            .value;
    max_step = std::max(max_step, std::abs(cur - prev));
    prev = cur;
    prev_d = d;
  }
  CHECK(max_step <= 1e-4);
}
