#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stokes_summa/gamma.hpp"
#include "stokes_summa/mittag_leffler.hpp"

using namespace stokes_summa;

namespace {

// independent oracle: plain 200-term compensated Taylor sum
complex taylor_oracle(double alpha, complex z, int terms = 200) {
  complex sum(0.0), comp(0.0);
  complex zn(1.0);
  for (int n = 0; n < terms; ++n) {
    const complex term = zn / std::tgamma(1.0 + alpha * n);
    const complex y = term - comp;
    const complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    zn *= z;
  }
  return sum;
}

}  // namespace

TEST_CASE("index 1 and 2 reduce to exp and cosh") {
  CHECK(std::abs(mittag_leffler(1.0, complex(1.0)) - complex(2.718281828459045)) < 1e-12);
  CHECK(std::abs(mittag_leffler(2.0, complex(1.0)) - complex(1.543080634815244)) < 1e-9);
}

TEST_CASE("index 1/2 at z = -1 matches the series oracle") {
  const complex want = taylor_oracle(0.5, complex(-1.0));
  // frozen reference 0.4275835761558070 for the same sum
  CHECK(std::abs(want - complex(0.42758357615580700441)) < 1e-13);
  CHECK(std::abs(mittag_leffler(0.5, complex(-1.0)) - want) < 1e-9);
}

TEST_CASE("partial-sum tail bound past the largest term") {
  // |E - S_N| <= 2 |z|^{N+1}/Gamma(1+alpha(N+1)) once successive term
  // ratios have fallen under 1/2 (the factor 2 is the geometric envelope)
  for (double alpha : {0.5, 1.0, 1.5}) {
    for (complex z : {complex(1.2, 0.4), complex(-0.8, 0.9), complex(2.0, -1.0)}) {
      const complex full = taylor_oracle(alpha, z, 400);
      int n_half = 1;
      for (int n = 1; n < 200; ++n) {
        const double ratio = std::abs(z) * std::tgamma(1.0 + alpha * n) /
                             std::tgamma(1.0 + alpha * (n + 1));
        if (ratio <= 0.45) {
          n_half = n;
          break;
        }
      }
      for (int N = n_half; N < n_half + 8; ++N) {
        const complex partial = taylor_oracle(alpha, z, N + 1);
        const double bound =
            2.0 * std::pow(std::abs(z), N + 1) / std::tgamma(1.0 + alpha * (N + 1));
        CHECK(std::abs(full - partial) <= bound + 1e-15);
      }
    }
  }
}

TEST_CASE("large-argument evaluation stays consistent across the switchover") {
  // decay zone for alpha = 1/2 is |arg z| > pi/4; both branches of the
  // evaluator must agree around the Taylor/asymptotics switch near |z| = 5.
  // The oracle runs in extended precision because the Taylor sum cancels
  // through ~10 digits at these moduli.
  auto oracle = [](double alpha, complex z) {
    std::complex<long double> sum(0.0L), zn(1.0L);
    const std::complex<long double> zl(z.real(), z.imag());
    for (int n = 0; n < 400; ++n) {
      sum += zn / std::complex<long double>(std::tgammal(1.0L + alpha * n));
      zn *= zl;
    }
    return complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  };
  // past |z| ~ 6 the oracle itself drowns in cancellation, so the moduli
  // stay just around the switchover
  for (double mod : {4.0, 4.6, 5.0, 5.4}) {
    const complex z = std::polar(mod, 2.6);
    const complex lo = oracle(0.5, z);
    const complex hi = mittag_leffler(0.5, z);
    CHECK(std::abs(lo - hi) <= 1e-7 * std::max(1.0, std::abs(lo)));
  }
}

TEST_CASE("domain and accuracy errors") {
  CHECK_THROWS_AS(mittag_leffler(0.0, complex(1.0)), domain_error);
  CHECK_THROWS_AS(mittag_leffler(-1.0, complex(1.0)), domain_error);
}
