#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>

#include "stokes_summa/kernels.hpp"
#include "stokes_summa/quadrature.hpp"

using namespace stokes_summa;

namespace {

double mellin_dev(const KernelPair& kp, int u, double tol) {
  auto f = [&kp, u](CoverPoint s) -> complex {
    const complex e = kp.e(s);
    if (e == complex(0.0)) return e;
    return std::pow(s.mod, u - 1.0) * e;
  };
  const double want = std::exp(kp.moment.log_at(u));
  RayQuadratureSpec spec;
  spec.radius = 16.0;
  spec.abs_tol = tol * want;
  spec.origin_exponent = kp.k - 1.0 + (u - 1.0);
  const complex got = ray_integral(f, spec).value;
  return std::abs(got - complex(want)) / want;
}

}  // namespace

TEST_CASE("closed-form kernel values") {
  const KernelPair k1 = kernel_closed_form(1.0);
  CHECK(std::abs(k1.e(CoverPoint::polar(2.0, 0.0)) - complex(2.0 * std::exp(-2.0))) < 1e-14);
  CHECK(std::abs(k1.E(complex(1.0)) - complex(2.718281828459045)) < 1e-10);

  const KernelPair k2 = kernel_closed_form(2.0);
  // m(3) = Gamma(2.5), frozen oracle value
  CHECK(std::exp(k2.moment.log_at(3.0)) ==
        Catch::Approx(1.3293403881791370).epsilon(1e-12));
  CHECK_THROWS_AS(kernel_closed_form(0.0), domain_error);
  CHECK_THROWS_AS(kernel_closed_form(-1.0), domain_error);
}

TEST_CASE("e is positive on the positive axis and flat in the sector") {
  for (double k : {0.5, 1.0, 2.0}) {
    const KernelPair kp = kernel_closed_form(k);
    for (double x : {0.3, 1.0, 2.5, 6.0})
      CHECK(kp.e(CoverPoint::polar(x, 0.0)).real() > 0.0);
    // per-ray envelope A e^{-(x/B)^k} fitted on arg z = +-(pi/k - 0.2)/2.
    // The residual decay constant on that ray is cos(k arg z), so the
    // sample range scales with cos^{-1/k} to reach well past the turnover.
    const double ray = (pi / k - 0.2) / 2.0;
    const double x_hi = std::pow(14.0 / std::cos(k * ray), 1.0 / k);
    const double x_lo = x_hi * 1e-3;
    auto sample_x = [&](int i, int count) {
      return x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / count);
    };
    for (double sgn : {-1.0, 1.0}) {
      double sxx = 0, sx = 0, sxy = 0, sy = 0;
      int n = 0;
      for (int i = 0; i <= 30; ++i) {
        const double x = sample_x(i, 30);
        const double mag = std::abs(kp.e(CoverPoint::polar(x, sgn * ray)));
        if (!(mag > 0.0)) continue;
        const double u = std::pow(x, k), y = std::log(mag);
        sxx += u * u;
        sx += u;
        sxy += u * y;
        sy += y;
        ++n;
      }
      const double det = n * sxx - sx * sx;
      REQUIRE(det > 0.0);
      const double beta = -(n * sxy - sx * sy) / det;  // 1/B^k
      const double loga_fit = (sy + beta * sx) / n;
      CHECK(beta > 0.0);  // genuine exponential decay of order k on the ray
      // inflate the intercept over a denser sample set; the inflation must
      // stay small, i.e. the order-k envelope really is the right shape
      double loga = loga_fit;
      for (int i = 0; i <= 97; ++i) {
        const double x = sample_x(i, 97);
        const double mag = std::abs(kp.e(CoverPoint::polar(x, sgn * ray)));
        if (mag > 0.0) loga = std::max(loga, std::log(mag) + beta * std::pow(x, k));
      }
      CHECK(loga - loga_fit < 2.0);
      for (int i = 0; i <= 97; ++i) {
        const double x = sample_x(i, 97);
        const double mag = std::abs(kp.e(CoverPoint::polar(x, sgn * ray)));
        CHECK(mag <= std::exp(loga - beta * std::pow(x, k)) * (1.0 + 1e-9) + 1e-280);
      }
    }
  }
}

TEST_CASE("E matches its power series for |z| <= 2") {
  for (double k : {1.0, 2.0}) {
    const KernelPair kp = kernel_closed_form(k);
    for (complex z : {complex(0.5, 0.0), complex(-1.0, 1.0), complex(1.4, -1.4)}) {
      complex series(0.0);
      for (int n = 0; n < 120; ++n)
        series += std::pow(z, n) * std::exp(-kp.moment.log_at(n));
      CHECK(std::abs(kp.E(z) - series) <= 1e-8 * std::max(1.0, std::abs(series)));
    }
  }
}

TEST_CASE("iterated Case 1 kernel for p = 3, q = 0") {
  const KernelPair kp = kernel_iterated_case1(3, 0);
  CHECK(kp.k == Catch::Approx(0.5));
  CHECK(kp.moment.order() == Catch::Approx(2.0));
  // frozen double-quadrature oracle values
  CHECK(std::abs(kp.e(CoverPoint::polar(0.5, 0.0)) - complex(0.2391422107260812)) < 1e-8);
  CHECK(std::abs(kp.e(CoverPoint::polar(1.0, 0.0)) - complex(0.2277877454990669)) < 1e-8);
  CHECK(std::abs(kp.e(CoverPoint::polar(2.0, 0.0)) - complex(0.1695670959936060)) < 1e-8);
  // positivity on the real ray
  for (double x : {0.5, 1.0, 2.0}) CHECK(kp.e(CoverPoint::polar(x, 0.0)).real() > 0.0);
  // Mellin check m(1) = (1!)^2 = 1
  CHECK(mellin_dev(kp, 1, 1e-7) < 1e-6);
  // closed-form base case
  const KernelPair base = kernel_iterated_case1(2, 0);
  CHECK(std::abs(base.e(CoverPoint::polar(1.3, 0.0)) - complex(1.3 * std::exp(-1.3))) <
        1e-14);
  CHECK_THROWS_AS(kernel_iterated_case1(1, 0), domain_error);
  CHECK_THROWS_AS(kernel_iterated_case1(5, 0), domain_error);
}

TEST_CASE("Case 2 closed form at p = 1 and quotient kernel at p = 0") {
  const KernelPair k1 = kernel_iterated_case2(1, 0, 2);
  const CoverPoint z = CoverPoint::polar(1.7, 0.0);
  CHECK(std::abs(k1.e(z) - complex(0.5 * std::sqrt(1.7) * std::exp(-std::sqrt(1.7)))) <
        1e-13);

  // p = 0, q = 0, r = 2: m(u) = Gamma(1+2u)/Gamma(1+u); the unique kernel
  // with that Mellin transform is sqrt(x) e^{-x/4} / (2 sqrt(pi))
  const KernelPair kq = kernel_iterated_case2(0, 0, 2);
  CHECK(kq.k == Catch::Approx(1.0));
  for (double x : {0.4, 1.0, 2.5, 5.0}) {
    const double ref = std::sqrt(x) * std::exp(-x / 4.0) / (2.0 * std::sqrt(pi));
    CHECK(std::abs(kq.e(CoverPoint::polar(x, 0.0)) - complex(ref)) < 1e-9);
  }
  // the same closed form continues off the real ray
  const CoverPoint zc = CoverPoint::polar(1.5, 0.25);
  const complex zz = zc.value();
  const complex ref = std::sqrt(zz) * std::exp(-zz / 4.0) / (2.0 * std::sqrt(pi));
  CHECK(std::abs(kq.e(zc) - ref) < 1e-9);
  // Mellin identity m(1) = 2 through the quadrature route
  CHECK(mellin_dev(kq, 1, 1e-7) < 1e-5);

  CHECK_THROWS_AS(kernel_iterated_case2(0, 0, 1), domain_error);
}

TEST_CASE("Case 2 iterated kernel at p = 2 satisfies the Mellin identity") {
  // m(1) = Gamma(1+2) * Gamma(1+1) = 2
  const KernelPair kp = kernel_iterated_case2(2, 0, 2);
  CHECK(std::exp(kp.moment.log_at(1.0)) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(mellin_dev(kp, 1, 1e-6) < 1e-5);
}

TEST_CASE("Mellin identity holds for every constructible pair of depth <= 2") {
  std::vector<KernelPair> pairs;
  pairs.push_back(kernel_closed_form(1.0));
  pairs.push_back(kernel_closed_form(2.0));
  pairs.push_back(kernel_closed_form(0.5));
  pairs.push_back(kernel_iterated_case1(3, 0));
  pairs.push_back(kernel_iterated_case1(3, 1));
  pairs.push_back(kernel_iterated_case2(0, 0, 2));
  pairs.push_back(kernel_iterated_case2(2, 0, 2));
  pairs.push_back(kernel_iterated_case2(0, 0, 3));
  for (const auto& kp : pairs) {
    for (int u : {1, 2, 3}) {
      CHECK(mellin_dev(kp, u, 1e-7) < 1e-6);
    }
  }
}

TEST_CASE("kernel sample files round-trip") {
  const KernelPair kp = kernel_closed_form(1.0);
  std::vector<double> xs, es;
  for (int i = 1; i <= 64; ++i) {
    const double x = 0.1 * i;
    xs.push_back(x);
    es.push_back(kp.e(CoverPoint::polar(x, 0.0)).real());
  }
  const std::string path = "/tmp/" + kernel_cache_name(2, 0, 0, 0.0, 1e-9);
  REQUIRE(save_kernel_samples(path, xs, es));
  std::vector<double> xs2, es2;
  REQUIRE(load_kernel_samples(path, xs2, es2));
  REQUIRE(xs2.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(xs2[i] == xs[i]);
    CHECK(es2[i] == es[i]);
  }
  std::remove(path.c_str());
}
