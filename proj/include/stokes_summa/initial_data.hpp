#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/gamma.hpp"

namespace stokes_summa {

/// Closed catalog of initial data phi. Every variant ships exact
/// derivatives of all orders and, for the singular variants, the location
/// of the singular point z0. The singularity analysis consumes arg(z0 - z)
/// analytically, which rules out opaque user-supplied functions.
class InitialDatum {
 public:
  enum class Variant { polynomial, exponential, rational_pole, power_branch, log_branch };

  static InitialDatum polynomial(std::vector<complex> coeffs) {
    InitialDatum d;
    d.variant_ = Variant::polynomial;
    d.coeffs_ = std::move(coeffs);
    if (d.coeffs_.empty()) d.coeffs_.push_back(complex(0.0));
    return d;
  }

  static InitialDatum constant(complex c) { return polynomial({c}); }

  static InitialDatum exponential(complex lambda) {
    InitialDatum d;
    d.variant_ = Variant::exponential;
    d.lambda_ = lambda;
    return d;
  }

  /// 1 / (z0 - z)^m with integer pole order m >= 1.
  static InitialDatum rational_pole(complex z0, int m) {
    if (m < 1) throw domain_error("rational_pole: order must be >= 1");
    InitialDatum d;
    d.variant_ = Variant::rational_pole;
    d.z0_ = z0;
    d.pole_order_ = m;
    return d;
  }

  /// (z0 - z)^alpha with alpha not a nonnegative integer.
  static InitialDatum power_branch(complex z0, double alpha) {
    if (alpha >= 0.0 && alpha == std::floor(alpha))
      throw domain_error("power_branch: alpha must not be a nonnegative integer");
    InitialDatum d;
    d.variant_ = Variant::power_branch;
    d.z0_ = z0;
    d.alpha_ = alpha;
    return d;
  }

  /// log(z0 - z), principal branch.
  static InitialDatum log_branch(complex z0) {
    InitialDatum d;
    d.variant_ = Variant::log_branch;
    d.z0_ = z0;
    return d;
  }

  Variant variant() const { return variant_; }
  const std::vector<complex>& coefficients() const { return coeffs_; }
  complex lambda() const { return lambda_; }
  int pole_order() const { return pole_order_; }
  double alpha() const { return alpha_; }

  bool is_entire() const {
    return variant_ == Variant::polynomial || variant_ == Variant::exponential;
  }

  std::optional<complex> singular_point() const {
    if (is_entire()) return std::nullopt;
    return z0_;
  }

  /// Exponential growth order on the relevant cover (polynomials: 0,
  /// exp: 1; the singular variants are bounded at infinity away from z0).
  double growth_order() const {
    switch (variant_) {
      case Variant::exponential: return 1.0;
      default: return 0.0;
    }
  }

  /// Growth rate paired with growth_order(): |phi(z)| <= C exp(rate |z|^order).
  double growth_rate() const {
    return variant_ == Variant::exponential ? std::abs(lambda_) : 0.0;
  }

  complex eval(complex z) const { return derivative_eval(0, z); }

  /// Exact n-th derivative value; no numerical differentiation anywhere.
  complex derivative_eval(int n, complex z) const {
    switch (variant_) {
      case Variant::polynomial: {
        // d^n/dz^n sum c_j z^j = sum_{j>=n} c_j j!/(j-n)! z^{j-n}
        complex acc(0.0);
        const int deg = static_cast<int>(coeffs_.size()) - 1;
        for (int j = deg; j >= n; --j) {
          double fall = 1.0;
          for (int i = 0; i < n; ++i) fall *= static_cast<double>(j - i);
          acc = acc * z + coeffs_[static_cast<std::size_t>(j)] * fall;
        }
        return acc;
      }
      case Variant::exponential: {
        complex lam_n(1.0);
        for (int i = 0; i < n; ++i) lam_n *= lambda_;
        return lam_n * std::exp(lambda_ * z);
      }
      case Variant::rational_pole: {
        const complex w = z0_ - z;
        if (w == complex(0.0)) throw singular_evaluation_error("rational_pole at z0");
        // d^n/dz^n (z0-z)^{-m} = (m)_n (z0-z)^{-m-n}  (rising factorial)
        double rising = 1.0;
        for (int i = 0; i < n; ++i) rising *= static_cast<double>(pole_order_ + i);
        return rising * std::pow(w, complex(-static_cast<double>(pole_order_ + n)));
      }
      case Variant::power_branch: {
        const complex w = z0_ - z;
        if (w == complex(0.0)) throw singular_evaluation_error("power_branch at z0");
        // d^n/dz^n (z0-z)^a = (-1)^n a(a-1)...(a-n+1) (z0-z)^{a-n}; each
        // d/dz contributes the inner factor -1.
        double fall = 1.0;
        for (int i = 0; i < n; ++i) fall *= (alpha_ - static_cast<double>(i)) * -1.0;
        return fall * std::pow(w, complex(alpha_ - static_cast<double>(n)));
      }
      case Variant::log_branch: {
        const complex w = z0_ - z;
        if (w == complex(0.0)) throw singular_evaluation_error("log_branch at z0");
        if (n == 0) return std::log(w);
        // d^n/dz^n log(z0-z) = -(n-1)! (z0-z)^{-n}
        return -std::exp(log_gamma(static_cast<double>(n))) *
               std::pow(w, complex(-static_cast<double>(n)));
      }
    }
    throw domain_error("InitialDatum: unknown variant");
  }

  std::string variant_name() const {
    switch (variant_) {
      case Variant::polynomial: return "polynomial";
      case Variant::exponential: return "exp";
      case Variant::rational_pole: return "rational";
      case Variant::power_branch: return "power_branch";
      case Variant::log_branch: return "log_branch";
    }
    return "?";
  }

 private:
  Variant variant_ = Variant::polynomial;
  std::vector<complex> coeffs_;
  complex lambda_{0.0};
  complex z0_{0.0};
  int pole_order_ = 1;
  double alpha_ = 0.5;
};

/// Evaluator view of the n-th derivative of a datum.
struct DatumDerivative {
  const InitialDatum* datum;
  int order;
  complex eval(complex z) const { return datum->derivative_eval(order, z); }
};

inline DatumDerivative datum_derivative(const InitialDatum& phi, int n) {
  if (n < 0) throw domain_error("datum_derivative: n must be >= 0");
  return DatumDerivative{&phi, n};
}

}  // namespace stokes_summa
