#pragma once

#include <stdexcept>
#include <string>

namespace stokes_summa {

/// Input outside the domain of an operation (bad parameters, point outside
/// the sector of validity, regime mismatch).
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A quadrature or series evaluation could not reach the requested
/// tolerance. Carries the best error estimate achieved.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// The integrand blows up on the integration ray (a pole or branch point
/// sits on the path).
class singular_ray_error : public std::runtime_error {
 public:
  explicit singular_ray_error(const std::string& what) : std::runtime_error(what) {}
};

/// A catalog datum was evaluated at its singular point.
class singular_evaluation_error : public std::runtime_error {
 public:
  explicit singular_evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stokes_summa
