#pragma once

#include <stdexcept>
#include <string>

namespace planeq {

// Input or configuration rejected; message names the offending field/key.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Device-plan check failed (plan is still produced; CLI maps this to exit 3).
struct FeasibilityError : std::runtime_error {
  explicit FeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature did not reach the requested tolerance.
struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& what, double achieved_tol)
      : std::runtime_error(what), achieved(achieved_tol) {}
  double achieved;
};

}  // namespace planeq
