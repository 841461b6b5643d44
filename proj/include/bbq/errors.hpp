#pragma once

#include <stdexcept>
#include <string>

namespace bbq {

/// Invalid user-facing configuration or argument (CLI exit code 2).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A resource guard refused the request (CLI exit code 3).
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solver ran out of iterations (CLI exit code 4).
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& msg, double best_residual)
      : std::runtime_error(msg), best_residual(best_residual) {}
  double best_residual = 0.0;
};

}  // namespace bbq
