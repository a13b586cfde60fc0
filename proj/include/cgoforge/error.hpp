#pragma once

#include <stdexcept>
#include <string>

namespace cgoforge {

// Base for all artifact errors; the category drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input: frames, configs, expressions, shapes.
class InputError : public Error {
 public:
  using Error::Error;
};

// Numerical method failed; carries the last residual seen.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cgoforge
