#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lexcite {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or missing input data. The CLI maps this family to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public InputError {
 public:
  using InputError::InputError;
};

class InsufficientDataError : public InputError {
 public:
  using InputError::InputError;
};

// Input is well-formed but admits no meaningful answer (constant series,
// single-class labels, all-equal degrees).
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

// Iterative solver ran out of iterations. Carries the last iterate so callers
// can still inspect or report it. Exit code 3.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : Error(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace lexcite
