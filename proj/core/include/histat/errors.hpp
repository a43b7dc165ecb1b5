#pragma once

#include <stdexcept>
#include <string>

namespace histat {

// Arguments outside an operation's domain (bad counts, probabilities, ranges).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input data: tables, archives, manifests.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-convergence, degenerate samples.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, int iterations = 0)
      : std::runtime_error(what), iterations_(iterations) {}

  // Iteration count at the point of failure, when convergence was involved.
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

}  // namespace histat
