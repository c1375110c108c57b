#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace homsync {

// Base for every recoverable failure raised by the library. Math functions
// report invalid arguments through std::domain_error instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Least-squares fit did not converge. Carries the last iterate
// (baseline, depth, center, width) for diagnostics.
class FitError : public Error {
 public:
  FitError(const std::string& what, std::array<double, 4> last_iterate, int iterations)
      : Error(what), last_iterate_(last_iterate), iterations_(iterations) {}

  const std::array<double, 4>& last_iterate() const noexcept { return last_iterate_; }
  int iterations() const noexcept { return iterations_; }

 private:
  std::array<double, 4> last_iterate_;
  int iterations_;
};

// The scan contains no resolvable dip (too few points, flat data, or a
// non-positive fitted depth).
class NoDipError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace homsync
