#pragma once

#include <stdexcept>
#include <string>

namespace wiretap {

// Malformed input: bad file, unknown catalog name, shape mismatch,
// lattices that are not nested.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A truncated series could not reach the requested tolerance within the
// configured enumeration budget. Carries the best value seen so far.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double best_value,
                   double best_bound)
      : std::runtime_error(what),
        best_value_(best_value),
        best_bound_(best_bound) {}

  double best_value() const noexcept { return best_value_; }
  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_value_;
  double best_bound_;
};

// An argument lies outside the range where a closed-form bound holds.
class ValidityRangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace wiretap
