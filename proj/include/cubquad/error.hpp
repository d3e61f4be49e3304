#pragma once

#include <stdexcept>
#include <string>

namespace cubquad {

/// Malformed input: bad document, zero coefficient, out-of-range parameter.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation refused to start because its estimated footprint exceeds
/// the configured cap. Carries the estimate so callers can report it.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double estimate, double cap)
      : std::runtime_error(what + " (estimate " + std::to_string(estimate) + " > cap " +
                           std::to_string(cap) + ")"),
        estimate_(estimate),
        cap_(cap) {}

  double estimate() const noexcept { return estimate_; }
  double cap() const noexcept { return cap_; }

 private:
  double estimate_;
  double cap_;
};

/// A numerical procedure did not reach its contract (quadrature tolerance,
/// anchor search, missing prerequisite).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cubquad
