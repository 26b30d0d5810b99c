#pragma once

#include <stdexcept>
#include <string>

namespace eulerspec {

/// Malformed input: a flow that is not real-valued or not steady, initial data
/// off the fiber, a bad configuration. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The numerics could not deliver: step-size underflow, exhausted step
/// budget, collapsed frame, too many failed samples. Maps to CLI exit code 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepUnderflowError : public NumericalError {
 public:
  StepUnderflowError(const std::string& what, double time_reached)
      : NumericalError(what), time_reached_(time_reached) {}

  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

}  // namespace eulerspec
