#pragma once

#include <stdexcept>
#include <string>

namespace mrfnet {

// Bad argument or malformed configuration. Maps to CLI exit code 2.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested state space is too large for exhaustive enumeration.
class CapacityError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// A sampler precondition does not hold (e.g. non-attractive network for CFTP).
class PreconditionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Non-finite values encountered during optimization or estimation. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coupling from the past did not coalesce within the epoch budget. Exit code 4.
class SamplerTimeout : public std::runtime_error {
 public:
  SamplerTimeout(const std::string& what, long long deepest_start)
      : std::runtime_error(what), deepest_start_(deepest_start) {}

  long long deepest_start() const noexcept { return deepest_start_; }

 private:
  long long deepest_start_;
};

}  // namespace mrfnet
