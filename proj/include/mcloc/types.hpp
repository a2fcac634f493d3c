#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcloc {

using NodeId = int;
using CodeId = int;
using RequestId = std::int64_t;

inline constexpr NodeId kBroadcast = -1;
inline constexpr RequestId kNoRequest = -1;

/// Virtual time in seconds.
using SimTime = double;

/// Misuse of the engine or an API precondition violation.
class SimError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad user-supplied parameters (config values, metric arguments).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A metric that has no value for the given input (n < 2, zero requests, ...).
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A runtime check on simulator state failed.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcloc
