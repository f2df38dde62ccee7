#pragma once

#include <stdexcept>
#include <string>

namespace homolevel {

/// Malformed input: bad dimensions, invalid files, violated preconditions.
/// The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Failure {
  not_coercive,
  radial_divergence,
  newton_stall,
  infeasible_start,
  no_progress,
  not_positive_definite,
  convexity_check,
};

inline const char* failure_name(Failure f) {
  switch (f) {
  case Failure::not_coercive: return "NotCoercive";
  case Failure::radial_divergence: return "RadialDivergence";
  case Failure::newton_stall: return "NewtonStall";
  case Failure::infeasible_start: return "InfeasibleStart";
  case Failure::no_progress: return "NoProgress";
  case Failure::not_positive_definite: return "NotPositiveDefinite";
  case Failure::convexity_check: return "ConvexityCheckFailed";
  }
  return "Unknown";
}

/// Numerical failure of an engine. The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
public:
  NumericalError(Failure kind, const std::string& what)
      : std::runtime_error(std::string(failure_name(kind)) + ": " + what), kind_(kind) {}

  Failure kind() const noexcept { return kind_; }

private:
  Failure kind_;
};

} // namespace homolevel
