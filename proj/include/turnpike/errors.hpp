#pragma once

#include <stdexcept>
#include <string>

namespace turnpike {

/// Raised when a time-stepping or Newton solve cannot continue.
///
/// Carries enough context for a driver to print an actionable message:
/// the failing step (or iteration) index, the simulated time at which the
/// failure occurred, and — for blow-ups — a suggested smaller time step.
class SolveError : public std::runtime_error {
public:
  enum class Kind {
    BlowUp,       ///< a non-finite value appeared in the state
    NewtonStall,  ///< the damped Newton iteration stopped making progress
  };

  SolveError(Kind kind, std::string message, long step, double time,
             double suggested_dt = 0.0)
      : std::runtime_error(std::move(message)),
        kind_(kind),
        step_(step),
        time_(time),
        suggested_dt_(suggested_dt) {}

  Kind kind() const { return kind_; }
  long step() const { return step_; }
  double time() const { return time_; }

  /// For blow-ups: a time step expected to be stable, 0 if not applicable.
  double suggested_dt() const { return suggested_dt_; }

private:
  Kind kind_;
  long step_;
  double time_;
  double suggested_dt_;
};

/// Raised when a run configuration cannot be parsed or fails validation.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::string message)
      : std::runtime_error(std::move(message)) {}
};

}  // namespace turnpike
