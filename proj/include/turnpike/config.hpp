#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "turnpike/optimize.hpp"
#include "turnpike/problem.hpp"
#include "turnpike/steady.hpp"

namespace turnpike {

/// A fully resolved run configuration: every knob has an explicit value
/// after parsing, so reports can embed the exact inputs that produced them.
struct RunConfig {
  ProblemSpec problem;
  DiscretizationSpec disc;  ///< nt derived from disc.dt when not given directly
  OptimizeOptions optimizer;
  SteadyOptions steady;

  struct TurnpikeSection {
    double delta = 0.0;  ///< 0: auto threshold
    double tau = 1.0;    ///< feedback→hold switch of the quasi-optimal strategy
    double kappa = 10.0;
  } turnpike;

  struct SweepSection {
    std::vector<double> horizons{2.0, 4.0, 8.0};
    double dt = 1e-3;
    int nx = 100;
  } sweep;

  unsigned seed = 1;  ///< drives the randomized self-checks only

  /// Every field, resolved, in a fixed key order (deterministic dumps).
  nlohmann::ordered_json to_json() const;
};

/// Parses the flat `section.key = value` format (see README for the full
/// key list), applies defaults, and validates the resulting problem spec.
/// Throws ConfigError on syntax errors, unknown keys, type mismatches, or
/// spec violations — the message carries the complete list.
RunConfig parse_config_text(const std::string& text);

/// As parse_config_text, reading from a file.  Throws ConfigError if the
/// file cannot be read.
RunConfig parse_config_file(const std::string& path);

}  // namespace turnpike
