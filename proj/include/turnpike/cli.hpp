#pragma once

#include <string>

namespace turnpike::cli {

/// Parsed command line.  `command` is one of: solve, steady, optimize,
/// turnpike, sweep, check.
struct Args {
  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  int jobs = 1;
};

/// Executes one command end to end: parse + validate the config, run the
/// requested pipeline, write reports under out_dir, print a human-readable
/// summary to stdout.  Never throws; failures produce a one-line error JSON
/// on stdout (and out_dir/error.json when possible) and map to the exit
/// codes: 0 success, 2 configuration error, 3 solver error, 4 optimizer
/// error.
int run(const Args& args);

/// argv front end over run().
int main(int argc, const char* const* argv);

}  // namespace turnpike::cli
