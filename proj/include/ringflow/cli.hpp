#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ringflow/homotopy.hpp"

namespace ringflow::cli {

enum ExitCode : int {
  kSuccess = 0,
  kBadInput = 2,
  kNumericalFailure = 3,
};

enum class Command { Equilibrium, Trace, Fiber, Simulate, Control, Certify };

/// Everything a command needs, with all input vectors already loaded.
struct RunConfig {
  Command command = Command::Equilibrium;
  std::optional<std::vector<double>> lambda;
  std::optional<std::vector<double>> lambda_start;
  std::optional<std::vector<double>> state;   // e for fiber, x0 for simulate/control
  std::optional<std::vector<double>> target;
  std::optional<double> s;
  std::optional<double> scale;
  TracerOptions tracer;
  double dt = 1e-2;
  double t_end = 100.0;
  std::optional<double> tol;
  std::size_t every = 1;
  std::size_t n = 0;
  std::size_t samples = 100;
  std::size_t seeds = 200;
  std::vector<std::string> kinds;
  double threshold = 1e-10;
  bool uniqueness = false;
  std::size_t threads = 0;
  std::uint64_t rng_seed = 0;
  std::string out;       // empty: standard output (JSON commands)
  std::string meta;      // trace sidecar
  std::string trajectory;  // control validation CSV
};

/// Runs one command. Errors go to `err` as a JSON record; the return value is the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace ringflow::cli
