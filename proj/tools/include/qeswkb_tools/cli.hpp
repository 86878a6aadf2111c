#pragma once

#include <iosfwd>
#include <string>

#include "qeswkb/potentials.hpp"

namespace qeswkb::tools {

enum class Command { Spectrum, Wkb, FitGamma, FitEnergy, Qes, Susy, Morse, Reproduce };

struct RunConfig {
  Command command = Command::Spectrum;
  PotentialSpec potential{SexticReduced{0.0}};
  int n_max = 20;
  double tol = 1e-12;
  std::string output_dir;  // empty: write the main table to stdout
  char sep = ',';
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitComputation = 3;

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses the command line and runs it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qeswkb::tools
