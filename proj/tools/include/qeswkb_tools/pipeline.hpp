#pragma once

// Data generation shared by the command-line front end and the test suites.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qeswkb/eigensolver.hpp"
#include "qeswkb/fitmodels.hpp"
#include "qeswkb/wkb.hpp"

namespace qeswkb::tools {

// Runs fn(0..count-1) on a pool of worker threads; fn must be thread safe.
// The first exception thrown by any task is rethrown after all finish.
void parallel_for(int count, const std::function<void(int)>& fn, int workers = 0);

struct SexticDataset {
  double N = 0.0;
  Spectrum spectrum;
  std::vector<WkbRecord> wkb;  // n = 0..n_max
};

// Energies and WKB corrections of SexticReduced(N) for n = 0..n_max.
SexticDataset sextic_dataset(double N, int n_max, double tol, int workers = 0);

std::vector<FitPoint> gamma_points(const SexticDataset& d, int n_low = 3);
std::vector<FitPoint> energy_points(const SexticDataset& d);

// Energies of Morse(a, b, alpha, N) in closed form: the family is the
// N = 0 Morse potential with b -> b + N alpha, shifted by the offset.
std::vector<double> morse_closed_energies(const Morse& m, int n_max);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

Check check_below(std::string name, double value, double threshold);

std::string summary_text(std::span<const Check> checks, std::span<const std::string> errors);

}  // namespace qeswkb::tools
