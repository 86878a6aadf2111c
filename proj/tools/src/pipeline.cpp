#include "qeswkb_tools/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "qeswkb/format.hpp"
#include "qeswkb/qes_algebra.hpp"

namespace qeswkb::tools {

void parallel_for(int count, const std::function<void(int)>& fn, int workers) {
  if (count <= 0) return;
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex guard;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (first) std::rethrow_exception(first);
}

SexticDataset sextic_dataset(double N, int n_max, double tol, int workers) {
  SexticDataset d;
  d.N = N;
  const PotentialSpec spec(SexticReduced{N});
  d.spectrum = lowest_eigen(spec, n_max + 1, tol);
  d.wkb.resize(static_cast<std::size_t>(n_max) + 1);
  parallel_for(
      n_max + 1, [&](int n) { d.wkb[n] = wkb_correction(spec, n, d.spectrum.energies[n]); }, workers);
  return d;
}

std::vector<FitPoint> gamma_points(const SexticDataset& d, int n_low) {
  std::vector<FitPoint> out;
  for (const auto& r : d.wkb)
    if (r.n >= n_low) out.push_back({r.n, r.gamma});
  return out;
}

std::vector<FitPoint> energy_points(const SexticDataset& d) {
  std::vector<FitPoint> out;
  for (std::size_t n = 0; n < d.spectrum.energies.size(); ++n)
    out.push_back({static_cast<int>(n), d.spectrum.energies[n]});
  return out;
}

std::vector<double> morse_closed_energies(const Morse& m, int n_max) {
  auto E = morse_exact_spectrum(m.a, m.b + m.N * m.alpha, m.alpha, n_max);
  for (double& e : E) e += m.offset;
  return E;
}

Check check_below(std::string name, double value, double threshold) {
  return Check{std::move(name), value, threshold, std::isfinite(value) && value <= threshold};
}

std::string summary_text(std::span<const Check> checks, std::span<const std::string> errors) {
  std::string out = join_row({"check", "value", "threshold", "pass"}, '\t');
  for (const auto& c : checks)
    out += join_row({c.name, format_number(c.value, 6), format_number(c.threshold), c.pass ? "pass" : "FAIL"}, '\t');
  for (const auto& e : errors) out += "error\t" + e + "\n";
  return out;
}

}  // namespace qeswkb::tools
