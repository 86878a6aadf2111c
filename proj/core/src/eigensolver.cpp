#include "qeswkb/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "qeswkb/format.hpp"

namespace qeswkb {

namespace {

// Oscillator mesh at unit scale: Gauss-Hermite nodes, the kinetic matrix of
// -d^2/dx^2 in the associated Lagrange (DVR) basis, and the node weights.
struct UnitOscillator {
  Eigen::VectorXd nodes;
  Eigen::MatrixXd kinetic;
  Eigen::VectorXd weights;
};

// ln|phi_{n}(u)| for the normalised Hermite function, via a rescaled
// three-term recurrence that survives u^2/2 beyond the exponent range.
double log_abs_hermite_function(int n, double u) {
  double log_scale = -0.5 * u * u - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0, cur = 1.0;
  for (int j = 0; j < n; ++j) {
    const double next = std::sqrt(2.0 / (j + 1.0)) * u * cur - std::sqrt(j / (j + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      prev *= 1e-150;
      cur *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
  }
  return std::log(std::abs(cur)) + log_scale;
}

std::shared_ptr<const UnitOscillator> unit_oscillator(int M) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const UnitOscillator>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(M); it != cache.end()) return it->second;
  }

  // Position operator in the Hermite-function basis is the Jacobi matrix
  // with off-diagonal sqrt((n+1)/2); its eigenvectors define the mesh basis.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(M);
  Eigen::VectorXd sub(M - 1);
  for (int n = 0; n + 1 < M; ++n) sub(n) = std::sqrt((n + 1.0) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
  jacobi.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  Eigen::MatrixXd U = jacobi.eigenvectors();
  // Fix each basis function to be positive at its own node.
  for (int i = 0; i < M; ++i)
    if (U(0, i) < 0.0) U.col(i) = -U.col(i);

  // p^2 = -d^2/dx^2 is pentadiagonal in the Hermite-function basis.
  Eigen::MatrixXd p2U = Eigen::MatrixXd::Zero(M, M);
  for (int n = 0; n < M; ++n) {
    p2U.row(n) += (n + 0.5) * U.row(n);
    if (n + 2 < M) p2U.row(n) -= 0.5 * std::sqrt((n + 1.0) * (n + 2.0)) * U.row(n + 2);
    if (n >= 2) p2U.row(n) -= 0.5 * std::sqrt((n - 1.0) * n) * U.row(n - 2);
  }

  auto unit = std::make_shared<UnitOscillator>();
  unit->nodes = jacobi.eigenvalues();
  unit->kinetic.noalias() = U.transpose() * p2U;
  unit->kinetic = 0.5 * (unit->kinetic + unit->kinetic.transpose()).eval();
  unit->weights.resize(M);
  for (int i = 0; i < M; ++i) {
    // Christoffel weight times exp(u^2): 1 / (M phi_{M-1}(u_i)^2).
    const double lphi = log_abs_hermite_function(M - 1, unit->nodes(i));
    unit->weights(i) = std::exp(-std::log(static_cast<double>(M)) - 2.0 * lphi);
  }

  std::lock_guard lock(mutex);
  return cache.emplace(M, std::move(unit)).first->second;
}

Eigen::MatrixXd kinetic_matrix(const Mesh& mesh) {
  const int M = mesh.size;
  if (mesh.kind == MeshKind::Oscillator) {
    return (0.5 / (mesh.scale * mesh.scale)) * unit_oscillator(M)->kinetic;
  }
  // Sine-basis DVR on (left, right) with M interior points, -1/2 d^2/dx^2.
  const double L = mesh.right - mesh.left;
  const int n = M + 1;
  const double pre = 0.5 * std::numbers::pi * std::numbers::pi / (2.0 * L * L);
  const double q = std::numbers::pi / (2.0 * n);
  Eigen::MatrixXd T(M, M);
  for (int i = 1; i <= M; ++i) {
    const double si = std::sin(std::numbers::pi * i / n);
    T(i - 1, i - 1) = pre * ((2.0 * n * n + 1.0) / 3.0 - 1.0 / (si * si));
    for (int j = 1; j < i; ++j) {
      const double sm = std::sin(q * (i - j));
      const double sp = std::sin(q * (i + j));
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      const double v = pre * sign * (1.0 / (sm * sm) - 1.0 / (sp * sp));
      T(i - 1, j - 1) = v;
      T(j - 1, i - 1) = v;
    }
  }
  return T;
}

bool has_asymptote(const PotentialSpec& spec) { return asymptote(spec).has_value(); }

int next_pow2(int v) {
  int p = 1;
  while (p < v) p <<= 1;
  return p;
}

Eigen::VectorXd eigenvalues_only(const PotentialSpec& spec, const Mesh& mesh) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(spec, mesh), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Picks h at the centre of the flattest stretch of E_{k-1}(h) over a
// log-spaced scan.
double tune_scale(const PotentialSpec& spec, int M, int k, double lo, double hi, int points) {
  std::vector<double> hs(static_cast<std::size_t>(points)), es(hs.size());
  for (int j = 0; j < points; ++j) {
    hs[j] = lo * std::pow(hi / lo, static_cast<double>(j) / (points - 1));
    try {
      es[j] = eigenvalues_only(spec, oscillator_mesh(M, hs[j]))(k - 1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NodePlacement) throw;
      es[j] = std::numeric_limits<double>::infinity();
    }
  }
  std::vector<double> sens(hs.size(), std::numeric_limits<double>::infinity());
  for (int j = 1; j + 1 < points; ++j) {
    const double d = std::abs(es[j + 1] - es[j - 1]);
    if (std::isfinite(d)) sens[j] = d;
  }
  const auto best_it = std::min_element(sens.begin(), sens.end());
  const int best = static_cast<int>(best_it - sens.begin());
  if (!std::isfinite(*best_it)) return hs[hs.size() / 2];
  const double floor = std::max(10.0 * *best_it, 1e-13 * std::max(1.0, std::abs(es[best])));
  int left = best, right = best;
  while (left - 1 >= 1 && sens[left - 1] <= floor) --left;
  while (right + 1 + 1 < points && sens[right + 1] <= floor) ++right;
  return hs[(left + right) / 2];
}

struct Solved {
  std::vector<double> energies;
  Eigen::MatrixXd vectors;
  double noise = 0.0;  // rounding level of the dense eigenvalues
};

Solved solve_states(const PotentialSpec& spec, const Mesh& mesh, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(spec, mesh));
  if (es.info() != Eigen::Success) fail(ErrorKind::Convergence, "dense eigensolver failed");
  Solved out;
  out.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  const auto& ev = es.eigenvalues();
  out.noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  out.vectors.resize(mesh.size, k);
  for (int n = 0; n < k; ++n) {
    Eigen::VectorXd psi = es.eigenvectors().col(n);
    for (int i = 0; i < mesh.size; ++i) psi(i) /= std::sqrt(mesh.weights[i]);
    const double peak = psi.cwiseAbs().maxCoeff();
    for (int i = 0; i < mesh.size; ++i) {
      if (std::abs(psi(i)) > 1e-8 * peak) {
        if (psi(i) < 0.0) psi = -psi;
        break;
      }
    }
    out.vectors.col(n) = psi;
  }
  return out;
}

// Walks from x0 in direction dir until V exceeds level.
double walk_until_above(const PotentialSpec& spec, double x0, double dir, double level) {
  double step = 0.05;
  double x = x0;
  for (int i = 0; i < 4000; ++i) {
    if (eval(spec, x) > level) return x;
    x += dir * step;
    step = std::min(step * 1.2, 1.0);
  }
  fail(ErrorKind::Shape, "potential does not rise above " + format_number(level));
}

struct Box {
  double left;
  double right;
};

// Left wall: far enough into the steep side that the WKB amplitude at the
// wall has decayed by exp(-decay) below the guard energy.
double left_wall(const PotentialSpec& spec, double x_min, double guard, double decay) {
  double x = walk_until_above(spec, x_min, -1.0, guard);
  double accumulated = 0.0;
  const double dx = 1e-3;
  while (accumulated < decay) {
    const double v = eval(spec, x - 0.5 * dx);
    accumulated += std::sqrt(std::max(0.0, 2.0 * (v - guard))) * dx;
    x -= dx;
    if (!std::isfinite(v)) break;
  }
  return x;
}

double right_wall(const PotentialSpec& spec, double x_min, double energy, double v_inf, double tol) {
  const double x_turn = walk_until_above(spec, x_min, +1.0, energy);
  const double kappa = std::sqrt(2.0 * std::max(v_inf - energy, 1e-12));
  return x_turn + std::log(1.0 / tol) / kappa;
}

Spectrum make_spectrum(Solved s, Mesh mesh, std::vector<double> digits, std::vector<double> deltas) {
  Spectrum sp;
  sp.energies = std::move(s.energies);
  sp.eigenvectors = std::move(s.vectors);
  sp.mesh = std::move(mesh);
  sp.converged_digits = std::move(digits);
  sp.refinement_deltas = std::move(deltas);
  return sp;
}

// Mesh doubling with a fixed box (uniform grid) or re-tuned scale (oscillator).
template <class MakeMesh>
Spectrum refine(const PotentialSpec& spec, int k, double tol, int M, int max_size, MakeMesh&& make_mesh) {
  std::vector<double> prev;
  std::vector<double> deltas;
  Spectrum best;
  for (;; M *= 2) {
    Mesh mesh = make_mesh(M);
    Solved s = solve_states(spec, mesh, k);
    std::vector<double> digits(static_cast<std::size_t>(k), 0.0);
    bool done = false;
    if (!prev.empty()) {
      double worst = 0.0;
      done = true;
      for (int n = 0; n < k; ++n) {
        const double scale = std::max(1.0, std::abs(s.energies[n]));
        const double diff = std::abs(s.energies[n] - prev[n]);
        const double rel = diff / scale;
        worst = std::max(worst, rel);
        digits[n] = std::min(16.0, -std::log10(std::max(rel, 1e-16)));
        // Differences below the rounding level of the dense solve count as agreement.
        if (diff >= std::max(tol * scale, s.noise)) done = false;
      }
      deltas.push_back(worst);
    }
    prev = s.energies;
    best = make_spectrum(std::move(s), std::move(mesh), std::move(digits), deltas);
    if (done) return best;
    if (2 * M > max_size)
      throw ConvergenceError("mesh refinement did not reach tol = " + format_number(tol) +
                                 " within " + std::to_string(max_size) + " points",
                             std::move(best));
  }
}

}  // namespace

Mesh oscillator_mesh(int size, double scale) {
  if (size < 8) fail(ErrorKind::Domain, "oscillator mesh needs at least 8 nodes");
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorKind::Domain, "mesh scale must be positive");
  const auto unit = unit_oscillator(size);
  Mesh m;
  m.kind = MeshKind::Oscillator;
  m.size = size;
  m.scale = scale;
  m.nodes.resize(size);
  m.weights.resize(size);
  for (int i = 0; i < size; ++i) {
    m.nodes[i] = scale * unit->nodes(i);
    m.weights[i] = scale * unit->weights(i);
  }
  return m;
}

Mesh uniform_grid(int size, double left, double right) {
  if (size < 8) fail(ErrorKind::Domain, "uniform grid needs at least 8 nodes");
  if (!(right > left) || !std::isfinite(left) || !std::isfinite(right))
    fail(ErrorKind::Domain, "uniform grid needs left < right");
  Mesh m;
  m.kind = MeshKind::UniformGrid;
  m.size = size;
  m.left = left;
  m.right = right;
  m.scale = (right - left) / (size + 1);
  m.nodes.resize(size);
  m.weights.assign(size, m.scale);
  for (int i = 0; i < size; ++i) m.nodes[i] = left + (i + 1) * m.scale;
  return m;
}

Eigen::MatrixXd build_hamiltonian(const PotentialSpec& spec, const Mesh& mesh) {
  Eigen::MatrixXd H = kinetic_matrix(mesh);
  for (int i = 0; i < mesh.size; ++i) {
    const double v = eval(spec, mesh.nodes[i]);
    if (!std::isfinite(v))
      fail(ErrorKind::NodePlacement, "potential is not finite at node x = " + format_number(mesh.nodes[i]));
    H(i, i) += v;
  }
  return H;
}

std::optional<int> bound_state_count(const PotentialSpec& spec) {
  if (const auto* m = spec.get_if<Morse>()) {
    const double B = m->N * m->alpha + m->b;
    if (B <= 0.0) return 0;
    // Levels n with alpha n < N alpha + b.
    return static_cast<int>(std::ceil(B / m->alpha));
  }
  if (const auto* p = spec.get_if<SusyPartner>()) {
    if (auto base = bound_state_count(*p->base)) return std::max(0, *base - 1);
  }
  return std::nullopt;
}

int node_count(const Spectrum& spectrum, int n) {
  const auto col = spectrum.eigenvectors.col(n);
  const double peak = col.cwiseAbs().maxCoeff();
  int changes = 0;
  double prev = 0.0;
  for (int i = 0; i < col.size(); ++i) {
    if (std::abs(col(i)) < 1e-7 * peak) continue;
    if (prev != 0.0 && (col(i) > 0.0) != (prev > 0.0)) ++changes;
    prev = col(i);
  }
  return changes;
}

Spectrum lowest_eigen(const PotentialSpec& spec, int k, double tol, const SolverOptions& options) {
  if (k < 1) fail(ErrorKind::Domain, "lowest_eigen: k must be >= 1");
  if (!(tol > 0.0)) fail(ErrorKind::Domain, "lowest_eigen: tol must be > 0");

  if (auto count = bound_state_count(spec)) {
    if (k > *count)
      fail(ErrorKind::SpectrumExhausted, "requested " + std::to_string(k) + " states but only " +
                                             std::to_string(*count) + " are bound");
  }

  if (!has_asymptote(spec)) {
    int M = options.initial_size > 0 ? options.initial_size : std::max(32, next_pow2(2 * k + 16));
    M = std::min(M, options.max_size);
    double h = tune_scale(spec, M, k, 3e-3, 10.0, options.scan_points);
    return refine(spec, k, tol, M, options.max_size, [&](int size) {
      h = tune_scale(spec, size, k, h / 2.8, h * 2.8, 13);
      return oscillator_mesh(size, h);
    });
  }

  const double v_inf = *asymptote(spec);
  const auto minimum = potential_minimum(spec);
  const double decay = std::log(1.0 / tol) + 20.0;
  const double left = left_wall(spec, minimum.x, v_inf, decay);
  const double p_max = std::sqrt(2.0 * (v_inf - minimum.V));
  const double spacing = 0.5 * std::numbers::pi / std::max(p_max, 1.0);

  // Size the right wall from the current estimate of E_{k-1}; widen and
  // redo the refinement if the tail criterion moves it outward.
  double right = minimum.x + 10.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const int M0 = options.initial_size > 0
                       ? options.initial_size
                       : std::min(options.max_size / 2, std::max(64, next_pow2(static_cast<int>((right - left) / spacing))));
    Spectrum sp = refine(spec, k, tol, M0, options.max_size,
                         [&](int size) { return uniform_grid(size, left, right); });
    const double needed = right_wall(spec, minimum.x, sp.energies.back(), v_inf, tol);
    if (needed <= right) return sp;
    right = needed + 1.0;
  }
  fail(ErrorKind::Convergence, "box size for the asymptotic tail did not settle");
}

double critical_N(double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::Domain, "critical_N: tol must be > 0");
  auto ground = [](double N) {
    const PotentialSpec spec(SexticReduced{N});
    return lowest_eigen(spec, 1, 1e-12).energies[0] - barrier_top(SexticReduced{N}).V;
  };
  double lo = 0.5, hi = 1.0;
  double f_lo = ground(lo), f_hi = ground(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) fail(ErrorKind::Search, "E0(N) does not change sign on [0.5, 1]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f = ground(mid);
    if (f > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string spectrum_csv(const Spectrum& spectrum, char sep) {
  std::string out = join_row({"n", "E_n", "converged_digits"}, sep);
  for (std::size_t n = 0; n < spectrum.energies.size(); ++n) {
    out += join_row({std::to_string(n), format_number(spectrum.energies[n]),
                     format_number(spectrum.converged_digits[n], 4)},
                    sep);
  }
  return out;
}

std::string eigenfunctions_csv(const Spectrum& spectrum, char sep) {
  std::vector<std::string> header{"x"};
  for (Eigen::Index n = 0; n < spectrum.eigenvectors.cols(); ++n) header.push_back("psi_" + std::to_string(n));
  std::string out = join_row(header, sep);
  for (int i = 0; i < spectrum.mesh.size; ++i) {
    std::vector<std::string> row{format_number(spectrum.mesh.nodes[i])};
    for (Eigen::Index n = 0; n < spectrum.eigenvectors.cols(); ++n)
      row.push_back(format_number(spectrum.eigenvectors(i, n)));
    out += join_row(row, sep);
  }
  return out;
}

}  // namespace qeswkb
