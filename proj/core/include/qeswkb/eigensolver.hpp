#pragma once

// Bound states of H = -1/2 d^2/dx^2 + V(x) by dense diagonalisation on a
// Lagrange mesh. Confining potentials use the scaled Gauss-Hermite
// (oscillator) mesh; potentials with a finite asymptote use a sine-basis
// grid in a hard-wall box sized from the tail decay.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qeswkb/errors.hpp"
#include "qeswkb/potentials.hpp"

namespace qeswkb {

enum class MeshKind { Oscillator, UniformGrid };

struct Mesh {
  MeshKind kind = MeshKind::Oscillator;
  int size = 0;
  double scale = 1.0;  // h: oscillator scaling, or grid spacing
  double left = 0.0;   // box walls (uniform grid only)
  double right = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;  // sum_i w_i psi(x_i)^2 = 1 for a normalised state
};

// Throws Error{Domain} for size < 8 or non-positive scale / empty box.
Mesh oscillator_mesh(int size, double scale);
Mesh uniform_grid(int size, double left, double right);

// T + diag(V(x_i)), symmetric. Throws Error{NodePlacement} if V is not
// finite at a node.
Eigen::MatrixXd build_hamiltonian(const PotentialSpec& spec, const Mesh& mesh);

struct Spectrum {
  std::vector<double> energies;
  Eigen::MatrixXd eigenvectors;  // column n holds psi_n at the mesh nodes
  Mesh mesh;
  std::vector<double> converged_digits;
  std::vector<double> refinement_deltas;  // max relative |dE| per mesh doubling
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Spectrum best)
      : Error(ErrorKind::Convergence, what), best_(std::move(best)) {}
  const Spectrum& best() const { return best_; }

 private:
  Spectrum best_;
};

struct SolverOptions {
  int initial_size = 0;  // 0: picked from the number of requested states
  int max_size = 2048;
  int scan_points = 25;
};

// k lowest eigenpairs, refined by mesh doubling until successive energies
// agree to tol * max(1, |E|).
Spectrum lowest_eigen(const PotentialSpec& spec, int k, double tol, const SolverOptions& options = {});

// Number of bound states for potentials with a finite asymptote.
std::optional<int> bound_state_count(const PotentialSpec& spec);

// Sign changes of psi_n over the mesh, ignoring numerically negligible values.
int node_count(const Spectrum& spectrum, int n);

// N in [0.5, 1] where the SexticReduced ground energy crosses the barrier top.
double critical_N(double tol);

std::string spectrum_csv(const Spectrum& spectrum, char sep = ',');
std::string eigenfunctions_csv(const Spectrum& spectrum, char sep = ',');

}  // namespace qeswkb
