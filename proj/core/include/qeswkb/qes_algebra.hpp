#pragma once

// Gauge-rotated QES operators on the monomial module {1, z, ..., z^N},
// their polynomial eigenstates, the hidden sl(2) generators, and
// first-order SUSY (Darboux) partners with intertwining checks.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qeswkb/jet.hpp"
#include "qeswkb/polynomial.hpp"
#include "qeswkb/potentials.hpp"

namespace qeswkb {

enum class QesFamily { Sextic, Morse };

struct QesMatrix {
  int N = 0;
  QesFamily family = QesFamily::Sextic;
  // entries(j, k) = coefficient of z^j in h0 z^k
  Eigen::MatrixXd entries;
  // sextic gauge exp(-nu z^2/4 - mu z/2), z = x^2
  double nu = 0.0;
  double mu = 0.0;
  // Morse gauge exp(-(a/alpha) z - b x), z = exp(-alpha x); c is the
  // constant of the z-form of H0, fixed by 2c = (N alpha + b)^2.
  double a = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  double c = 0.0;
};

// h0 = -2z d^2 + (2 nu z^2 + 2 mu z - 1) d - 2 N nu z + mu/2
QesMatrix sextic_h0_matrix(int N, double nu, double mu);

// h0 = -1/2 (2 a alpha N z + b^2 - 2c) - 1/2 alpha z (alpha + 2b - 2 a z) d - 1/2 alpha^2 z^2 d^2
QesMatrix morse_h0_matrix(int N, double a, double b, double alpha);

// The differential operator of m applied to an arbitrary polynomial; the
// result may have degree deg P + 1 when P leaves the invariant module.
Polynomial apply_h0(const QesMatrix& m, const Polynomial& P);

struct Sl2Generators {
  Eigen::MatrixXd raising;   // J+ z^k = (k - N) z^{k+1}
  Eigen::MatrixXd cartan;    // J0 z^k = (k - N/2) z^k
  Eigen::MatrixXd lowering;  // J- z^k = k z^{k-1}
};
Sl2Generators sl2_generators(int N, int dim);

// -(alpha^2/2) J+J- + a alpha J+ - 1/2 alpha (2b + alpha(N+1)) J0 + lie_constant
// on the (N+1)-module.
Eigen::MatrixXd morse_lie_form(int N, double a, double b, double alpha, double lie_constant);

// Identity term that makes the Lie form equal h0 for 2c = (N alpha + b)^2:
// 1/2 (2c - b^2) - 1/4 alpha N (2b + alpha (N + 1)). The J0 shift -N/2
// contributes the second piece.
double morse_lie_constant(int N, double b, double alpha);

// max |Lie form - h0| entrywise, with the identity term above.
double morse_lie_form_check(int N, double a, double b, double alpha);

struct QesState {
  double energy = 0.0;
  int N = 0;
  QesFamily family = QesFamily::Sextic;
  Polynomial poly;  // monic
  double nu = 0.0, mu = 0.0;
  double a = 0.0, b = 0.0, alpha = 0.0;

  // psi(x) = Gamma(z(x)) P(z(x)) with four exact derivatives.
  // Throws Error{Range} when the gauge exponent leaves +-700.
  Jet wavefunction(double x) const;

  SeedSpec as_seed() const;
};

// Diagonalises the QES matrix of a SexticReduced / SexticGeneral / Morse
// spec with integer N >= 0; states sorted by energy.
std::vector<QesState> qes_states(const PotentialSpec& spec);

// Eigenvalues of a QES matrix, ascending.
std::vector<double> qes_energies(const QesMatrix& m);

// max |-1/2 psi'' + V psi - E psi| / max |psi| over the grid.
double residual_check(const PotentialSpec& spec, const QesState& state, std::span<const double> grid);

// First state whose polynomial has no root in z > 0 (and, for the sextic
// family, none at z = 0). Throws Error{NodelessViolation} if there is none.
const QesState& nodeless_state(std::span<const QesState> states);

// A1+ f = (1/sqrt 2)(-f' + W f), W = (ln u)'.
class IntertwiningOperator {
 public:
  explicit IntertwiningOperator(SeedSpec seed) : seed_(std::move(seed)) {}

  // phi = A1+ psi and its first three derivatives.
  TaylorJet<3> apply(const QesState& state, double x) const;

  double superpotential(double x) const;
  const SeedSpec& seed() const { return seed_; }

 private:
  SeedSpec seed_;
};

struct DarbouxResult {
  PotentialSpec partner;
  IntertwiningOperator A1_plus;
};

// Throws Error{NodelessViolation} if the seed polynomial has a root in z > 0.
DarbouxResult darboux(const PotentialSpec& spec, const QesState& seed);

struct IntertwiningResult {
  double residual = 0.0;   // max |(H1 - E) phi| / max |phi|
  double image_max = 0.0;  // max |phi| / max |psi|
  bool annihilated = false;
};

IntertwiningResult intertwining_residual(const PotentialSpec& spec, const QesState& seed, const QesState& state,
                                         std::span<const double> grid);

// q = -(p P' + 2 p' P), the odd-sector polynomial of the operator
// -sqrt(2z) p (d/dz + 2 p'/p) acting on P.
Polynomial apply_A1_plus_poly(int N, const Polynomial& p, const Polynomial& P);

// r = p' P - p P', with A1+ (Gamma P) = sqrt(2) x (Gamma / p) r at z = x^2.
Polynomial intertwined_polynomial(const Polynomial& p, const Polynomial& P);

// E_n = 1/2 alpha n (2b - alpha n), n = 0..n_max; needs n_max < b / alpha.
std::vector<double> morse_exact_spectrum(double a, double b, double alpha, int n_max);

std::string qes_report(std::span<const QesState> states);
std::string partner_samples_csv(const PotentialSpec& base, const PotentialSpec& partner,
                                std::span<const double> grid, char sep = ',');

}  // namespace qeswkb
