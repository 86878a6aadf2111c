#include "qeswkb/qes_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qeswkb/errors.hpp"
#include "qeswkb/format.hpp"

namespace qeswkb {

namespace {

void require_N(int N) {
  if (N < 0) fail(ErrorKind::Domain, "cohomology parameter N must be a non-negative integer");
}

int integer_N(double N) {
  if (N < 0.0 || N != std::floor(N) || N > 64.0)
    fail(ErrorKind::Unsupported, "QES states need an integer N >= 0, got N = " + format_number(N));
  return static_cast<int>(N);
}

// Columns of the matrix are the images of z^k, truncated to the module.
Eigen::MatrixXd module_matrix(const QesMatrix& m) {
  const int dim = m.N + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const Polynomial image = apply_h0(m, Polynomial::monomial(k));
    for (int j = 0; j < dim; ++j) out(j, k) = image.coefficient(j);
  }
  return out;
}

Polynomial from_vector(const Eigen::VectorXd& v) {
  return Polynomial(std::vector<double>(v.data(), v.data() + v.size())).monic();
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

QesMatrix sextic_h0_matrix(int N, double nu, double mu) {
  require_N(N);
  if (!(nu > 0.0)) fail(ErrorKind::Domain, "sextic_h0_matrix: nu must be > 0");
  QesMatrix m;
  m.N = N;
  m.family = QesFamily::Sextic;
  m.nu = nu;
  m.mu = mu;
  m.entries = module_matrix(m);
  return m;
}

QesMatrix morse_h0_matrix(int N, double a, double b, double alpha) {
  require_N(N);
  if (!(a > 0.0) || !(alpha > 0.0)) fail(ErrorKind::Domain, "morse_h0_matrix: a and alpha must be > 0");
  QesMatrix m;
  m.N = N;
  m.family = QesFamily::Morse;
  m.a = a;
  m.b = b;
  m.alpha = alpha;
  m.c = 0.5 * (N * alpha + b) * (N * alpha + b);
  m.entries = module_matrix(m);
  return m;
}

Polynomial apply_h0(const QesMatrix& m, const Polynomial& P) {
  const Polynomial z = Polynomial::monomial(1);
  const Polynomial d1 = P.derivative();
  const Polynomial d2 = d1.derivative();
  const double N = m.N;
  if (m.family == QesFamily::Sextic) {
    const Polynomial drift{-1.0, 2.0 * m.mu, 2.0 * m.nu};
    const Polynomial constant{0.5 * m.mu, -2.0 * N * m.nu};
    return (-2.0 * z) * d2 + drift * d1 + constant * P;
  }
  const double al = m.alpha;
  const Polynomial constant{-0.5 * (m.b * m.b - 2.0 * m.c), -m.a * al * N};
  const Polynomial drift{0.0, -0.5 * al * (al + 2.0 * m.b), m.a * al};
  return constant * P + drift * d1 + Polynomial::monomial(2, -0.5 * al * al) * d2;
}

Sl2Generators sl2_generators(int N, int dim) {
  require_N(N);
  if (dim < 1) fail(ErrorKind::Domain, "sl2_generators: dim must be positive");
  Sl2Generators g{Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim)};
  for (int k = 0; k < dim; ++k) {
    if (k + 1 < dim) g.raising(k + 1, k) = k - N;
    g.cartan(k, k) = k - 0.5 * N;
    if (k > 0) g.lowering(k - 1, k) = k;
  }
  return g;
}

Eigen::MatrixXd morse_lie_form(int N, double a, double b, double alpha, double lie_constant) {
  const auto g = sl2_generators(N, N + 1);
  const int dim = N + 1;
  return -0.5 * alpha * alpha * g.raising * g.lowering + a * alpha * g.raising -
         0.5 * alpha * (2.0 * b + alpha * (N + 1)) * g.cartan + lie_constant * Eigen::MatrixXd::Identity(dim, dim);
}

double morse_lie_constant(int N, double b, double alpha) {
  const double c = 0.5 * (N * alpha + b) * (N * alpha + b);
  return 0.5 * (2.0 * c - b * b) - 0.25 * alpha * N * (2.0 * b + alpha * (N + 1));
}

double morse_lie_form_check(int N, double a, double b, double alpha) {
  const QesMatrix h0 = morse_h0_matrix(N, a, b, alpha);
  const Eigen::MatrixXd lie = morse_lie_form(N, a, b, alpha, morse_lie_constant(N, b, alpha));
  return (lie - h0.entries).cwiseAbs().maxCoeff();
}

Jet QesState::wavefunction(double x) const {
  const Jet xj = Jet::variable(x);
  Jet z, log_gauge;
  if (family == QesFamily::Sextic) {
    z = xj * xj;
    log_gauge = -0.25 * nu * (z * z) - 0.5 * mu * z;
  } else {
    z = exp(-alpha * xj);
    log_gauge = -(a / alpha) * z - b * xj;
  }
  if (!(std::abs(log_gauge.value()) <= 700.0))
    fail(ErrorKind::Range, "gauge factor out of range at x = " + format_number(x));
  return exp(log_gauge) * poly(z);
}

SeedSpec QesState::as_seed() const {
  if (family == QesFamily::Sextic) return SexticGround{N, nu, mu, poly};
  return MorseGround{N, a, b, alpha, poly};
}

std::vector<double> qes_energies(const QesMatrix& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m.entries, false);
  std::vector<double> out;
  for (const auto& ev : solver.eigenvalues()) out.push_back(ev.real());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<QesState> qes_states(const PotentialSpec& spec) {
  std::vector<QesState> states;
  if (const auto* mo = spec.get_if<Morse>()) {
    const int N = integer_N(mo->N);
    const QesMatrix m = morse_h0_matrix(N, mo->a, mo->b, mo->alpha);
    // Lower bidiagonal: eigenvectors by forward substitution.
    for (int top = 0; top <= N; ++top) {
      const double lambda = m.entries(top, top);
      Eigen::VectorXd v = Eigen::VectorXd::Zero(N + 1);
      v(top) = 1.0;
      for (int j = top + 1; j <= N; ++j) v(j) = m.entries(j, j - 1) * v(j - 1) / (lambda - m.entries(j, j));
      QesState s;
      s.energy = lambda + mo->offset;
      s.N = N;
      s.family = QesFamily::Morse;
      s.poly = from_vector(v);
      s.a = mo->a;
      s.b = mo->b;
      s.alpha = mo->alpha;
      states.push_back(std::move(s));
    }
  } else {
    SexticGeneral g;
    if (const auto* r = spec.get_if<SexticReduced>())
      g = as_general(*r);
    else if (const auto* s = spec.get_if<SexticGeneral>())
      g = *s;
    else
      fail(ErrorKind::Unsupported, "qes_states: family " + spec.family() + " has no QES sector");
    const int N = integer_N(g.N);
    const QesMatrix m = sextic_h0_matrix(N, g.nu, g.mu);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m.entries);
    for (int i = 0; i <= N; ++i) {
      QesState s;
      s.energy = solver.eigenvalues()(i).real();
      s.N = N;
      s.family = QesFamily::Sextic;
      s.poly = from_vector(solver.eigenvectors().col(i).real());
      s.nu = g.nu;
      s.mu = g.mu;
      states.push_back(std::move(s));
    }
  }
  std::sort(states.begin(), states.end(), [](const QesState& l, const QesState& r) { return l.energy < r.energy; });
  return states;
}

double residual_check(const PotentialSpec& spec, const QesState& state, std::span<const double> grid) {
  std::vector<double> psi, res;
  for (double x : grid) {
    const Jet p = state.wavefunction(x);
    psi.push_back(p.value());
    res.push_back(-0.5 * p.derivative(2) + (eval(spec, x) - state.energy) * p.value());
  }
  const double scale = max_abs(psi);
  if (scale == 0.0) fail(ErrorKind::Range, "residual_check: wavefunction vanishes on the grid");
  return max_abs(res) / scale;
}

double IntertwiningOperator::superpotential(double x) const { return seed_log_jet(seed_, x).derivative(1); }

TaylorJet<3> IntertwiningOperator::apply(const QesState& state, double x) const {
  const Jet psi = state.wavefunction(x);
  const Jet W = seed_log_jet(seed_, x).differentiated();
  const Jet phi = (W * psi - psi.differentiated()) * (1.0 / std::numbers::sqrt2);
  return phi.truncated<3>();
}

namespace {

bool nodeless(const QesState& s) {
  if (s.poly.positive_root_count() > 0) return false;
  return s.family != QesFamily::Sextic || s.poly(0.0) != 0.0;
}

}  // namespace

const QesState& nodeless_state(std::span<const QesState> states) {
  for (const auto& s : states)
    if (nodeless(s)) return s;
  fail(ErrorKind::NodelessViolation, "no QES state is nodeless");
}

DarbouxResult darboux(const PotentialSpec& spec, const QesState& seed) {
  if (!nodeless(seed)) fail(ErrorKind::NodelessViolation, "seed wavefunction has a node (polynomial root in z > 0)");
  SeedSpec s = seed.as_seed();
  return DarbouxResult{make_susy_partner(spec, s), IntertwiningOperator(s)};
}

IntertwiningResult intertwining_residual(const PotentialSpec& spec, const QesState& seed, const QesState& state,
                                         std::span<const double> grid) {
  const DarbouxResult d = darboux(spec, seed);
  std::vector<double> psi, phi, res;
  for (double x : grid) {
    psi.push_back(state.wavefunction(x).value());
    const TaylorJet<3> f = d.A1_plus.apply(state, x);
    phi.push_back(f.value());
    res.push_back(-0.5 * f.derivative(2) + (eval(d.partner, x) - state.energy) * f.value());
  }
  IntertwiningResult r;
  const double psi_max = max_abs(psi);
  const double phi_max = max_abs(phi);
  r.image_max = psi_max > 0.0 ? phi_max / psi_max : 0.0;
  r.annihilated = r.image_max < 1e-12;
  r.residual = r.annihilated ? 0.0 : max_abs(res) / phi_max;
  return r;
}

Polynomial apply_A1_plus_poly(int N, const Polynomial& p, const Polynomial& P) {
  if (N < 1) fail(ErrorKind::Domain, "apply_A1_plus_poly: N must be >= 1");
  return -(p * P.derivative() + 2.0 * (p.derivative() * P));
}

Polynomial intertwined_polynomial(const Polynomial& p, const Polynomial& P) {
  return p.derivative() * P - p * P.derivative();
}

std::vector<double> morse_exact_spectrum(double a, double b, double alpha, int n_max) {
  if (!(a > 0.0) || !(alpha > 0.0)) fail(ErrorKind::Domain, "morse_exact_spectrum: a and alpha must be > 0");
  if (n_max < 0) fail(ErrorKind::Domain, "morse_exact_spectrum: n_max must be >= 0");
  if (n_max >= b / alpha)
    fail(ErrorKind::SpectrumExhausted, "n_max = " + std::to_string(n_max) + " is beyond the bound spectrum (b/alpha = " +
                                           format_number(b / alpha) + ")");
  std::vector<double> out;
  for (int n = 0; n <= n_max; ++n) out.push_back(0.5 * alpha * n * (2.0 * b - alpha * n));
  return out;
}

std::string qes_report(std::span<const QesState> states) {
  int width = 0;
  for (const auto& s : states) width = std::max(width, s.poly.degree() + 1);
  std::vector<std::string> head{"N", "index", "E"};
  for (int k = 0; k < width; ++k) head.push_back("p" + std::to_string(k));
  std::string out = join_row(head, '\t');
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<std::string> row{std::to_string(states[i].N), std::to_string(i), format_number(states[i].energy)};
    for (int k = 0; k < width; ++k) row.push_back(format_number(states[i].poly.coefficient(k)));
    out += join_row(row, '\t');
  }
  return out;
}

std::string partner_samples_csv(const PotentialSpec& base, const PotentialSpec& partner,
                                std::span<const double> grid, char sep) {
  std::string out = join_row({"x", "V0", "V1"}, sep);
  for (double x : grid) out += join_row({format_number(x), format_number(eval(base, x)), format_number(eval(partner, x))}, sep);
  return out;
}

}  // namespace qeswkb
