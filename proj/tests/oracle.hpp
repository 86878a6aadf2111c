#pragma once

// Reference computations that share no code with the library: a harmonic
// oscillator basis Rayleigh-Ritz solver for polynomial potentials and a few
// closed-form integrals.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace oracle {

// Lowest eigenvalues of -1/2 d^2 + sum_k c[k] x^k in a basis of `dim`
// oscillator states of frequency omega. Matrix elements via ladder operators.
inline std::vector<double> ho_basis_levels(const std::vector<double>& c, int dim, double omega, int count) {
  const int pad = dim + static_cast<int>(c.size()) + 2;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(pad, pad);
  for (int n = 0; n + 1 < pad; ++n) X(n, n + 1) = X(n + 1, n) = std::sqrt((n + 1) / (2.0 * omega));
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(pad, pad);
  // kinetic: p^2/2 = omega/4 (2n+1) on the diagonal, -omega/4 sqrt((n+1)(n+2)) two off
  for (int n = 0; n < pad; ++n) {
    H(n, n) += 0.25 * omega * (2 * n + 1);
    if (n + 2 < pad) H(n, n + 2) = H(n + 2, n) = -0.25 * omega * std::sqrt((n + 1.0) * (n + 2.0));
  }
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(pad, pad);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k > 0) P = P * X;
    if (c[k] != 0.0) H += c[k] * P;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(dim, dim), Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + count);
  return out;
}

// Power-series coefficients of 1/2 (nu^2 x^6 + 2 nu mu x^4 + (mu^2 - (4N+3) nu) x^2).
inline std::vector<double> sextic_coeffs(double N, double nu = 1.0, double mu = 1.0) {
  return {0.0, 0.0, 0.5 * (mu * mu - (4.0 * N + 3.0) * nu), 0.0, nu * mu, 0.0, 0.5 * nu * nu};
}

// S(E) for V = x^6 / 2: 2 (2E)^(2/3) int_0^1 sqrt(1 - t^6) dt.
inline double pure_sextic_action(double E) {
  const double integral = boost::math::beta(1.0 / 6.0, 1.5) / 6.0;
  return 2.0 * std::pow(2.0 * E, 2.0 / 3.0) * integral;
}

// Action by tanh-sinh between given turning points.
inline double action(const std::function<double(double)>& V, double E, double x1, double x2) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate([&](double x) { return std::sqrt(std::max(0.0, 2.0 * (E - V(x)))); }, x1, x2);
}

// Root of f on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace oracle
