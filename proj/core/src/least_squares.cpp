#include "qeswkb/least_squares.hpp"

#include <cmath>
#include <deque>

namespace qeswkb {

LmResult levenberg_marquardt(const ResidualFunction& f, Eigen::VectorXd start, const LmOptions& options) {
  const Eigen::Index m = start.size();
  LmResult out;
  out.params = std::move(start);

  Eigen::VectorXd r, r_trial;
  Eigen::MatrixXd J;
  f(out.params, r, &J);
  out.cost = 0.5 * r.squaredNorm();
  if (!std::isfinite(out.cost)) return out;

  double lambda = options.initial_damping;
  int quiet = 0;
  std::deque<double> history;  // cost after each accepted step
  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    // Column scaling keeps the wildly different parameter magnitudes apart.
    Eigen::VectorXd scale = J.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < m; ++j)
      if (!(scale(j) > 0.0)) scale(j) = 1.0;
    const Eigen::MatrixXd Js = J * scale.cwiseInverse().asDiagonal();

    // Solve min |Js d + r|^2 + lambda |d|^2 through the augmented system.
    Eigen::MatrixXd A(J.rows() + m, m);
    A << Js, std::sqrt(lambda) * Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs(J.rows() + m);
    rhs << -r, Eigen::VectorXd::Zero(m);
    const Eigen::VectorXd step = A.colPivHouseholderQr().solve(rhs).cwiseQuotient(scale);

    const Eigen::VectorXd trial = out.params + step;
    f(trial, r_trial, nullptr);
    const double cost_trial = 0.5 * r_trial.squaredNorm();

    if (std::isfinite(cost_trial) && cost_trial < out.cost) {
      const double decrease = (out.cost - cost_trial) / std::max(out.cost, 1e-300);
      const double step_rel = step.norm() / (out.params.norm() + 1e-300);
      out.params = trial;
      out.cost = cost_trial;
      f(out.params, r, &J);
      lambda = std::max(lambda / 3.0, 1e-15);
      quiet = (decrease < options.cost_tolerance || step_rel < options.step_tolerance) ? quiet + 1 : 0;
      history.push_back(out.cost);
      if (static_cast<int>(history.size()) > options.window) history.pop_front();
      const bool stalled = static_cast<int>(history.size()) == options.window &&
                           out.cost > (1.0 - options.window_decrease) * history.front();
      if (quiet >= 5 || stalled || out.cost <= options.cost_floor) {
        out.converged = true;
        return out;
      }
    } else {
      lambda *= 4.0;
      if (lambda > 1e16) {
        out.converged = true;  // no descent direction left: a stationary point
        return out;
      }
    }
  }
  return out;
}

}  // namespace qeswkb
