#pragma once

// Damped Gauss-Newton (Levenberg-Marquardt) for small dense problems.

#include <functional>

#include <Eigen/Dense>

namespace qeswkb {

// Fills residuals r(p) and, when jac is non-null, the Jacobian dr/dp.
using ResidualFunction = std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac)>;

struct LmOptions {
  int max_iterations = 20000;
  double cost_tolerance = 1e-9;  // relative decrease of the cost between accepted steps
  double step_tolerance = 1e-14;  // relative step length
  double cost_floor = 1e-21;      // an exact fit: stop once the cost is below this
  double initial_damping = 1e-3;
  // Also stop once the cost fell by less than this fraction over the last
  // `window` accepted steps (slow crawl along a flat valley).
  int window = 100;
  double window_decrease = 0.05;
};

struct LmResult {
  Eigen::VectorXd params;
  double cost = 0.0;  // 1/2 |r|^2
  int iterations = 0;
  bool converged = false;
};

LmResult levenberg_marquardt(const ResidualFunction& f, Eigen::VectorXd start, const LmOptions& options = {});

}  // namespace qeswkb
