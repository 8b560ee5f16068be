#pragma once

#include <Eigen/Dense>
#include <functional>

namespace toolforge {

/// Evaluates the residual vector r(x); the cost minimized is |r(x)|^2.
using ResidualFn =
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)>;

struct LevMarOptions {
  int max_iterations = 150;
  double ftol = 1e-12;   // relative cost reduction on an accepted step
  double xtol = 1e-12;   // relative step size
  double gtol = 1e-10;   // gradient infinity norm
  double initial_lambda = 1e-3;
  double lambda_up = 8.0;
  double lambda_down = 0.35;
  double max_lambda = 1e12;
  double fd_step = 1e-6;  // forward-difference step scale for the Jacobian
};

struct LevMarResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Dense Levenberg-Marquardt with box constraints enforced by clamping each
/// trial point into [lower, upper]. Only cost-decreasing steps are accepted,
/// so the returned cost never exceeds the cost at x0.
LevMarResult levmar_minimize(const ResidualFn& residuals,
                             const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper,
                             const LevMarOptions& opts = {});

}  // namespace toolforge
