#include "toolforge/levmar.hpp"

#include <algorithm>
#include <cmath>

#include "toolforge/error.hpp"

namespace toolforge {

namespace {

Eigen::VectorXd clamp_box(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Forward differences, one-sided away from the nearer bound so evaluation
// points stay inside the box.
void jacobian_fd(const ResidualFn& f, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& r0, const Eigen::VectorXd& lo,
                 const Eigen::VectorXd& hi, double step_scale,
                 Eigen::MatrixXd& jac) {
  const auto n = x.size();
  Eigen::VectorXd xp = x;
  Eigen::VectorXd rp(r0.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    double h = step_scale * std::max(1.0, std::abs(x[j]));
    if (x[j] + h > hi[j] && x[j] - h >= lo[j]) h = -h;
    xp[j] = x[j] + h;
    f(xp, rp);
    jac.col(j) = (rp - r0) / h;
    xp[j] = x[j];
  }
}

}  // namespace

LevMarResult levmar_minimize(const ResidualFn& residuals,
                             const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper,
                             const LevMarOptions& opts) {
  const auto n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw Error(ErrorKind::invalid_argument, "levmar bound size mismatch");
  }

  Eigen::VectorXd x = clamp_box(x0, lower, upper);
  Eigen::VectorXd r;
  residuals(x, r);
  double cost = r.squaredNorm();

  Eigen::MatrixXd jac(r.size(), n);
  Eigen::VectorXd r_trial(r.size());
  double lambda = opts.initial_lambda;

  LevMarResult result;
  result.converged = false;

  int iter = 0;
  bool jac_fresh = false;
  for (; iter < opts.max_iterations; ++iter) {
    if (!jac_fresh) {
      jacobian_fd(residuals, x, r, lower, upper, opts.fd_step, jac);
      jac_fresh = true;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;

    if (g.lpNorm<Eigen::Infinity>() <= opts.gtol) {
      result.converged = true;
      break;
    }

    // Marquardt scaling: damp proportionally to the curvature per parameter.
    Eigen::MatrixXd a = jtj;
    for (Eigen::Index j = 0; j < n; ++j) {
      a(j, j) += lambda * std::max(jtj(j, j), 1e-12);
    }
    const Eigen::VectorXd step = a.ldlt().solve(-g);
    const Eigen::VectorXd x_trial = clamp_box(x + step, lower, upper);

    residuals(x_trial, r_trial);
    const double cost_trial = r_trial.squaredNorm();

    if (cost_trial < cost) {
      const double actual_step = (x_trial - x).lpNorm<Eigen::Infinity>();
      const double rel_reduction = (cost - cost_trial) / std::max(cost, 1e-300);
      x = x_trial;
      r = r_trial;
      cost = cost_trial;
      lambda = std::max(lambda * opts.lambda_down, 1e-12);
      jac_fresh = false;
      if (rel_reduction <= opts.ftol ||
          actual_step <= opts.xtol * (1.0 + x.lpNorm<Eigen::Infinity>())) {
        result.converged = true;
        ++iter;
        break;
      }
    } else {
      lambda *= opts.lambda_up;
      if (lambda > opts.max_lambda) {
        // Stalled: no downhill direction at this scale.
        break;
      }
    }
  }

  result.x = x;
  result.cost = cost;
  result.iterations = iter;
  return result;
}

}  // namespace toolforge
