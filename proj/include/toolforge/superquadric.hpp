#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "toolforge/geometry.hpp"

namespace toolforge {

/// Tapered superellipsoid, 13 parameters:
/// 3 semi-axis scales, 2 shape exponents, 3 ZYZ Euler angles, 2 linear taper
/// coefficients along the local z axis, and the center.
struct SuperquadricParams {
  Eigen::Vector3d scale = Eigen::Vector3d::Ones();   // a1,a2,a3 (m), > 0
  Eigen::Vector2d shape = Eigen::Vector2d::Ones();   // eps1,eps2 in [0.1, 2]
  Eigen::Vector3d euler = Eigen::Vector3d::Zero();   // phi,theta,psi (rad, ZYZ)
  Eigen::Vector2d taper = Eigen::Vector2d::Zero();   // kx,ky in (-1, 1)
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // m

  /// Local-to-world rotation.
  Eigen::Matrix3d rotation() const;

  /// Throws invalid_argument when a bound is violated.
  void validate() const;
};

struct SqFitResult {
  SuperquadricParams params;
  double residual = 0.0;  // final fit_cost value
  int iterations = 0;
  bool converged = false;
};

struct FitConfig {
  int restarts = 3;  // PCA axis-to-local-z assignments tried (1..3 distinct)
  int max_iterations = 150;
  double ftol = 1e-14;
  double xtol = 1e-12;
  double gtol = 1e-12;
};

Eigen::Matrix3d euler_zyz_to_matrix(const Eigen::Vector3d& euler);
Eigen::Vector3d matrix_to_euler_zyz(const Eigen::Matrix3d& rot);

/// Implicit inside-outside value: < 1 inside, 1 on the surface, > 1 outside.
/// The point is mapped to the local frame, the linear z-taper is inverted,
/// then F = (|x/a1|^(2/e2) + |y/a2|^(2/e2))^(e2/e1) + |z/a3|^(2/e1).
double inside_outside(const Eigen::Vector3d& p, const SuperquadricParams& sq);

/// Volume-penalized fit cost: sum_i (sqrt(a1*a2*a3) * (F(p_i)^eps1 - 1))^2.
/// Deterministic chunked parallel reduction.
double fit_cost(const PointCloud& cloud, const SuperquadricParams& sq);

/// Single-threaded reference implementation of fit_cost, kept for testing
/// and benchmarking.
double fit_cost_serial(const PointCloud& cloud, const SuperquadricParams& sq);

/// Residual vector r_i = sqrt(a1*a2*a3) * (F(p_i)^eps1 - 1); fit_cost is its
/// squared norm. Parallel over points.
void sq_residuals(const PointCloud& cloud, const SuperquadricParams& sq,
                  Eigen::VectorXd& out);

/// n surface samples from the eta/omega angular parameterization with signed
/// powers, taper and pose applied, plus isotropic Gaussian noise of standard
/// deviation noise_sigma. Deterministic for a fixed seed.
PointCloud sample_surface(const SuperquadricParams& sq, std::size_t n,
                          double noise_sigma, std::uint64_t seed);

/// The PCA-based starting points used by fit_superquadric: center at the
/// centroid, axes from pca_frame with each principal axis tried as local z,
/// scales from the projected half-extents, unit shape exponents, zero taper.
std::vector<SuperquadricParams> fit_initial_guesses(const PointCloud& cloud);

/// Levenberg-Marquardt fit of all 13 parameters, multi-restart over the PCA
/// axis assignments; returns the lowest-residual result. Needs >= 13 points.
SqFitResult fit_superquadric(const PointCloud& cloud,
                             const FitConfig& config = {});

/// Canonical representative of the parameter symmetry class: first two axes
/// ordered so a1 >= a2 (taper and rotation adjusted to preserve geometry),
/// all three axes sorted when the shape exponents coincide and taper is zero
/// (the fully symmetric case), Euler angles wrapped to (-pi, pi].
SuperquadricParams canonicalize(const SuperquadricParams& sq);

}  // namespace toolforge
