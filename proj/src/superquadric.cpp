#include "toolforge/superquadric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "toolforge/error.hpp"
#include "toolforge/levmar.hpp"
#include "toolforge/parallel.hpp"
#include "toolforge/rng.hpp"

namespace toolforge {

namespace {

constexpr double kEpsMin = 0.1;
constexpr double kEpsMax = 2.0;
constexpr double kTaperLimit = 0.95;  // fit bound, inside the (-1,1) domain
constexpr double kMinTaperFactor = 1e-9;

double sgnpow(double u, double e) {
  if (u == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(u), e), u);
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);  // (-pi, pi] up to the -pi edge
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

Eigen::Matrix3d SuperquadricParams::rotation() const {
  return euler_zyz_to_matrix(euler);
}

void SuperquadricParams::validate() const {
  if (!(scale.minCoeff() > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "superquadric scale must be > 0");
  }
  if (shape[0] < kEpsMin || shape[0] > kEpsMax || shape[1] < kEpsMin ||
      shape[1] > kEpsMax) {
    throw Error(ErrorKind::invalid_argument,
                "superquadric shape exponents must lie in [0.1, 2.0]");
  }
  if (std::abs(taper[0]) >= 1.0 || std::abs(taper[1]) >= 1.0) {
    throw Error(ErrorKind::invalid_argument,
                "superquadric taper must lie in (-1, 1)");
  }
  if (!scale.allFinite() || !shape.allFinite() || !euler.allFinite() ||
      !taper.allFinite() || !center.allFinite()) {
    throw Error(ErrorKind::invalid_argument, "superquadric has non-finite value");
  }
}

Eigen::Matrix3d euler_zyz_to_matrix(const Eigen::Vector3d& euler) {
  return (Eigen::AngleAxisd(euler[0], Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(euler[1], Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(euler[2], Eigen::Vector3d::UnitZ()))
      .toRotationMatrix();
}

Eigen::Vector3d matrix_to_euler_zyz(const Eigen::Matrix3d& r) {
  const double sy = std::hypot(r(0, 2), r(1, 2));
  Eigen::Vector3d e;
  if (sy > 1e-12) {
    e[0] = std::atan2(r(1, 2), r(0, 2));
    e[1] = std::atan2(sy, r(2, 2));
    e[2] = std::atan2(r(2, 1), -r(2, 0));
  } else if (r(2, 2) > 0.0) {
    // theta ~ 0: only phi+psi is determined.
    e[0] = std::atan2(r(1, 0), r(0, 0));
    e[1] = 0.0;
    e[2] = 0.0;
  } else {
    // theta ~ pi: only phi-psi is determined.
    e[0] = std::atan2(-r(1, 0), -r(0, 0));
    e[1] = M_PI;
    e[2] = 0.0;
  }
  for (int i = 0; i < 3; ++i) e[i] = wrap_angle(e[i]);
  return e;
}

namespace {

// Hot path shared by inside_outside / the fit residuals: local frame and
// exponents precomputed once per parameter vector.
struct SqEval {
  Eigen::Matrix3d rot_t;  // world -> local
  Eigen::Vector3d center;
  Eigen::Vector3d inv_scale;
  double a3;
  double kx, ky;
  double exp_xy;      // 2 / eps2
  double exp_inner;   // eps2 / eps1
  double exp_z;       // 2 / eps1
  double eps1;
  double volume_gain;  // sqrt(a1*a2*a3)

  explicit SqEval(const SuperquadricParams& sq)
      : rot_t(sq.rotation().transpose()),
        center(sq.center),
        inv_scale(sq.scale.cwiseInverse()),
        a3(sq.scale[2]),
        kx(sq.taper[0]),
        ky(sq.taper[1]),
        exp_xy(2.0 / sq.shape[1]),
        exp_inner(sq.shape[1] / sq.shape[0]),
        exp_z(2.0 / sq.shape[0]),
        eps1(sq.shape[0]),
        volume_gain(std::sqrt(sq.scale.prod())) {}

  double implicit_value(const Eigen::Vector3d& p) const {
    Eigen::Vector3d q = rot_t * (p - center);
    // Invert the linear z-taper; the factor is clamped away from zero so
    // points far beyond the taper domain still evaluate finitely.
    double fx = kx * q.z() / a3 + 1.0;
    double fy = ky * q.z() / a3 + 1.0;
    if (std::abs(fx) < kMinTaperFactor) fx = std::copysign(kMinTaperFactor, fx);
    if (std::abs(fy) < kMinTaperFactor) fy = std::copysign(kMinTaperFactor, fy);
    q.x() /= fx;
    q.y() /= fy;

    const double tx = std::pow(std::abs(q.x() * inv_scale[0]), exp_xy);
    const double ty = std::pow(std::abs(q.y() * inv_scale[1]), exp_xy);
    const double tz = std::pow(std::abs(q.z() * inv_scale[2]), exp_z);
    return std::pow(tx + ty, exp_inner) + tz;
  }

  double residual(const Eigen::Vector3d& p) const {
    return volume_gain * (std::pow(implicit_value(p), eps1) - 1.0);
  }
};

}  // namespace

double inside_outside(const Eigen::Vector3d& p, const SuperquadricParams& sq) {
  return SqEval(sq).implicit_value(p);
}

double fit_cost_serial(const PointCloud& cloud, const SuperquadricParams& sq) {
  if (cloud.empty()) {
    throw Error(ErrorKind::empty_cloud, "fit_cost on empty cloud");
  }
  const SqEval eval(sq);
  double sum = 0.0;
  for (const auto& p : cloud.points) {
    const double r = eval.residual(p);
    sum += r * r;
  }
  return sum;
}

double fit_cost(const PointCloud& cloud, const SuperquadricParams& sq) {
  if (cloud.empty()) {
    throw Error(ErrorKind::empty_cloud, "fit_cost on empty cloud");
  }
  const SqEval eval(sq);
  const auto& pts = cloud.points;
  return chunked_sum(pts.size(), 4096, [&](std::size_t lo, std::size_t hi) {
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double r = eval.residual(pts[i]);
      sum += r * r;
    }
    return sum;
  });
}

void sq_residuals(const PointCloud& cloud, const SuperquadricParams& sq,
                  Eigen::VectorXd& out) {
  const SqEval eval(sq);
  out.resize(static_cast<Eigen::Index>(cloud.size()));
  const auto& pts = cloud.points;
  parallel_for(pts.size(), [&](std::size_t i) {
    out[static_cast<Eigen::Index>(i)] = eval.residual(pts[i]);
  });
}

PointCloud sample_surface(const SuperquadricParams& sq, std::size_t n,
                          double noise_sigma, std::uint64_t seed) {
  if (n == 0) {
    throw Error(ErrorKind::invalid_argument, "sample_surface needs n >= 1");
  }
  if (noise_sigma < 0.0) {
    throw Error(ErrorKind::invalid_argument, "noise_sigma must be >= 0");
  }
  sq.validate();

  const Eigen::Matrix3d rot = sq.rotation();
  Rng rng(seed);
  PointCloud cloud;
  cloud.frame_id = "sq_sample";
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
    const double omega = rng.uniform(-M_PI, M_PI);
    const double ce = sgnpow(std::cos(eta), sq.shape[0]);
    const double se = sgnpow(std::sin(eta), sq.shape[0]);
    double x = sq.scale[0] * ce * sgnpow(std::cos(omega), sq.shape[1]);
    double y = sq.scale[1] * ce * sgnpow(std::sin(omega), sq.shape[1]);
    const double z = sq.scale[2] * se;
    x *= sq.taper[0] * z / sq.scale[2] + 1.0;
    y *= sq.taper[1] * z / sq.scale[2] + 1.0;
    Eigen::Vector3d p = rot * Eigen::Vector3d(x, y, z) + sq.center;
    if (noise_sigma > 0.0) {
      p += Eigen::Vector3d(rng.normal(0.0, noise_sigma),
                           rng.normal(0.0, noise_sigma),
                           rng.normal(0.0, noise_sigma));
    }
    cloud.points.push_back(p);
  }
  return cloud;
}

namespace {

constexpr int kParamCount = 13;

Eigen::VectorXd pack_params(const SuperquadricParams& sq) {
  Eigen::VectorXd x(kParamCount);
  x << sq.scale, sq.shape, sq.euler, sq.taper, sq.center;
  return x;
}

SuperquadricParams unpack_params(const Eigen::VectorXd& x) {
  SuperquadricParams sq;
  sq.scale = x.segment<3>(0);
  sq.shape = x.segment<2>(3);
  sq.euler = x.segment<3>(5);
  sq.taper = x.segment<2>(8);
  sq.center = x.segment<3>(10);
  return sq;
}

void fit_bounds(Eigen::VectorXd& lower, Eigen::VectorXd& upper) {
  lower.resize(kParamCount);
  upper.resize(kParamCount);
  lower.segment<3>(0).setConstant(1e-4);
  upper.segment<3>(0).setConstant(2.0);
  lower.segment<2>(3).setConstant(kEpsMin);
  upper.segment<2>(3).setConstant(kEpsMax);
  lower.segment<3>(5).setConstant(-4.0 * M_PI);
  upper.segment<3>(5).setConstant(4.0 * M_PI);
  lower.segment<2>(8).setConstant(-kTaperLimit);
  upper.segment<2>(8).setConstant(kTaperLimit);
  lower.segment<3>(10).setConstant(-1e6);
  upper.segment<3>(10).setConstant(1e6);
}

}  // namespace

std::vector<SuperquadricParams> fit_initial_guesses(const PointCloud& cloud) {
  const PcaFrame frame = pca_frame(cloud);

  std::vector<SuperquadricParams> inits;
  // Cyclic permutations keep the basis right-handed; each choice maps a
  // different principal axis to the local z of the model.
  const std::array<std::array<int, 3>, 3> perms = {
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};
  for (const auto& perm : perms) {
    Eigen::Matrix3d rot;
    for (int i = 0; i < 3; ++i) rot.col(i) = frame.axes.col(perm[i]);

    Eigen::Vector3d half_extent = Eigen::Vector3d::Zero();
    for (const auto& p : cloud.points) {
      const Eigen::Vector3d d = rot.transpose() * (p - frame.center);
      half_extent = half_extent.cwiseMax(d.cwiseAbs());
    }
    half_extent = half_extent.cwiseMax(1e-4);

    SuperquadricParams sq;
    sq.scale = half_extent;
    sq.shape = Eigen::Vector2d::Ones();
    sq.euler = matrix_to_euler_zyz(rot);
    sq.taper = Eigen::Vector2d::Zero();
    sq.center = frame.center;
    inits.push_back(sq);
  }
  return inits;
}

SqFitResult fit_superquadric(const PointCloud& cloud, const FitConfig& config) {
  if (cloud.size() < static_cast<std::size_t>(kParamCount)) {
    throw Error(ErrorKind::insufficient_data,
                "fit_superquadric needs at least 13 points, got " +
                    std::to_string(cloud.size()));
  }
  const auto inits = fit_initial_guesses(cloud);
  const int restarts =
      std::clamp(config.restarts, 1, static_cast<int>(inits.size()));

  LevMarOptions lm;
  lm.max_iterations = config.max_iterations;
  lm.ftol = config.ftol;
  lm.xtol = config.xtol;
  lm.gtol = config.gtol;

  Eigen::VectorXd lower, upper;
  fit_bounds(lower, upper);

  const ResidualFn fn = [&cloud](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    sq_residuals(cloud, unpack_params(x), r);
  };

  SqFitResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i < restarts; ++i) {
    const LevMarResult run =
        levmar_minimize(fn, pack_params(inits[static_cast<std::size_t>(i)]),
                        lower, upper, lm);
    if (run.cost < best.residual) {
      best.params = unpack_params(run.x);
      best.residual = run.cost;
      best.iterations = run.iterations;
      best.converged = run.converged;
    }
  }
  for (int i = 0; i < 3; ++i) best.params.euler[i] = wrap_angle(best.params.euler[i]);
  return best;
}

namespace {

// Axis relabeling p_new = Q * p_old applied to the parameter vector;
// Q must be a signed permutation with det +1. Taper follows its axis and is
// insensitive to axis sign (the factor multiplies the coordinate).
SuperquadricParams relabel_axes(const SuperquadricParams& sq,
                                const Eigen::Matrix3d& q) {
  SuperquadricParams out = sq;
  const std::array<double, 3> taper3 = {sq.taper[0], sq.taper[1], 0.0};
  std::array<double, 3> new_scale{}, new_taper{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(q(i, j)) > 0.5) {
        new_scale[static_cast<std::size_t>(i)] = sq.scale[j];
        new_taper[static_cast<std::size_t>(i)] = taper3[static_cast<std::size_t>(j)];
      }
    }
  }
  out.scale = Eigen::Vector3d(new_scale[0], new_scale[1], new_scale[2]);
  out.taper = Eigen::Vector2d(new_taper[0], new_taper[1]);
  out.euler = matrix_to_euler_zyz(sq.rotation() * q.transpose());
  return out;
}

Eigen::Matrix3d swap_xy_relabel() {
  // x_new = y_old, y_new = -x_old, z unchanged (det +1).
  Eigen::Matrix3d q;
  q << 0, 1, 0, -1, 0, 0, 0, 0, 1;
  return q;
}

}  // namespace

SuperquadricParams canonicalize(const SuperquadricParams& sq) {
  SuperquadricParams out = sq;

  const bool shape_symmetric = std::abs(sq.shape[0] - sq.shape[1]) <= 1e-9;
  const bool taper_free =
      std::abs(sq.taper[0]) <= 1e-12 && std::abs(sq.taper[1]) <= 1e-12;

  if (shape_symmetric && taper_free) {
    // Exponents coincide and no taper: the implicit function is symmetric
    // under every axis permutation, so sort all three axes descending.
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sq.scale[a] > sq.scale[b]; });
    if (order != std::array<int, 3>{0, 1, 2}) {
      Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
      for (int i = 0; i < 3; ++i) q(i, order[static_cast<std::size_t>(i)]) = 1.0;
      if (q.determinant() < 0.0) q.row(2) = -q.row(2);
      out = relabel_axes(sq, q);
    }
  } else if (sq.scale[0] < sq.scale[1]) {
    out = relabel_axes(sq, swap_xy_relabel());
  }

  for (int i = 0; i < 3; ++i) out.euler[i] = wrap_angle(out.euler[i]);
  return out;
}

}  // namespace toolforge
