#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kernelsurf/kernels.hpp"

namespace kernelsurf {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

struct Lifted {
  Eigen::VectorXd u;  // (x, 1)
  Eigen::VectorXd v;  // (x', 1)
  double nu = 0.0;
  double nv = 0.0;
  double dot = 0.0;
  double theta = 0.0;      // angle between lifted vectors, in [0, pi]
  double sin_theta = 0.0;  // true sine
  double j = 0.0;          // sin t + (pi - t) cos t
};

Lifted lift(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime) {
  if (!x.allFinite() || !x_prime.allFinite()) {
    throw std::invalid_argument("non-finite kernel input");
  }
  if (x.size() != x_prime.size()) {
    throw std::invalid_argument("kernel input dimensions disagree");
  }
  Lifted l;
  int d = static_cast<int>(x.size());
  l.u.resize(d + 1);
  l.u.head(d) = x;
  l.u(d) = 1.0;
  l.v.resize(d + 1);
  l.v.head(d) = x_prime;
  l.v(d) = 1.0;
  l.nu = l.u.norm();
  l.nv = l.v.norm();
  l.dot = l.u.dot(l.v);
  double c = std::clamp(l.dot / (l.nu * l.nv), -1.0, 1.0);
  l.theta = std::acos(c);
  l.sin_theta = std::sin(l.theta);
  l.j = l.sin_theta + (pi - l.theta) * c;
  return l;
}

}  // namespace

GaussianKernel::GaussianKernel(int dimension) : dimension_(dimension) {
  if (dimension < 1) {
    throw std::invalid_argument("kernel dimension must be >= 1");
  }
}

KernelBlock GaussianKernel::block(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& x_prime) const {
  const int d = dimension_;
  if (x.size() != d || x_prime.size() != d) {
    throw std::invalid_argument("kernel input dimensions disagree");
  }
  Lifted l = lift(x, x_prime);

  KernelBlock out;
  out.k00 = l.nu * l.nv * l.j / two_pi;

  // gradients of |u||v| J(theta) in full lifted coordinates, spatial rows
  Eigen::VectorXd grad_v =
      (l.nu * l.j / l.nv) * l.v + (pi - l.theta) * (l.u - (l.dot / (l.nv * l.nv)) * l.v);
  out.k0g = grad_v.head(d) / two_pi;
  Eigen::VectorXd grad_u =
      (l.nv * l.j / l.nu) * l.u + (pi - l.theta) * (l.v - (l.dot / (l.nu * l.nu)) * l.u);
  out.kg0 = grad_u.head(d) / two_pi;

  // mixed second derivative; the singular term's sine is clamped near
  // coincident lifted directions, the smooth term keeps the true sine
  double sin_clamped = std::max(l.sin_theta, 1e-7);
  Eigen::VectorXd p_u_v = l.v - (l.dot / (l.nu * l.nu)) * l.u;
  Eigen::VectorXd p_v_u = l.u - (l.dot / (l.nv * l.nv)) * l.v;
  Eigen::MatrixXd m =
      (pi - l.theta) * Eigen::MatrixXd::Identity(d + 1, d + 1) +
      (l.sin_theta / (l.nu * l.nv)) * l.u * l.v.transpose() +
      (p_u_v * p_v_u.transpose()) / (sin_clamped * l.nu * l.nv);
  out.kgg = m.topLeftCorner(d, d) / two_pi;
  return out;
}

// allocation-free: grid extraction calls this once per point-center pair
void GaussianKernel::value_row(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& x_prime, double& k00,
                               Eigen::VectorXd& k0g) const {
  const int d = dimension_;
  double uu = x.squaredNorm() + 1.0;
  double vv = x_prime.squaredNorm() + 1.0;
  double uv = x.dot(x_prime) + 1.0;
  double nu = std::sqrt(uu);
  double nv = std::sqrt(vv);
  double c = std::clamp(uv / (nu * nv), -1.0, 1.0);
  double theta = std::acos(c);
  double j = std::sin(theta) + (pi - theta) * c;
  k00 = nu * nv * j / two_pi;
  // spatial rows of (|u| J / |v|) v + (pi - theta)(u - (u.v / |v|^2) v)
  double along_xp = (nu * j / nv - (pi - theta) * (uv / vv)) / two_pi;
  double along_x = (pi - theta) / two_pi;
  k0g.resize(d);
  k0g.noalias() = along_xp * x_prime + along_x * x;
}

}  // namespace kernelsurf
