#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kernelsurf/kernels.hpp"

namespace kernelsurf {

namespace {

constexpr double four_pi = 4.0 * std::numbers::pi;

double support_radius_of(int degree) {
  if (degree == 1) return 1.0;
  if (degree == 2) return 1.5;
  throw std::invalid_argument("spline degree must be 1 or 2");
}

// radial bump: degree 1 = hat, degree 2 = quadratic B-spline
double bump(double t, int degree) {
  t = std::abs(t);
  if (degree == 1) {
    return std::max(0.0, 1.0 - t);
  }
  if (t < 0.5) return 0.75 - t * t;
  if (t < 1.5) {
    double u = 1.5 - t;
    return 0.5 * u * u;
  }
  return 0.0;
}

template <typename F>
double simpson(const F& f, double a, double b, int intervals) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) {
    sum += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

void check_points(int quadrature_points) {
  if (quadrature_points < 3) {
    throw std::invalid_argument("quadrature needs at least 3 points");
  }
}

// shell mass inside radius r, same rule as the potential quadrature
double shell_mass(double r, int degree, int quadrature_points) {
  double support = support_radius_of(degree);
  double upper = std::min(r, support);
  if (upper <= 0.0) return 0.0;
  return simpson(
      [&](double rho) { return four_pi * rho * rho * bump(rho, degree); }, 0.0,
      upper, quadrature_points - 1);
}

}  // namespace

double poisson_radial_total_mass(int spline_degree, int quadrature_points) {
  check_points(quadrature_points);
  return shell_mass(support_radius_of(spline_degree), spline_degree,
                    quadrature_points);
}

double poisson_radial_kernel(double r, int spline_degree,
                             int quadrature_points) {
  check_points(quadrature_points);
  if (r < 0.0) {
    throw std::invalid_argument("radius must be nonnegative");
  }
  double support = support_radius_of(spline_degree);
  auto near_shells = [&](double rho) {
    return four_pi * rho * rho * bump(rho, spline_degree);
  };
  auto far_shells = [&](double rho) {
    return four_pi * rho * bump(rho, spline_degree);
  };
  if (r >= support) {
    // every shell lies inside the evaluation radius: total mass over r
    return simpson(near_shells, 0.0, support, quadrature_points - 1) / r;
  }
  if (r == 0.0) {
    return simpson(far_shells, 0.0, support, quadrature_points - 1);
  }
  // split at the kink rho = r, points proportional to segment length
  int total = quadrature_points - 1;
  int inner = std::max(2, static_cast<int>(total * r / support));
  int outer = std::max(2, total - inner);
  return simpson(near_shells, 0.0, r, inner) / r +
         simpson(far_shells, r, support, outer);
}

PoissonRadialKernel::PoissonRadialKernel(int spline_degree,
                                         int quadrature_points)
    : spline_degree_(spline_degree), quadrature_points_(quadrature_points) {
  support_radius_of(spline_degree);
  check_points(quadrature_points);
}

double PoissonRadialKernel::support_radius() const {
  return support_radius_of(spline_degree_);
}

KernelBlock PoissonRadialKernel::block(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& x_prime) const {
  if (x.size() != 3 || x_prime.size() != 3) {
    throw std::invalid_argument("poisson-radial kernel is 3D only");
  }
  if (!x.allFinite() || !x_prime.allFinite()) {
    throw std::invalid_argument("non-finite kernel input");
  }
  KernelBlock out = KernelBlock::zero(3);
  Eigen::Vector3d diff = x - x_prime;
  double r = diff.norm();
  out.k00 = poisson_radial_kernel(r, spline_degree_, quadrature_points_);
  if (r < 1e-12) {
    // coincident limit: phi''(0) = -(4 pi / 3) B(0)
    out.kgg = (four_pi / 3.0) * bump(0.0, spline_degree_) *
              Eigen::Matrix3d::Identity();
    return out;
  }
  double m = shell_mass(r, spline_degree_, quadrature_points_);
  double dphi = -m / (r * r);
  double ddphi = 2.0 * m / (r * r * r) - four_pi * bump(r, spline_degree_);
  Eigen::Vector3d e = diff / r;
  out.k0g = dphi * (x_prime - x) / r;
  out.kg0 = dphi * (x - x_prime) / r;
  out.kgg = -ddphi * e * e.transpose() +
            (dphi / r) * (e * e.transpose() - Eigen::Matrix3d::Identity());
  return out;
}

void PoissonRadialKernel::value_row(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& x_prime, double& k00,
                                    Eigen::VectorXd& k0g) const {
  Eigen::Vector3d diff = x - x_prime;
  double r = diff.norm();
  k00 = poisson_radial_kernel(r, spline_degree_, quadrature_points_);
  if (r < 1e-12) {
    k0g = Eigen::Vector3d::Zero();
    return;
  }
  double m = shell_mass(r, spline_degree_, quadrature_points_);
  k0g = (-m / (r * r)) * (x_prime - x) / r;
}

}  // namespace kernelsurf
