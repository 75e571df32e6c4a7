#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kernelsurf/kernels.hpp"

// Closed form for directions uniform on S^(d-1), biases uniform on [-k, k].
// The two derivative terms of the value-gradient row carry the eta
// coefficients of one parity higher than the value term (the direction-
// weighted sphere integral shifts the parity); verified against Monte-Carlo
// and finite differences in d = 2, 3.

namespace kernelsurf {

namespace {

constexpr double pi = std::numbers::pi;

double double_factorial(int n) {
  double r = 1.0;
  while (n > 1) {
    r *= n;
    n -= 2;
  }
  return r;
}

// eta_{d,r}: product of the angular integrals over the d-2 free sphere
// angles; depends only on the parity of r.
double eta(int d, int r) {
  int even_count = (r % 2 == 0) ? (d - 1) / 2 : (d - 2) / 2;
  int odd_count = (d - 2) - even_count;
  return std::pow(2.0, even_count) * std::pow(pi, odd_count);
}

// surface area of S^(d-1)
double sphere_area(int d) {
  return 2.0 * std::pow(pi, d / 2.0) / std::tgamma(d / 2.0);
}

// Orthogonal Q with Q x = (0,..,|x|,0) and Q x' = (0,..,|x'|cos a,|x'|sin a):
// rows are an orthonormal completion, then x_hat, then the unit perpendicular
// part of x'. det +1 enforced by flipping a completion row (possible d >= 3).
Eigen::MatrixXd build_q(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                        int d) {
  double nx = x.norm();
  Eigen::VectorXd e1;
  if (nx < 1e-300) {
    e1 = Eigen::VectorXd::Zero(d);
    e1(0) = 1.0;
  } else {
    e1 = x / nx;
  }
  Eigen::VectorXd w = x_prime - x_prime.dot(e1) * e1;
  double nw = w.norm();
  if (nw < 1e-12) {
    // collinear fallback: unit vector orthogonal to e1
    int axis = 0;
    e1.cwiseAbs().minCoeff(&axis);
    Eigen::VectorXd t = Eigen::VectorXd::Zero(d);
    t(axis) = 1.0;
    w = t - t.dot(e1) * e1;
    nw = w.norm();
  }
  Eigen::VectorXd e2 = w / nw;

  Eigen::MatrixXd q(d, d);
  int filled = 0;
  for (int i = 0; i < d && filled < d - 2; ++i) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(d);
    t(i) = 1.0;
    t -= t.dot(e1) * e1;
    t -= t.dot(e2) * e2;
    for (int r = 0; r < filled; ++r) {
      t -= t.dot(q.row(r)) * q.row(r).transpose();
    }
    double n = t.norm();
    if (n > 1e-8) {
      q.row(filled++) = t / n;
    }
  }
  q.row(d - 2) = e1;
  q.row(d - 1) = e2;
  if (d > 2 && q.determinant() < 0.0) {
    q.row(0) = -q.row(0);
  }
  return q;
}

struct Geometry {
  double nx = 0.0;
  double nxp = 0.0;
  double dot = 0.0;    // x . x'
  double alpha = 0.0;  // angle between x and x', clamped into (0, pi)
  double sa = 0.0;
  double ca = 0.0;
  double tau = 0.0;  // integration boundary angle
};

Geometry geometry(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                  double k) {
  if (!x.allFinite() || !x_prime.allFinite()) {
    throw std::invalid_argument("non-finite kernel input");
  }
  Geometry g;
  g.nx = x.norm();
  g.nxp = x_prime.norm();
  g.dot = x.dot(x_prime);
  if (g.nx >= k || g.nxp >= k) {
    throw std::domain_error("outside kernel support bound");
  }
  double alpha = 0.0;
  if (g.nx > 1e-300 && g.nxp > 1e-300) {
    alpha = std::acos(std::clamp(g.dot / (g.nx * g.nxp), -1.0, 1.0));
  }
  g.alpha = std::clamp(alpha, 1e-9, pi - 1e-9);
  g.sa = std::sin(g.alpha);
  g.ca = std::cos(g.alpha);
  g.tau = std::atan2(g.nx - g.nxp * g.ca, g.nxp * g.sa);
  return g;
}

// boundary integral of the value term
double value_bracket(const Geometry& g) {
  const double nx = g.nx, nxp = g.nxp, al = g.alpha, tau = g.tau;
  auto e1 = [&](double p) {
    double s = std::sin(p);
    return (1.0 / 18.0) * (s * s * s - 3.0 * s) * nx * nx * nx +
           (1.0 / 24.0) * nx * nx * nxp *
               (3.0 * std::sin(p + al) + std::sin(3.0 * p - al) +
                6.0 * std::sin(p - al));
  };
  auto e2 = [&](double p) {
    double s = std::sin(p - al);
    return (1.0 / 18.0) * (s * s * s - 3.0 * s) * nxp * nxp * nxp +
           (1.0 / 24.0) * nx * nxp * nxp *
               (std::sin(3.0 * p - 2.0 * al) + 3.0 * std::sin(p - 2.0 * al) +
                6.0 * std::sin(p));
  };
  return (e1(tau + pi) - e1(tau)) + (e2(tau) - e2(tau - pi));
}

// boundary integrals of the value-gradient row in the rotated frame: the
// component along x_hat (without its leading term) and along the perpendicular
void k0g_brackets(const Geometry& g, double& g1, double& g2) {
  const double nx = g.nx, nxp = g.nxp, al = g.alpha, tau = g.tau;
  double st = std::sin(tau), ct = std::cos(tau);
  g1 = (1.0 / 3.0) * nx * nx * st * st * st - nx * nx * st +
       0.5 * nx * nxp * std::sin(al + tau) +
       (1.0 / 6.0) * nx * nxp * std::sin(3.0 * tau - al) +
       nx * nxp * std::sin(tau - al) -
       (1.0 / 12.0) * nxp * nxp * std::sin(3.0 * tau - 2.0 * al) -
       0.25 * nxp * nxp * std::sin(tau - 2.0 * al) - 0.5 * nxp * nxp * st;
  g2 = (1.0 / 3.0) * nx * nx * ct * ct * ct -
       0.5 * nx * nxp * std::cos(al + tau) -
       (1.0 / 6.0) * nx * nxp * std::cos(3.0 * tau - al) +
       (1.0 / 12.0) * nxp * nxp * std::cos(3.0 * tau - 2.0 * al) -
       0.25 * nxp * nxp * std::cos(tau - 2.0 * al) + 0.5 * nxp * nxp * ct;
}

// second-derivative block in the rotated frame: delta/3 on the leading
// diagonal, the 2x2 (alpha, beta; beta, gamma) block in the (x, perp) plane
Eigen::MatrixXd rotated_greek(const Geometry& g, int d) {
  const double nx = g.nx, nxp = g.nxp, al = g.alpha, tau = g.tau;
  auto bracket = [](auto f, double lo, double hi) { return f(hi) - f(lo); };
  auto sin3 = [](double p) {
    double s = std::sin(p);
    return s * s * s;
  };
  auto cos3 = [](double p) {
    double c = std::cos(p);
    return c * c * c;
  };
  double m_alpha =
      bracket([&](double p) { return nx * std::sin(p) - (1.0 / 3.0) * nx * sin3(p); },
              tau, tau + pi) +
      bracket(
          [&](double p) {
            return 0.25 * nxp * std::sin(al + p) +
                   (1.0 / 12.0) * nxp * std::sin(3.0 * p - al) +
                   0.5 * nxp * std::sin(p - al);
          },
          tau - pi, tau);
  double m_beta =
      bracket([&](double p) { return -(1.0 / 3.0) * nx * cos3(p); }, tau,
              tau + pi) +
      bracket(
          [&](double p) {
            return -0.25 * nxp * std::cos(al + p) -
                   (1.0 / 12.0) * nxp * std::cos(3.0 * p - al);
          },
          tau - pi, tau);
  double m_gamma =
      bracket([&](double p) { return (1.0 / 3.0) * nx * sin3(p); }, tau,
              tau + pi) +
      bracket(
          [&](double p) {
            return -0.25 * nxp * std::sin(al + p) -
                   (1.0 / 12.0) * nxp * std::sin(3.0 * p - al) +
                   0.5 * nxp * std::sin(p - al);
          },
          tau - pi, tau);
  double m_delta =
      bracket([&](double p) { return nx * std::sin(p); }, tau, tau + pi) +
      bracket([&](double p) { return nxp * std::sin(p - al); }, tau - pi, tau);

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d - 2; ++i) m(i, i) = m_delta / 3.0;
  m(d - 2, d - 2) = m_alpha;
  m(d - 2, d - 1) = m_beta;
  m(d - 1, d - 2) = m_beta;
  m(d - 1, d - 1) = m_gamma;
  return m;
}

}  // namespace

UniformKernel::UniformKernel(int dimension, double support_k)
    : dimension_(dimension), support_k_(support_k) {
  if (dimension < 2) {
    throw std::invalid_argument(
        "uniform kernel needs d >= 2 (use the 1D spline kernel for d = 1)");
  }
  if (!(support_k > 0.0)) {
    throw std::invalid_argument("support bound k must be positive");
  }
  const int d = dimension;
  const double k = support_k;
  const double normalizer = 2.0 * k * sphere_area(d);
  coef_const_ = eta(d, 0) / double_factorial(d - 2) * (2.0 * pi / 3.0) * k *
                k * k / normalizer;
  coef_cos_ = eta(d, 2) * 2.0 / double_factorial(d) * k * pi / normalizer;
  coef_eta3_ = eta(d, 3) * 3.0 / double_factorial(d + 1) / normalizer;
  coef_id_ = eta(d, 0) * 2.0 * pi * k / double_factorial(d) / normalizer;
  coef_greek_ = eta(d, 1) * 3.0 / double_factorial(d + 1) / normalizer;
}

KernelBlock UniformKernel::block(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& x_prime) const {
  const int d = dimension_;
  const double k = support_k_;
  if (x.size() != d || x_prime.size() != d) {
    throw std::invalid_argument("kernel input dimensions disagree");
  }

  Geometry g = geometry(x, x_prime, k);
  Eigen::MatrixXd q = build_q(x, x_prime, d);

  KernelBlock out;
  out.k00 = coef_const_ + coef_cos_ * g.nx * g.nxp * g.ca +
            coef_eta3_ * value_bracket(g);

  double g1 = 0.0, g2 = 0.0;
  k0g_brackets(g, g1, g2);
  out.k0g = (coef_cos_ * g.nx + coef_eta3_ * g1) * q.row(d - 2).transpose() +
            (coef_eta3_ * g2) * q.row(d - 1).transpose();

  // gradient in the first argument: same row formula with arguments swapped
  Geometry g_swapped = geometry(x_prime, x, k);
  Eigen::MatrixXd q_swapped = build_q(x_prime, x, d);
  k0g_brackets(g_swapped, g1, g2);
  out.kg0 =
      (coef_cos_ * g_swapped.nx + coef_eta3_ * g1) *
          q_swapped.row(d - 2).transpose() +
      (coef_eta3_ * g2) * q_swapped.row(d - 1).transpose();

  out.kgg = coef_id_ * Eigen::MatrixXd::Identity(d, d) +
            coef_greek_ * (q.transpose() * rotated_greek(g, d) * q);
  return out;
}

// allocation-free: only the x_hat and perpendicular rows of the rotation
// carry value-gradient weight, so the full frame is never built
void UniformKernel::value_row(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& x_prime, double& k00,
                              Eigen::VectorXd& k0g) const {
  const int d = dimension_;
  if (x.size() != d || x_prime.size() != d) {
    throw std::invalid_argument("kernel input dimensions disagree");
  }
  Geometry g = geometry(x, x_prime, support_k_);
  k00 = coef_const_ + coef_cos_ * g.nx * g.nxp * g.ca +
        coef_eta3_ * value_bracket(g);

  double g1 = 0.0, g2 = 0.0;
  k0g_brackets(g, g1, g2);
  double along_e1 = coef_cos_ * g.nx + coef_eta3_ * g1;
  double along_e2 = coef_eta3_ * g2;

  k0g.resize(d);
  if (g.nx < 1e-300) {
    // degenerate frame: e1 is the first axis (matching the full rotation)
    double proj = x_prime(0);
    double nw = std::sqrt(std::max(g.nxp * g.nxp - proj * proj, 0.0));
    if (nw < 1e-12) {
      k0g.setZero();
      k0g(0) = along_e1;
      if (d > 1) k0g(1) = along_e2;  // arbitrary perpendicular, zero weight
      return;
    }
    k0g.noalias() = (along_e2 / nw) * x_prime;
    k0g(0) += along_e1 - along_e2 * proj / nw;
    return;
  }
  // e2 = unit part of x' perpendicular to e1 = x / |x|
  double proj = g.dot / g.nx;  // x' . e1
  double nw = std::sqrt(std::max(g.nxp * g.nxp - proj * proj, 0.0));
  if (nw >= 1e-12) {
    k0g.noalias() = (along_e1 / g.nx - along_e2 * proj / (nw * g.nx)) * x +
                    (along_e2 / nw) * x_prime;
    return;
  }
  // collinear fallback: perpendicular taken along the axis least aligned
  // with e1 (matching the full rotation's choice)
  int axis = 0;
  x.cwiseAbs().minCoeff(&axis);
  double e1_axis = x(axis) / g.nx;
  double nt = std::sqrt(std::max(1.0 - e1_axis * e1_axis, 0.0));
  if (nt < 1e-12) nt = 1.0;
  k0g.noalias() = ((along_e1 - along_e2 * e1_axis / nt) / g.nx) * x;
  k0g(axis) += along_e2 / nt;
}

}  // namespace kernelsurf
