#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "kernelsurf/cli.hpp"

namespace kernelsurf {

namespace {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

std::string err_detail(const char* label, double value) {
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "%s %.3e", label, value);
  return buffer;
}

Eigen::VectorXd ball_point(SeededRng& rng, int d, double radius) {
  Eigen::VectorXd direction(d);
  double norm = 0.0;
  do {
    for (int c = 0; c < d; ++c) direction(c) = rng.normal();
    norm = direction.norm();
  } while (norm < 1e-8);
  double r = radius * std::pow(rng.uniform(), 1.0 / d);
  return (r / norm) * direction;
}

double scalar_kernel(const Kernel& kernel, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& x_prime) {
  double k00 = 0.0;
  Eigen::VectorXd k0g(kernel.dimension());
  kernel.value_row(x, x_prime, k00, k0g);
  return k00;
}

// relative disagreement between an analytic vector/matrix and its FD estimate
double relative_gap(const Eigen::MatrixXd& analytic,
                    const Eigen::MatrixXd& fd) {
  double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-12);
  return (analytic - fd).cwiseAbs().maxCoeff() / scale;
}

CheckResult fd_value_grad_check(const std::string& name, const Kernel& kernel,
                                double point_radius, int pairs, double tol,
                                SeededRng& rng, bool inject_fault) {
  const int d = kernel.dimension();
  const double h = 1e-5;
  double worst = 0.0;
  for (int pair = 0; pair < pairs; ++pair) {
    Eigen::VectorXd x = ball_point(rng, d, point_radius);
    Eigen::VectorXd xp = ball_point(rng, d, point_radius);
    KernelBlock blk = kernel.block(x, xp);
    if (inject_fault && pair == 0) blk.k0g(0) += 0.25;
    Eigen::VectorXd fd_k0g(d), fd_kg0(d);
    for (int c = 0; c < d; ++c) {
      Eigen::VectorXd shift = xp;
      shift(c) += h;
      double plus = scalar_kernel(kernel, x, shift);
      shift(c) -= 2.0 * h;
      fd_k0g(c) = (plus - scalar_kernel(kernel, x, shift)) / (2.0 * h);
      shift = x;
      shift(c) += h;
      plus = scalar_kernel(kernel, shift, xp);
      shift(c) -= 2.0 * h;
      fd_kg0(c) = (plus - scalar_kernel(kernel, shift, xp)) / (2.0 * h);
    }
    worst = std::max(worst, relative_gap(blk.k0g, fd_k0g));
    worst = std::max(worst, relative_gap(blk.kg0, fd_kg0));
  }
  return {name, worst <= tol, err_detail("max rel err", worst)};
}

CheckResult fd_hessian_check(const std::string& name, const Kernel& kernel,
                             double point_radius, int pairs, double tol,
                             SeededRng& rng) {
  const int d = kernel.dimension();
  const double h = 1e-4;
  double worst = 0.0;
  for (int pair = 0; pair < pairs; ++pair) {
    Eigen::VectorXd x = ball_point(rng, d, point_radius);
    Eigen::VectorXd xp = ball_point(rng, d, point_radius);
    KernelBlock blk = kernel.block(x, xp);
    Eigen::MatrixXd fd(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        Eigen::VectorXd xr = x, xpc = xp;
        xr(r) += h;
        xpc(c) += h;
        double pp = scalar_kernel(kernel, xr, xpc);
        xpc(c) -= 2.0 * h;
        double pm = scalar_kernel(kernel, xr, xpc);
        xr(r) -= 2.0 * h;
        double mm = scalar_kernel(kernel, xr, xpc);
        xpc(c) += 2.0 * h;
        double mp = scalar_kernel(kernel, xr, xpc);
        fd(r, c) = (pp - pm - mp + mm) / (4.0 * h * h);
      }
    }
    worst = std::max(worst, relative_gap(blk.kgg, fd));
  }
  return {name, worst <= tol, err_detail("max rel err", worst)};
}

CheckResult mc_agreement_check(const std::string& name, const Kernel& kernel,
                               WeightDistribution tag, double support_k,
                               double point_radius, int pairs, SeededRng& rng) {
  const int d = kernel.dimension();
  const int batches = 20;
  const Eigen::Index batch_size = 1000;
  const double nsigma = 6.0;
  double worst_sigma = 0.0;
  for (int pair = 0; pair < pairs; ++pair) {
    Eigen::VectorXd x = ball_point(rng, d, point_radius);
    Eigen::VectorXd xp = ball_point(rng, d, point_radius);
    std::vector<Eigen::MatrixXd> batch_means;
    for (int b = 0; b < batches; ++b) {
      WeightEnsemble w = sample_weights(tag, batch_size, d, support_k, rng);
      batch_means.push_back(empirical_kernel_block(x, xp, w).as_matrix());
    }
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(d + 1, d + 1);
    for (const auto& m : batch_means) mean += m;
    mean /= batches;
    Eigen::MatrixXd variance = Eigen::MatrixXd::Zero(d + 1, d + 1);
    for (const auto& m : batch_means) {
      variance += (m - mean).cwiseProduct(m - mean);
    }
    variance /= (batches - 1);
    Eigen::MatrixXd se = (variance / batches).cwiseSqrt();
    Eigen::MatrixXd analytic = kernel.block(x, xp).as_matrix();
    for (int r = 0; r <= d; ++r) {
      for (int c = 0; c <= d; ++c) {
        double gap = std::abs(mean(r, c) - analytic(r, c));
        double sigma = gap / (se(r, c) + 1e-12);
        worst_sigma = std::max(worst_sigma, sigma);
      }
    }
  }
  return {name, worst_sigma <= nsigma,
          err_detail("worst entry sigma", worst_sigma)};
}

CheckResult block_symmetry_check(const std::string& name, const Kernel& kernel,
                                 double point_radius, int pairs, double tol,
                                 SeededRng& rng) {
  const int d = kernel.dimension();
  double worst = 0.0;
  for (int pair = 0; pair < pairs; ++pair) {
    Eigen::VectorXd x = ball_point(rng, d, point_radius);
    Eigen::VectorXd xp = ball_point(rng, d, point_radius);
    Eigen::MatrixXd forward = kernel.block(x, xp).as_matrix();
    Eigen::MatrixXd backward = kernel.block(xp, x).as_matrix();
    worst = std::max(worst, relative_gap(forward, backward.transpose()));
  }
  return {name, worst <= tol, err_detail("max rel asym", worst)};
}

CheckResult psd_check(const std::string& name,
                      std::shared_ptr<const Kernel> kernel, double point_radius,
                      Eigen::Index n, SeededRng& rng) {
  const int d = kernel->dimension();
  Eigen::MatrixXd points(n, d), normals(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    points.row(i) = ball_point(rng, d, point_radius);
    Eigen::VectorXd normal = ball_point(rng, d, 1.0);
    normals.row(i) = normal / normal.norm();
  }
  OrientedPointCloud cloud = make_cloud(points, normals);
  GramSystem gram = assemble_gram(cloud, points, kernel, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram.matrix);
  double min_eig = eig.eigenvalues().minCoeff();
  double max_eig = eig.eigenvalues().maxCoeff();
  bool ok = min_eig >= -1e-8 * std::max(max_eig, 1.0);
  return {name, ok, err_detail("min eigenvalue", min_eig)};
}

CheckResult spline_values_check(SeededRng& rng) {
  const double k = 1.0;
  double worst = std::abs(spline1d_kernel(0.0, 0.0, k) - 1.0 / 3.0);
  worst = std::max(worst, std::abs(spline1d_kernel(1.0, 1.0, k) - 4.0 / 3.0));
  for (int pair = 0; pair < 10; ++pair) {
    double x = 2.0 * rng.uniform() - 1.0;
    double xp = 2.0 * rng.uniform() - 1.0;
    worst = std::max(
        worst, std::abs(spline1d_kernel(x, xp, k) - spline1d_kernel(xp, x, k)));
  }
  return {"spline-kernel-values", worst <= 1e-12,
          err_detail("max abs err", worst)};
}

CheckResult poisson_decay_check() {
  const int degree = 2;
  const int qpoints = 257;
  const double support = 1.5;
  double worst_rise = 0.0;
  double previous = poisson_radial_kernel(0.0, degree, qpoints);
  for (int i = 1; i <= 50; ++i) {
    double r = 1.6 * support * i / 50.0;
    double value = poisson_radial_kernel(r, degree, qpoints);
    worst_rise = std::max(worst_rise, value - previous);
    previous = value;
  }
  double mass = poisson_radial_total_mass(degree, qpoints);
  double exterior_err = 0.0;
  for (double r : {2.0, 2.5}) {
    double value = poisson_radial_kernel(r, degree, qpoints);
    exterior_err =
        std::max(exterior_err, std::abs(value - mass / r) / (mass / r));
  }
  bool ok = worst_rise <= 1e-12 && exterior_err <= 1e-9;
  return {"poisson-radial-decay", ok,
          err_detail("worst rise / ext err", std::max(worst_rise, exterior_err))};
}

}  // namespace

int cmd_selftest(std::uint64_t seed, bool inject_fault, std::ostream& log) {
  SeededRng rng(seed);
  GaussianKernel gaussian(3);
  UniformKernel uniform(3, 1.0);
  auto gaussian_ptr = std::make_shared<GaussianKernel>(3);
  auto uniform_ptr = std::make_shared<UniformKernel>(3, 1.0);

  std::vector<CheckResult> results;
  results.push_back(fd_value_grad_check("gaussian-fd-value-grad", gaussian, 0.8,
                                        10, 1e-4, rng, inject_fault));
  results.push_back(
      fd_hessian_check("gaussian-fd-grad-grad", gaussian, 0.8, 10, 1e-4, rng));
  results.push_back(fd_value_grad_check("uniform-fd-value-grad", uniform, 0.55,
                                        10, 1e-3, rng, false));
  results.push_back(
      fd_hessian_check("uniform-fd-grad-grad", uniform, 0.55, 10, 1e-3, rng));
  results.push_back(mc_agreement_check("gaussian-mc-agreement", gaussian,
                                       WeightDistribution::gaussian, 1.0, 0.8,
                                       3, rng));
  results.push_back(mc_agreement_check("uniform-mc-agreement", uniform,
                                       WeightDistribution::uniform, 1.0, 0.55,
                                       3, rng));
  results.push_back(block_symmetry_check("gaussian-block-symmetry", gaussian,
                                         0.8, 10, 1e-9, rng));
  results.push_back(block_symmetry_check("uniform-block-symmetry", uniform,
                                         0.55, 10, 1e-8, rng));
  results.push_back(psd_check("gaussian-gram-psd", gaussian_ptr, 0.8, 20, rng));
  results.push_back(psd_check("uniform-gram-psd", uniform_ptr, 0.55, 15, rng));
  results.push_back(spline_values_check(rng));
  results.push_back(poisson_decay_check());

  int passed = 0;
  for (const CheckResult& result : results) {
    log << (result.ok ? "[ok]   " : "[FAIL] ") << result.name << " ("
        << result.detail << ")\n";
    if (result.ok) ++passed;
  }
  log << "selftest: " << passed << "/" << results.size() << " checks passed\n";
  return passed == static_cast<int>(results.size()) ? exit_ok
                                                    : exit_numerical_error;
}

}  // namespace kernelsurf
