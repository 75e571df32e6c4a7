#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kernelsurf/parallel.hpp"
#include "kernelsurf/solver.hpp"

namespace kernelsurf {

namespace {

// dense block kernel matrix between two point sets (rows x, columns x')
Eigen::MatrixXd build_block_matrix(const Eigen::MatrixXd& rows,
                                   const Eigen::MatrixXd& cols,
                                   const Kernel& kernel) {
  const int d = static_cast<int>(rows.cols());
  const int bs = d + 1;
  Eigen::MatrixXd m(rows.rows() * bs, cols.rows() * bs);
  parallel_for(rows.rows(), [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index j = begin; j < end; ++j) {
      Eigen::VectorXd xj = rows.row(j);
      for (Eigen::Index i = 0; i < cols.rows(); ++i) {
        KernelBlock blk = kernel.block(xj, cols.row(i));
        m.block(j * bs, i * bs, bs, bs) = blk.as_matrix();
      }
    }
  });
  return m;
}

// backward-error style relative residual
double relative_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  double denom = a.norm() * x.norm() + b.norm();
  if (denom <= 0.0) return 0.0;
  return (a * x - b).norm() / denom;
}

Eigen::VectorXd conjugate_gradient(const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& b, int max_iterations,
                                   double tolerance) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = r;
  double rs = r.squaredNorm();
  double nb = b.norm();
  if (nb <= 0.0) return x;
  for (int it = 0; it < max_iterations; ++it) {
    if (std::sqrt(rs) <= tolerance * nb) return x;
    Eigen::VectorXd ap = a * p;
    double denom = p.dot(ap);
    if (!(denom > 0.0)) {
      throw SolveError("conjugate gradient hit a non-positive curvature direction",
                       std::sqrt(rs) / nb);
    }
    double alpha = rs / denom;
    x += alpha * p;
    r -= alpha * ap;
    double rs_next = r.squaredNorm();
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }
  double final_res = std::sqrt(rs) / nb;
  if (final_res <= tolerance) return x;
  throw SolveError("conjugate gradient did not converge", final_res);
}

Eigen::MatrixXd reshape_coefficients(const Eigen::VectorXd& alpha,
                                     Eigen::Index centers, int block_size) {
  Eigen::MatrixXd c(centers, block_size);
  for (Eigen::Index i = 0; i < centers; ++i) {
    c.row(i) = alpha.segment(i * block_size, block_size);
  }
  return c;
}

}  // namespace

GramSystem assemble_gram(const OrientedPointCloud& cloud,
                         const Eigen::MatrixXd& centers,
                         std::shared_ptr<const Kernel> kernel, double lambda) {
  if (!kernel) {
    throw std::invalid_argument("assemble_gram needs a kernel");
  }
  if (centers.rows() < 1) {
    throw std::invalid_argument("assemble_gram needs at least one center");
  }
  if (centers.cols() != cloud.points.cols() ||
      kernel->dimension() != cloud.dimension()) {
    throw std::invalid_argument("dimension mismatch in assemble_gram");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("lambda must be nonnegative");
  }

  const int d = cloud.dimension();
  const int bs = d + 1;
  GramSystem system;
  system.centers = centers;
  system.kernel = std::move(kernel);
  system.lambda = lambda;
  system.dimension = d;
  system.centers_are_samples =
      centers.rows() == cloud.points.rows() &&
      (centers.array() == cloud.points.array()).all();

  system.matrix = build_block_matrix(cloud.points, centers, *system.kernel);
  if (system.centers_are_samples && lambda > 0.0) {
    system.matrix.diagonal().array() += lambda;
  }

  system.rhs.resize(cloud.size() * bs);
  for (Eigen::Index j = 0; j < cloud.size(); ++j) {
    system.rhs(j * bs) = cloud.values(j);
    system.rhs.segment(j * bs + 1, d) = cloud.normals.row(j);
  }
  return system;
}

ImplicitField solve(const GramSystem& system, const SolverConfig& config) {
  const int bs = system.dimension + 1;
  const Eigen::Index m_centers = system.centers.rows();
  Eigen::VectorXd alpha;

  if (system.centers_are_samples) {
    // ridge-regression square case; the matrix already carries lambda
    if (config.method == SolveMethod::conjugate_gradient) {
      alpha = conjugate_gradient(system.matrix, system.rhs,
                                 config.cg_max_iterations, config.cg_tolerance);
    } else {
      alpha = Eigen::PartialPivLU<Eigen::MatrixXd>(system.matrix)
                  .solve(system.rhs);
      double res = alpha.allFinite()
                       ? relative_residual(system.matrix, alpha, system.rhs)
                       : std::numeric_limits<double>::infinity();
      if (!(res <= 1e-6)) {
        throw SolveError("dense factorization failed", res);
      }
    }
  } else {
    // center-restricted expansion: regularized normal equations
    Eigen::MatrixXd kmm =
        build_block_matrix(system.centers, system.centers, *system.kernel);
    double lambda_eff = system.lambda;
    if (lambda_eff == 0.0) {
      // the normal equations square the condition number; keep a small floor
      lambda_eff = 1e-10 * kmm.trace() / static_cast<double>(m_centers);
    }
    Eigen::MatrixXd gram =
        system.matrix.transpose() * system.matrix + lambda_eff * kmm;
    Eigen::VectorXd rhs = system.matrix.transpose() * system.rhs;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    alpha = ldlt.solve(rhs);
    double res = alpha.allFinite() ? relative_residual(gram, alpha, rhs)
                                   : std::numeric_limits<double>::infinity();
    if (!(res <= 1e-6)) {
      throw SolveError("normal-equations factorization failed", res);
    }
  }

  ImplicitField field;
  field.centers = system.centers;
  field.coefficients = reshape_coefficients(alpha, m_centers, bs);
  field.kernel = system.kernel;
  field.transform = NormalizationTransform::identity(system.dimension);
  return field;
}

std::pair<double, Eigen::VectorXd> ImplicitField::evaluate(
    const Eigen::VectorXd& x) const {
  const int d = dimension();
  double f = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd center(d);
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    center = centers.row(i);
    KernelBlock blk = kernel->block(x, center);
    double a0 = coefficients(i, 0);
    Eigen::VectorXd ag = coefficients.row(i).tail(d);
    f += blk.k00 * a0 + blk.k0g.dot(ag);
    grad += blk.kg0 * a0 + blk.kgg * ag;
  }
  return {f, std::move(grad)};
}

double ImplicitField::value(const Eigen::VectorXd& x) const {
  const int d = dimension();
  double f = 0.0;
  double k00 = 0.0;
  Eigen::VectorXd k0g(d);
  Eigen::VectorXd center(d);
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    center = centers.row(i);
    kernel->value_row(x, center, k00, k0g);
    f += k00 * coefficients(i, 0) + k0g.dot(coefficients.row(i).tail(d));
  }
  return f;
}

double rkhs_norm(const ImplicitField& field, const GramSystem& system) {
  if (!system.centers_are_samples || !system.square()) {
    throw std::invalid_argument("rkhs_norm needs a square centers==samples system");
  }
  const int bs = system.dimension + 1;
  if (field.coefficients.rows() != system.centers.rows()) {
    throw std::invalid_argument("field does not match the system");
  }
  Eigen::VectorXd alpha(field.coefficients.rows() * bs);
  for (Eigen::Index i = 0; i < field.coefficients.rows(); ++i) {
    alpha.segment(i * bs, bs) = field.coefficients.row(i);
  }
  // unregularized Gram
  Eigen::VectorXd k_alpha = system.matrix * alpha;
  if (system.lambda > 0.0) k_alpha -= system.lambda * alpha;
  double q = alpha.dot(k_alpha);
  double k_norm = system.matrix.norm();
  if (q < -1e-8 * k_norm) {
    throw std::runtime_error("negative RKHS quadratic form (PSD violation)");
  }
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace kernelsurf
