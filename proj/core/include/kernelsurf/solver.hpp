#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "kernelsurf/kernels.hpp"
#include "kernelsurf/rng.hpp"
#include "kernelsurf/types.hpp"

namespace kernelsurf {

// Assembled block system: rows = s (d+1)-blocks of sample constraints,
// columns = M (d+1)-blocks of centers. Square and symmetric when the centers
// are exactly the samples.
struct GramSystem {
  Eigen::MatrixXd matrix;   // s(d+1) x M(d+1)
  Eigen::VectorXd rhs;      // s(d+1), per sample: value then d normal parts
  Eigen::MatrixXd centers;  // M x d
  std::shared_ptr<const Kernel> kernel;
  double lambda = 0.0;
  int dimension = 0;
  // centers are exactly the samples (same order): the ridge-regression square
  // case. A reordered-center system is square in shape but solved through the
  // rectangular path.
  bool centers_are_samples = false;

  bool square() const { return matrix.rows() == matrix.cols(); }
};

enum class SolveMethod { direct, conjugate_gradient };

struct NystromSpec {
  enum class Mode { all_points, count, radius };
  Mode mode = Mode::all_points;
  Eigen::Index count = 0;
  double radius = 0.0;

  static NystromSpec all_points() { return {}; }
  static NystromSpec with_count(Eigen::Index m) {
    return {Mode::count, m, 0.0};
  }
  static NystromSpec with_radius(double r) { return {Mode::radius, 0, r}; }
};

struct SolverConfig {
  double lambda = 0.0;
  SolveMethod method = SolveMethod::direct;
  int cg_max_iterations = 2000;
  double cg_tolerance = 1e-10;
  NystromSpec nystrom;
  std::uint64_t seed = 0;
};

// Blue-noise subset of the input points. Radius mode: greedy dart throwing in
// a seeded random order with the given exclusion radius. Count mode: the
// radius is bisected until the accepted count is within 10% of M, then the
// subset is truncated / padded by farthest-point additions to exactly M.
Eigen::MatrixXd select_nystrom_centers(const OrientedPointCloud& cloud,
                                       const NystromSpec& target,
                                       SeededRng& rng);

// Block Gram matrix against the centers.  When centers == samples, lambda is
// added to the diagonal; rectangular systems leave lambda to the solver's
// normal equations.
GramSystem assemble_gram(const OrientedPointCloud& cloud,
                         const Eigen::MatrixXd& centers,
                         std::shared_ptr<const Kernel> kernel, double lambda);

// Kernel expansion with one (d+1)-coefficient block per center.
struct ImplicitField {
  Eigen::MatrixXd centers;       // M x d
  Eigen::MatrixXd coefficients;  // M x (d+1), row = (value, gradient parts)
  std::shared_ptr<const Kernel> kernel;
  NormalizationTransform transform;  // normalized -> world bookkeeping

  int dimension() const { return static_cast<int>(centers.cols()); }

  // f(x) and grad f(x) at a point in normalized coordinates.
  std::pair<double, Eigen::VectorXd> evaluate(const Eigen::VectorXd& x) const;

  // f(x) only; skips the second-derivative blocks.
  double value(const Eigen::VectorXd& x) const;
};

// Square case: dense factorization of (K + lambda I) or CG. Rectangular case:
// regularized normal equations (Knm^T Knm + lambda Kmm) alpha = Knm^T rhs,
// with a small floor on lambda because the normal equations square the
// condition number. Throws SolveError on factorization failure or CG
// non-convergence, carrying the residual norm.
ImplicitField solve(const GramSystem& system, const SolverConfig& config);

// sqrt(alpha^T K alpha) with the unregularized square Gram. Requires a square
// system; throws on a quadratic form below -1e-8 * |K|.
double rkhs_norm(const ImplicitField& field, const GramSystem& system);

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& message, double residual)
      : std::runtime_error(message), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace kernelsurf
