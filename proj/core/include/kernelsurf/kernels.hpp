#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "kernelsurf/rng.hpp"

namespace kernelsurf {

// One (d+1)x(d+1) kernel block: value-value scalar, value-gradient row
// (derivative in the second argument), gradient-value column (derivative in
// the first argument), and the mixed second-derivative d x d block.
struct KernelBlock {
  double k00 = 0.0;
  Eigen::VectorXd k0g;  // d
  Eigen::VectorXd kg0;  // d
  Eigen::MatrixXd kgg;  // d x d

  static KernelBlock zero(int dimension);

  // [k00, k0g^T; kg0, kgg]
  Eigen::MatrixXd as_matrix() const;
};

enum class KernelFamily { gaussian, uniform, poisson_radial, empirical };

class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual int dimension() const = 0;
  virtual KernelFamily family() const = 0;
  virtual std::string name() const = 0;

  virtual KernelBlock block(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& x_prime) const = 0;

  // Value row only (k00, k0g). Default extracts from block(); kernels with an
  // expensive second-derivative block override this for grid evaluation.
  virtual void value_row(const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_prime, double& k00,
                         Eigen::VectorXd& k0g) const;
};

// Closed form of the infinite-width ReLU kernel for standard-normal weights,
// expressed through the angle between the bias-lifted vectors (x, 1), (x', 1).
class GaussianKernel final : public Kernel {
 public:
  explicit GaussianKernel(int dimension);

  int dimension() const override { return dimension_; }
  KernelFamily family() const override { return KernelFamily::gaussian; }
  std::string name() const override { return "gaussian"; }

  KernelBlock block(const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x_prime) const override;
  void value_row(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                 double& k00, Eigen::VectorXd& k0g) const override;

 private:
  int dimension_;
};

// Closed form for directions uniform on S^(d-1) and biases uniform on [-k, k].
// Valid only for |x|, |x'| < k; d >= 2.
class UniformKernel final : public Kernel {
 public:
  UniformKernel(int dimension, double support_k);

  int dimension() const override { return dimension_; }
  KernelFamily family() const override { return KernelFamily::uniform; }
  std::string name() const override { return "uniform"; }
  double support_k() const { return support_k_; }

  KernelBlock block(const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x_prime) const override;
  void value_row(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                 double& k00, Eigen::VectorXd& k0g) const override;

 private:
  int dimension_;
  double support_k_;
  // normalized coefficients, fixed by (d, k); hot-path evaluation only mixes
  // them with the pair geometry
  double coef_const_ = 0.0;  // constant part of k00
  double coef_cos_ = 0.0;    // k00 term in |x||x'|cos a; leading k0g term
  double coef_eta3_ = 0.0;   // boundary-integral terms of k00 / k0g
  double coef_id_ = 0.0;     // identity part of kgg
  double coef_greek_ = 0.0;  // rotated 2x2 part of kgg
};

enum class WeightDistribution { uniform, gaussian };

// Finite random-feature ensemble: m direction rows and m biases, tagged with
// the distribution they were drawn from.
struct WeightEnsemble {
  Eigen::MatrixXd a;  // m x d
  Eigen::VectorXd b;  // m
  WeightDistribution distribution = WeightDistribution::gaussian;
  double support_k = 1.0;  // bias bound for the uniform tag

  Eigen::Index count() const { return a.rows(); }
  int dimension() const { return static_cast<int>(a.cols()); }
};

// uniform tag: rows uniform on the sphere (normalized Gaussian draws), biases
// uniform on [-k, k]. gaussian tag: all entries standard normal.
WeightEnsemble sample_weights(WeightDistribution tag, Eigen::Index m,
                              int dimension, double support_k, SeededRng& rng);

// (1/m) sum of the four outer-product terms of the ReLU feature map and its
// (sub)gradient; the indicator at exactly zero pre-activation is 0.
KernelBlock empirical_kernel_block(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& x_prime,
                                   const WeightEnsemble& w);

class EmpiricalKernel final : public Kernel {
 public:
  explicit EmpiricalKernel(WeightEnsemble w);

  int dimension() const override { return ensemble_.dimension(); }
  KernelFamily family() const override { return KernelFamily::empirical; }
  std::string name() const override { return "empirical"; }
  const WeightEnsemble& ensemble() const { return ensemble_; }

  KernelBlock block(const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x_prime) const override;

 private:
  WeightEnsemble ensemble_;
};

// 1D reduction for a = +-1, b uniform on [-k, k]: piecewise-cubic C^2 kernel.
// Arguments must lie in [-k, k].
double spline1d_kernel(double x, double x_prime, double k);

// Newton potential of the radial bump of the given spline degree (1: hat,
// support 1; 2: quadratic B-spline, support 1.5), evaluated at radius r by
// composite-Simpson shell quadrature with the given point count.
double poisson_radial_kernel(double r, int spline_degree, int quadrature_points);

// Total bump mass M = integral of 4 pi rho^2 B(rho), same quadrature rule, so
// that the exterior identity phi(r) = M / r holds exactly for r >= support.
double poisson_radial_total_mass(int spline_degree, int quadrature_points);

// Block extension of the radial potential (3D): phi(|x - x'|) and its
// derivatives. Not positive semidefinite; usable for reconstruction but
// excluded from the PSD property.
class PoissonRadialKernel final : public Kernel {
 public:
  explicit PoissonRadialKernel(int spline_degree, int quadrature_points = 257);

  int dimension() const override { return 3; }
  KernelFamily family() const override { return KernelFamily::poisson_radial; }
  std::string name() const override { return "poisson-radial"; }
  int spline_degree() const { return spline_degree_; }
  double support_radius() const;

  KernelBlock block(const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x_prime) const override;
  void value_row(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                 double& k00, Eigen::VectorXd& k0g) const override;

 private:
  int spline_degree_;
  int quadrature_points_;
};

std::shared_ptr<const Kernel> make_kernel(KernelFamily family, int dimension,
                                          double support_k = 1.0);

}  // namespace kernelsurf
