#include <gtest/gtest.h>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "kernelsurf/kernels.hpp"
#include "kernelsurf/rng.hpp"
#include "test_support.hpp"

using namespace kernelsurf;

namespace {

WeightEnsemble single_neuron(const Eigen::Vector3d& a, double b) {
  WeightEnsemble w;
  w.a = a.transpose();
  w.b = Eigen::VectorXd::Constant(1, b);
  w.distribution = WeightDistribution::gaussian;
  return w;
}

}  // namespace

TEST(empirical_kernel, single_neuron_worked_example) {
  Eigen::Vector3d e1(1, 0, 0);
  WeightEnsemble w = single_neuron(e1, 0.0);
  KernelBlock blk = empirical_kernel_block(e1, e1, w);
  // relu(1) = 1, step(1) = 1
  EXPECT_DOUBLE_EQ(blk.k00, 1.0);
  EXPECT_DOUBLE_EQ(blk.k0g[0], 1.0);
  EXPECT_DOUBLE_EQ(blk.k0g[1], 0.0);
  EXPECT_DOUBLE_EQ(blk.kg0[0], 1.0);
  EXPECT_DOUBLE_EQ(blk.kgg(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(blk.kgg(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(blk.kgg(0, 1), 0.0);
}

TEST(empirical_kernel, dead_region_gives_the_zero_block) {
  Eigen::Vector3d a(0, 0, 1);
  WeightEnsemble w = single_neuron(a, -0.5);
  // pre-activation z*1 - 0.5 < 0 for z < 0.5 at both inputs
  Eigen::Vector3d x(0.3, 0.9, 0.1), xp(-0.7, 0.2, 0.4);
  KernelBlock blk = empirical_kernel_block(x, xp, w);
  EXPECT_EQ(blk.as_matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(empirical_kernel, indicator_at_exactly_zero_preactivation_is_zero) {
  Eigen::Vector3d a(1, 0, 0);
  WeightEnsemble w = single_neuron(a, 0.0);
  Eigen::Vector3d on_hinge(0, 0.4, 0.2);  // a.x + b == 0 exactly
  Eigen::Vector3d active(1, 0, 0);
  EXPECT_EQ(empirical_kernel_block(on_hinge, active, w)
                .as_matrix()
                .cwiseAbs()
                .maxCoeff(),
            0.0);
  EXPECT_EQ(empirical_kernel_block(active, on_hinge, w)
                .as_matrix()
                .cwiseAbs()
                .maxCoeff(),
            0.0);
}

TEST(empirical_kernel, averages_over_the_ensemble) {
  // two neurons: block must equal the mean of the single-neuron blocks
  Eigen::Vector3d a0(1, 0, 0), a1(0, 1, 0);
  WeightEnsemble w;
  w.a = Eigen::MatrixXd(2, 3);
  w.a << a0.transpose(), a1.transpose();
  w.b = Eigen::Vector2d(0.2, -0.1);
  Eigen::Vector3d x(0.5, 0.6, 0.0), xp(0.1, 0.8, -0.3);
  Eigen::MatrixXd mean =
      0.5 * (empirical_kernel_block(x, xp, single_neuron(a0, 0.2)).as_matrix() +
             empirical_kernel_block(x, xp, single_neuron(a1, -0.1)).as_matrix());
  Eigen::MatrixXd full = empirical_kernel_block(x, xp, w).as_matrix();
  EXPECT_LT((full - mean).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(sample_weights, uniform_tag_shapes_and_bounds) {
  SeededRng rng(21);
  WeightEnsemble w = sample_weights(WeightDistribution::uniform, 500, 3, 0.8,
                                    rng);
  EXPECT_EQ(w.count(), 500);
  EXPECT_EQ(w.dimension(), 3);
  EXPECT_EQ(w.distribution, WeightDistribution::uniform);
  for (Eigen::Index i = 0; i < w.count(); ++i) {
    EXPECT_NEAR(w.a.row(i).norm(), 1.0, 1e-9);
    EXPECT_LE(std::abs(w.b[i]), 0.8);
  }
}

TEST(sample_weights, gaussian_tag_moments) {
  SeededRng rng(22);
  const Eigen::Index m = 100000;
  WeightEnsemble w = sample_weights(WeightDistribution::gaussian, m, 3, 1.0,
                                    rng);
  double bound = 4.0 / std::sqrt(static_cast<double>(m));
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(w.a.col(c).mean(), 0.0, bound);
  }
  EXPECT_NEAR(w.b.mean(), 0.0, bound);
  EXPECT_NEAR(w.a.col(0).cwiseAbs2().mean(), 1.0, 0.05);
}

TEST(sample_weights, same_seed_is_bitwise_identical) {
  SeededRng a(99), b(99);
  WeightEnsemble wa = sample_weights(WeightDistribution::uniform, 200, 3, 1.0, a);
  WeightEnsemble wb = sample_weights(WeightDistribution::uniform, 200, 3, 1.0, b);
  EXPECT_TRUE(wa.a == wb.a);
  EXPECT_TRUE(wa.b == wb.b);
}

TEST(sample_weights, rejects_bad_arguments) {
  SeededRng rng(1);
  EXPECT_THROW(sample_weights(WeightDistribution::uniform, 0, 3, 1.0, rng),
               std::invalid_argument);
  EXPECT_THROW(sample_weights(WeightDistribution::uniform, 10, 3, 0.0, rng),
               std::invalid_argument);
}

TEST(empirical_kernel, converges_to_the_gaussian_closed_form) {
  GaussianKernel analytic(3);
  Eigen::Vector3d x(0.30, -0.20, 0.10), xp(-0.10, 0.40, 0.25);
  double target = analytic.block(x, xp).k00;
  SeededRng rng(404);
  auto est = tsupport::mc_block(WeightDistribution::gaussian, 3, 1.0, x, xp, 20,
                               5000, rng);
  EXPECT_LE(std::abs(est.mean(0, 0) - target), 4.0 * est.se(0, 0) + 1e-9);
}

TEST(empirical_kernel, class_wraps_the_free_function) {
  SeededRng rng(55);
  WeightEnsemble w = sample_weights(WeightDistribution::uniform, 64, 3, 1.0,
                                    rng);
  EmpiricalKernel kernel(w);
  EXPECT_EQ(kernel.dimension(), 3);
  EXPECT_EQ(kernel.family(), KernelFamily::empirical);
  Eigen::Vector3d x(0.2, 0.1, -0.3), xp(-0.4, 0.0, 0.2);
  Eigen::MatrixXd direct = empirical_kernel_block(x, xp, w).as_matrix();
  Eigen::MatrixXd via_class = kernel.block(x, xp).as_matrix();
  EXPECT_EQ((direct - via_class).cwiseAbs().maxCoeff(), 0.0);
}

TEST(empirical_kernel, gram_of_the_ensemble_is_psd_by_construction) {
  SeededRng rng(66);
  WeightEnsemble w = sample_weights(WeightDistribution::gaussian, 40, 3, 1.0,
                                    rng);
  EmpiricalKernel kernel(w);
  const int n = 12;
  Eigen::MatrixXd gram(4 * n, 4 * n);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) pts.push_back(tsupport::ball_point(rng, 3, 0.9));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      gram.block(4 * i, 4 * j, 4, 4) = kernel.block(pts[i], pts[j]).as_matrix();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (gram + gram.transpose()));
  EXPECT_GE(eig.eigenvalues().minCoeff(),
            -1e-8 * std::max(1.0, eig.eigenvalues().maxCoeff()));
}
