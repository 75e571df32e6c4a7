#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <cmath>

#include "kernelsurf/extraction.hpp"
#include "kernelsurf/kernels.hpp"
#include "kernelsurf/metrics.hpp"
#include "kernelsurf/rng.hpp"
#include "kernelsurf/solver.hpp"

namespace {

using namespace kernelsurf;

Eigen::VectorXd random_point(SeededRng& rng, double radius) {
  Eigen::Vector3d p(rng.normal(), rng.normal(), rng.normal());
  p.normalize();
  return radius * std::cbrt(rng.uniform()) * p;
}

OrientedPointCloud sphere_cloud(Eigen::Index n, double radius, SeededRng& rng) {
  Eigen::MatrixXd points(n, 3), normals(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Vector3d dir(rng.normal(), rng.normal(), rng.normal());
    dir.normalize();
    points.row(i) = radius * dir;
    normals.row(i) = dir;
  }
  return make_cloud(points, normals);
}

void bm_gaussian_block(benchmark::State& state) {
  GaussianKernel kernel(3);
  SeededRng rng(7);
  Eigen::VectorXd x = random_point(rng, 0.7);
  Eigen::VectorXd xp = random_point(rng, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel.block(x, xp));
  }
}
BENCHMARK(bm_gaussian_block);

void bm_uniform_block(benchmark::State& state) {
  UniformKernel kernel(3, 1.0);
  SeededRng rng(7);
  Eigen::VectorXd x = random_point(rng, 0.6);
  Eigen::VectorXd xp = random_point(rng, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel.block(x, xp));
  }
}
BENCHMARK(bm_uniform_block);

void bm_gram_assembly(benchmark::State& state) {
  SeededRng rng(11);
  OrientedPointCloud cloud = sphere_cloud(state.range(0), 0.6, rng);
  auto kernel = make_kernel(KernelFamily::gaussian, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_gram(cloud, cloud.points, kernel, 0.0));
  }
}
BENCHMARK(bm_gram_assembly)->Arg(100)->Arg(300);

void bm_solve_direct(benchmark::State& state) {
  SeededRng rng(13);
  OrientedPointCloud cloud = sphere_cloud(state.range(0), 0.6, rng);
  auto kernel = make_kernel(KernelFamily::gaussian, 3);
  GramSystem gram = assemble_gram(cloud, cloud.points, kernel, 1e-8);
  SolverConfig config;
  config.lambda = 1e-8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(gram, config));
  }
}
BENCHMARK(bm_solve_direct)->Arg(100)->Arg(300);

void bm_grid_extraction(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  Bounds bounds;
  bounds.min = Eigen::Vector3d::Constant(-1.0);
  bounds.max = Eigen::Vector3d::Constant(1.0);
  auto sphere = [](const Eigen::Vector3d& p) { return p.norm() - 0.6; };
  for (auto _ : state) {
    ScalarGrid grid = evaluate_grid(sphere, bounds, {res, res, res});
    benchmark::DoNotOptimize(marching_cubes(grid, 0.0));
  }
}
BENCHMARK(bm_grid_extraction)->Arg(32)->Arg(64);

void bm_chamfer(benchmark::State& state) {
  SeededRng rng(17);
  const Eigen::Index n = state.range(0);
  SampledSurface a, b;
  for (Eigen::Index i = 0; i < n; ++i) {
    a.points.push_back(random_point(rng, 1.0));
    b.points.push_back(random_point(rng, 1.0));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(chamfer(a, b));
  }
}
BENCHMARK(bm_chamfer)->Arg(2000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
