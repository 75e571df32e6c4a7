#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>

#include "kernelsurf/cli.hpp"
#include "kernelsurf/extraction.hpp"
#include "kernelsurf/io.hpp"
#include "kernelsurf/metrics.hpp"

namespace kernelsurf {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Eigen::VectorXd pack_coefficients(const Eigen::MatrixXd& coefficients) {
  const Eigen::Index m = coefficients.rows();
  const Eigen::Index bs = coefficients.cols();
  Eigen::VectorXd packed(m * bs);
  for (Eigen::Index i = 0; i < m; ++i) {
    packed.segment(i * bs, bs) = coefficients.row(i);
  }
  return packed;
}

}  // namespace

int cmd_reconstruct(const ReconstructRequest& request, std::ostream& log) {
  auto start = std::chrono::steady_clock::now();
  if (request.input_path.empty() || request.output_path.empty()) {
    log << "error: input and output paths are required\n";
    return exit_usage_error;
  }
  if (request.grid_resolution < 16 || request.grid_resolution > 512) {
    log << "error: grid resolution must lie in [16, 512]\n";
    return exit_usage_error;
  }
  if (!(request.lambda >= 0.0)) {
    log << "error: lambda must be >= 0\n";
    return exit_usage_error;
  }
  if (!(request.support_k > 0.0)) {
    log << "error: support bound k must be > 0\n";
    return exit_usage_error;
  }
  if (request.kernel == KernelFamily::empirical) {
    log << "error: the empirical kernel is a diagnostic, not a reconstruction "
           "kernel\n";
    return exit_usage_error;
  }

  try {
    OrientedPointCloud cloud = load_cloud(request.input_path);
    if (cloud.dimension() != 3) {
      log << "error: reconstruction needs a 3D cloud\n";
      return exit_usage_error;
    }
    auto [normalized, transform] = normalize(cloud);
    auto kernel = make_kernel(request.kernel, 3, request.support_k);

    SeededRng rng(request.seed);
    Eigen::MatrixXd centers =
        select_nystrom_centers(normalized, request.nystrom, rng);
    log << "samples " << normalized.size() << "  centers " << centers.rows()
        << "  kernel " << kernel->name() << "  lambda " << request.lambda
        << "\n";

    GramSystem gram = assemble_gram(normalized, centers, kernel,
                                    request.lambda);
    SolverConfig config;
    config.lambda = request.lambda;
    config.nystrom = request.nystrom;
    config.seed = request.seed;
    // CG needs a positive semidefinite square system; keep the direct path for
    // small systems and for the indefinite radial kernel.
    bool cg_safe = gram.centers_are_samples &&
                   request.kernel != KernelFamily::poisson_radial;
    config.method = (cg_safe && gram.matrix.rows() > 8000)
                        ? SolveMethod::conjugate_gradient
                        : SolveMethod::direct;

    ImplicitField field;
    try {
      field = solve(gram, config);
    } catch (const SolveError& e) {
      log << "numerical failure: " << e.what() << "\n";
      return exit_numerical_error;
    }
    field.transform = transform;

    Eigen::VectorXd packed = pack_coefficients(field.coefficients);
    Eigen::MatrixXd unregularized = gram.matrix;
    if (gram.centers_are_samples && gram.lambda > 0.0) {
      unregularized.diagonal().array() -= gram.lambda;
    }
    Eigen::VectorXd residual = unregularized * packed - gram.rhs;
    double rhs_norm = gram.rhs.norm();
    char line[160];
    std::snprintf(line, sizeof(line),
                  "data residual %.6e  (relative %.6e)\n", residual.norm(),
                  residual.norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0));
    log << line;

    if (gram.centers_are_samples) {
      try {
        std::snprintf(line, sizeof(line), "rkhs norm %.6e\n",
                      rkhs_norm(field, gram));
        log << line;
      } catch (const std::exception&) {
        log << "rkhs norm n/a (indefinite kernel)\n";
      }
    } else {
      log << "rkhs norm n/a (subset centers)\n";
    }

    // normalized-cloud box expanded by 10% per side; normalized data sits in
    // the 0.7 ball so the padded box stays inside the kernel validity region
    Bounds bounds = bounding_box(normalized.points, 0.10);
    for (int axis = 0; axis < 3; ++axis) {
      double extent = bounds.max(axis) - bounds.min(axis);
      if (extent < 0.1) {  // flat data: give marching cubes some volume
        double mid = 0.5 * (bounds.min(axis) + bounds.max(axis));
        bounds.min(axis) = mid - 0.05;
        bounds.max(axis) = mid + 0.05;
      }
    }
    const int res = request.grid_resolution;
    // The compact-support kernel is only defined inside its bias ball; grid
    // corners beyond it are unambiguously outside the surface.
    const bool bounded_support = request.kernel == KernelFamily::uniform;
    const double guard = 0.995 * request.support_k;
    ScalarGrid grid = evaluate_grid(
        [&](const Eigen::Vector3d& p) {
          if (bounded_support && p.norm() >= guard) return 1.0;
          return field.value(p);
        },
        bounds, {res, res, res});
    TriangleMesh mesh = marching_cubes(grid, 0.0);
    TriangleMesh world_mesh = denormalize_mesh(mesh, transform);
    save_mesh(world_mesh, request.output_path);

    log << "grid " << res << "^3  vertices " << world_mesh.vertices.size()
        << "  triangles " << world_mesh.triangles.size() << "\n";
    log << "mesh written to " << request.output_path << "\n";
    std::snprintf(line, sizeof(line), "wall time %.3f s\n",
                  seconds_since(start));
    log << line;
    return exit_ok;
  } catch (const SolveError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return exit_numerical_error;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_usage_error;
  }
}

int cmd_metrics(const MetricsRequest& request, std::ostream& log) {
  if (request.mesh_a_path.empty() || request.mesh_b_path.empty()) {
    log << "error: two mesh paths are required\n";
    return exit_usage_error;
  }
  if (request.samples < 1) {
    log << "error: sample count must be >= 1\n";
    return exit_usage_error;
  }
  try {
    TriangleMesh mesh_a = load_mesh_obj(request.mesh_a_path);
    TriangleMesh mesh_b = load_mesh_obj(request.mesh_b_path);
    if (mesh_a.vertices.empty() || mesh_b.vertices.empty()) {
      log << "error: both meshes must be nonempty\n";
      return exit_usage_error;
    }

    if (request.normalize) {
      // one joint transform so relative placement survives
      Eigen::Vector3d lo = mesh_a.vertices.front();
      Eigen::Vector3d hi = lo;
      for (const TriangleMesh* mesh : {&mesh_a, &mesh_b}) {
        for (const Eigen::Vector3d& v : mesh->vertices) {
          lo = lo.cwiseMin(v);
          hi = hi.cwiseMax(v);
        }
      }
      double extent = (hi - lo).maxCoeff();
      double scale = extent > 0.0 ? 1.0 / extent : 1.0;
      for (TriangleMesh* mesh : {&mesh_a, &mesh_b}) {
        for (Eigen::Vector3d& v : mesh->vertices) {
          v = (v - lo) * scale;
        }
      }
    }

    // same seed for both sides: identical meshes give exactly zero metrics
    SeededRng rng_a(request.seed);
    SeededRng rng_b(request.seed);
    SampledSurface a = sample_mesh(mesh_a, request.samples, rng_a);
    SampledSurface b = sample_mesh(mesh_b, request.samples, rng_b);

    double chamfer_ab = chamfer(a, b, true);
    double chamfer_ba = chamfer(b, a, true);
    double hausdorff_ab = hausdorff(a, b, true);
    double hausdorff_ba = hausdorff(b, a, true);

    char line[160];
    std::snprintf(line, sizeof(line), "%-10s  %14s  %14s  %14s\n", "metric",
                  "a->b", "b->a", "two-sided");
    log << line;
    std::snprintf(line, sizeof(line), "%-10s  %14.6e  %14.6e  %14.6e\n",
                  "chamfer", chamfer_ab, chamfer_ba,
                  0.5 * (chamfer_ab + chamfer_ba));
    log << line;
    std::snprintf(line, sizeof(line), "%-10s  %14.6e  %14.6e  %14.6e\n",
                  "hausdorff", hausdorff_ab, hausdorff_ba,
                  std::max(hausdorff_ab, hausdorff_ba));
    log << line;
    return exit_ok;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_usage_error;
  }
}

}  // namespace kernelsurf
