#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <vector>

#include "kernelsurf/rng.hpp"
#include "kernelsurf/types.hpp"

namespace kernelsurf {

struct SampledSurface {
  enum class Source { mesh_sampled, raw_cloud };
  std::vector<Eigen::Vector3d> points;
  Source source = Source::raw_cloud;
};

// n points drawn area-proportionally across triangles, uniform barycentric
// within each. Empty mesh is an error.
SampledSurface sample_mesh(const TriangleMesh& mesh, Eigen::Index n,
                           SeededRng& rng);

// Mean nearest-neighbor distance (unsquared). one_sided: a -> b only;
// two-sided: average of the two directions. Exact nearest neighbors.
double chamfer(const SampledSurface& a, const SampledSurface& b,
               bool one_sided = false);

// Max nearest-neighbor distance; otherwise as chamfer.
double hausdorff(const SampledSurface& a, const SampledSurface& b,
                 bool one_sided = false);

// Occupancy IoU of {f < 0} for two predicates on lattice centers over the
// bounds. Both-empty convention: 1.
double volumetric_iou(const std::function<bool(const Eigen::Vector3d&)>& inside_a,
                      const std::function<bool(const Eigen::Vector3d&)>& inside_b,
                      const Bounds& bounds, const std::array<int, 3>& resolution);

}  // namespace kernelsurf
