#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <vector>

#include "kernelsurf/solver.hpp"
#include "kernelsurf/types.hpp"

namespace kernelsurf {

// Dense scalar lattice, values in x-fastest order.
struct ScalarGrid {
  std::array<int, 3> resolution = {0, 0, 0};
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d spacing = Eigen::Vector3d::Zero();
  std::vector<double> values;

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(resolution[0]) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(resolution[1]) *
                    static_cast<std::size_t>(k));
  }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
  Eigen::Vector3d position(int i, int j, int k) const {
    return origin + spacing.cwiseProduct(Eigen::Vector3d(i, j, k));
  }
};

// Lattice evaluation of the field (or an injected closure) over the bounds.
// Parallel over voxels, deterministic.
ScalarGrid evaluate_grid(const ImplicitField& field, const Bounds& bounds,
                         const std::array<int, 3>& resolution);
ScalarGrid evaluate_grid(const std::function<double(const Eigen::Vector3d&)>& f,
                         const Bounds& bounds,
                         const std::array<int, 3>& resolution);

// Standard 256-case marching cubes with linear edge interpolation; vertices
// shared through an edge-keyed map; output in grid world coordinates. A grid
// with no sign change yields an empty mesh.
TriangleMesh marching_cubes(const ScalarGrid& grid, double iso = 0.0);

}  // namespace kernelsurf
