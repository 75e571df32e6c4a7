#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "kernelsurf/extraction.hpp"
#include "kernelsurf/parallel.hpp"
#include "mc_tables.hpp"

namespace kernelsurf {

namespace {

void validate_grid(const ScalarGrid& grid) {
  for (int a = 0; a < 3; ++a) {
    if (grid.resolution[a] < 2) {
      throw std::invalid_argument("grid resolution must be >= 2 per axis");
    }
    if (!(grid.spacing[a] > 0.0)) {
      throw std::invalid_argument("grid spacing must be positive");
    }
  }
  std::size_t expected = static_cast<std::size_t>(grid.resolution[0]) *
                         grid.resolution[1] * grid.resolution[2];
  if (grid.values.size() != expected) {
    throw std::invalid_argument("grid value count does not match resolution");
  }
  for (double v : grid.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite grid value");
    }
  }
}

// cube corner offsets and the corner pairs of the 12 edges, matching the
// classic case tables
constexpr int corner_offset[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0},
                                     {0, 1, 0}, {0, 0, 1}, {1, 0, 1},
                                     {1, 1, 1}, {0, 1, 1}};
constexpr int edge_corners[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                     {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                     {0, 4}, {1, 5}, {2, 6}, {3, 7}};
// canonical edge representation: axis + lattice origin offset
struct EdgeRef {
  int axis;
  int origin[3];
};
constexpr EdgeRef edge_ref[12] = {
    {0, {0, 0, 0}}, {1, {1, 0, 0}}, {0, {0, 1, 0}}, {1, {0, 0, 0}},
    {0, {0, 0, 1}}, {1, {1, 0, 1}}, {0, {0, 1, 1}}, {1, {0, 0, 1}},
    {2, {0, 0, 0}}, {2, {1, 0, 0}}, {2, {1, 1, 0}}, {2, {0, 1, 0}},
};

}  // namespace

ScalarGrid evaluate_grid(const std::function<double(const Eigen::Vector3d&)>& f,
                         const Bounds& bounds,
                         const std::array<int, 3>& resolution) {
  if (bounds.min.size() != 3 || bounds.max.size() != 3) {
    throw std::invalid_argument("grid evaluation needs 3D bounds");
  }
  ScalarGrid grid;
  grid.resolution = resolution;
  grid.origin = bounds.min;
  for (int a = 0; a < 3; ++a) {
    if (resolution[a] < 2) {
      throw std::invalid_argument("grid resolution must be >= 2 per axis");
    }
    double extent = bounds.max(a) - bounds.min(a);
    if (!(extent > 0.0)) {
      throw std::invalid_argument("degenerate bounds for grid evaluation");
    }
    grid.spacing(a) = extent / (resolution[a] - 1);
  }
  grid.values.resize(static_cast<std::size_t>(resolution[0]) * resolution[1] *
                     resolution[2]);
  const Eigen::Index nxy =
      static_cast<Eigen::Index>(resolution[0]) * resolution[1];
  parallel_for(static_cast<Eigen::Index>(grid.values.size()),
               [&](Eigen::Index begin, Eigen::Index end) {
                 for (Eigen::Index idx = begin; idx < end; ++idx) {
                   int k = static_cast<int>(idx / nxy);
                   int rem = static_cast<int>(idx % nxy);
                   int j = rem / resolution[0];
                   int i = rem % resolution[0];
                   grid.values[idx] = f(grid.position(i, j, k));
                 }
               });
  return grid;
}

ScalarGrid evaluate_grid(const ImplicitField& field, const Bounds& bounds,
                         const std::array<int, 3>& resolution) {
  if (field.dimension() != 3) {
    throw std::invalid_argument("grid evaluation needs a 3D field");
  }
  return evaluate_grid(
      [&field](const Eigen::Vector3d& p) { return field.value(p); }, bounds,
      resolution);
}

TriangleMesh marching_cubes(const ScalarGrid& grid, double iso) {
  validate_grid(grid);
  const int nx = grid.resolution[0];
  const int ny = grid.resolution[1];
  const int nz = grid.resolution[2];

  // pass 1: per-z-slab triangle lists as edge-key triples (parallel, output
  // independent of the thread partition)
  auto edge_key = [&](int i, int j, int k, int edge) -> std::uint64_t {
    const EdgeRef& ref = edge_ref[edge];
    std::uint64_t ei = static_cast<std::uint64_t>(i + ref.origin[0]);
    std::uint64_t ej = static_cast<std::uint64_t>(j + ref.origin[1]);
    std::uint64_t ek = static_cast<std::uint64_t>(k + ref.origin[2]);
    return ((ek * static_cast<std::uint64_t>(ny) + ej) *
                static_cast<std::uint64_t>(nx) +
            ei) *
               3ull +
           static_cast<std::uint64_t>(ref.axis);
  };

  std::vector<std::vector<std::array<std::uint64_t, 3>>> slabs(
      std::max(nz - 1, 0));
  parallel_for(nz - 1, [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index k = begin; k < end; ++k) {
      auto& slab = slabs[k];
      for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
          int cube = 0;
          for (int c = 0; c < 8; ++c) {
            double v = grid.at(i + corner_offset[c][0], j + corner_offset[c][1],
                               static_cast<int>(k) + corner_offset[c][2]);
            if (v < iso) cube |= 1 << c;
          }
          if (detail::mc_edge_table[cube] == 0) continue;
          const int* tri = detail::mc_tri_table[cube];
          for (int t = 0; tri[t] != -1; t += 3) {
            slab.push_back({edge_key(i, j, static_cast<int>(k), tri[t]),
                            edge_key(i, j, static_cast<int>(k), tri[t + 1]),
                            edge_key(i, j, static_cast<int>(k), tri[t + 2])});
          }
        }
      }
    }
  });

  // pass 2: sequential index assignment in slab order; vertex positions are
  // interpolated once per edge from its canonical endpoints
  TriangleMesh mesh;
  std::unordered_map<std::uint64_t, int> vertex_of_edge;
  auto vertex_index = [&](std::uint64_t key) -> int {
    auto it = vertex_of_edge.find(key);
    if (it != vertex_of_edge.end()) return it->second;
    int axis = static_cast<int>(key % 3);
    std::uint64_t cell = key / 3;
    int i = static_cast<int>(cell % nx);
    cell /= nx;
    int j = static_cast<int>(cell % ny);
    int k = static_cast<int>(cell / ny);
    double v0 = grid.at(i, j, k);
    int i1 = i + (axis == 0), j1 = j + (axis == 1), k1 = k + (axis == 2);
    double v1 = grid.at(i1, j1, k1);
    double denom = v1 - v0;
    double t = (denom != 0.0) ? (iso - v0) / denom : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    Eigen::Vector3d p0 = grid.position(i, j, k);
    Eigen::Vector3d p1 = grid.position(i1, j1, k1);
    int index = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(p0 + t * (p1 - p0));
    vertex_of_edge.emplace(key, index);
    return index;
  };

  for (const auto& slab : slabs) {
    for (const auto& tri : slab) {
      int a = vertex_index(tri[0]);
      int b = vertex_index(tri[1]);
      int c = vertex_index(tri[2]);
      if (a == b || b == c || a == c) continue;  // table never emits these
      mesh.triangles.push_back({a, b, c});
    }
  }
  return mesh;
}

}  // namespace kernelsurf
