#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kdtree.hpp"
#include "kernelsurf/metrics.hpp"
#include "kernelsurf/parallel.hpp"

namespace kernelsurf {

namespace {

// nearest-neighbor distances from every point of a to the set b
std::vector<double> nn_distances(const std::vector<Eigen::Vector3d>& a,
                                 const std::vector<Eigen::Vector3d>& b) {
  detail::KdTree3 tree(b);
  std::vector<double> out(a.size());
  parallel_for(static_cast<Eigen::Index>(a.size()),
               [&](Eigen::Index begin, Eigen::Index end) {
                 for (Eigen::Index i = begin; i < end; ++i) {
                   out[i] = std::sqrt(tree.nearest(a[i]).first);
                 }
               });
  return out;
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double max_of(const std::vector<double>& v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, x);
  return best;
}

void check_nonempty(const SampledSurface& a, const SampledSurface& b) {
  if (a.points.empty() || b.points.empty()) {
    throw std::invalid_argument("metric inputs must be nonempty");
  }
}

}  // namespace

SampledSurface sample_mesh(const TriangleMesh& mesh, Eigen::Index n,
                           SeededRng& rng) {
  if (mesh.triangles.empty()) {
    throw std::invalid_argument("cannot sample an empty mesh");
  }
  if (n < 1) {
    throw std::invalid_argument("sample count must be >= 1");
  }
  std::vector<double> cumulative_area(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector3d& a = mesh.vertices[tri[0]];
    const Eigen::Vector3d& b = mesh.vertices[tri[1]];
    const Eigen::Vector3d& c = mesh.vertices[tri[2]];
    total += 0.5 * (b - a).cross(c - a).norm();
    cumulative_area[t] = total;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("mesh has zero total area");
  }

  SampledSurface surface;
  surface.source = SampledSurface::Source::mesh_sampled;
  surface.points.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double pick = rng.uniform() * total;
    std::size_t t = std::upper_bound(cumulative_area.begin(),
                                     cumulative_area.end(), pick) -
                    cumulative_area.begin();
    if (t >= mesh.triangles.size()) t = mesh.triangles.size() - 1;
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector3d& a = mesh.vertices[tri[0]];
    const Eigen::Vector3d& b = mesh.vertices[tri[1]];
    const Eigen::Vector3d& c = mesh.vertices[tri[2]];
    // uniform barycentric draw
    double su = std::sqrt(rng.uniform());
    double v = rng.uniform();
    surface.points.push_back((1.0 - su) * a + su * (1.0 - v) * b + su * v * c);
  }
  return surface;
}

double chamfer(const SampledSurface& a, const SampledSurface& b,
               bool one_sided) {
  check_nonempty(a, b);
  double forward = mean_of(nn_distances(a.points, b.points));
  if (one_sided) return forward;
  double backward = mean_of(nn_distances(b.points, a.points));
  return 0.5 * (forward + backward);
}

double hausdorff(const SampledSurface& a, const SampledSurface& b,
                 bool one_sided) {
  check_nonempty(a, b);
  double forward = max_of(nn_distances(a.points, b.points));
  if (one_sided) return forward;
  double backward = max_of(nn_distances(b.points, a.points));
  return std::max(forward, backward);
}

double volumetric_iou(
    const std::function<bool(const Eigen::Vector3d&)>& inside_a,
    const std::function<bool(const Eigen::Vector3d&)>& inside_b,
    const Bounds& bounds, const std::array<int, 3>& resolution) {
  if (bounds.min.size() != 3 || bounds.max.size() != 3) {
    throw std::invalid_argument("volumetric IoU needs 3D bounds");
  }
  for (int axis = 0; axis < 3; ++axis) {
    if (resolution[axis] < 16) {
      throw std::invalid_argument("IoU resolution must be >= 16 per axis");
    }
  }
  Eigen::Vector3d extent = bounds.max - bounds.min;
  Eigen::Vector3d cell(extent(0) / resolution[0], extent(1) / resolution[1],
                       extent(2) / resolution[2]);
  long long intersection = 0;
  long long union_count = 0;
  for (int k = 0; k < resolution[2]; ++k) {
    for (int j = 0; j < resolution[1]; ++j) {
      for (int i = 0; i < resolution[0]; ++i) {
        Eigen::Vector3d center =
            bounds.min + cell.cwiseProduct(Eigen::Vector3d(i + 0.5, j + 0.5,
                                                           k + 0.5));
        bool a = inside_a(center);
        bool b = inside_b(center);
        intersection += (a && b) ? 1 : 0;
        union_count += (a || b) ? 1 : 0;
      }
    }
  }
  if (union_count == 0) return 1.0;  // both empty
  return static_cast<double>(intersection) / static_cast<double>(union_count);
}

}  // namespace kernelsurf
