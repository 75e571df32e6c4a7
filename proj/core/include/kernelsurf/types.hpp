#pragma once

#include <Eigen/Core>
#include <array>
#include <utility>
#include <vector>

namespace kernelsurf {

// Oriented samples: one point per row, matching unit normal per row, and a
// scalar constraint value per sample (0 for on-surface samples).
struct OrientedPointCloud {
  Eigen::MatrixXd points;   // s x d
  Eigen::MatrixXd normals;  // s x d, unit rows
  Eigen::VectorXd values;   // s

  Eigen::Index size() const { return points.rows(); }
  int dimension() const { return static_cast<int>(points.cols()); }
};

// Validates shapes/finiteness and renormalizes normals. Zero-length normals
// are an error. The two-argument form sets all values to 0.
OrientedPointCloud make_cloud(Eigen::MatrixXd points, Eigen::MatrixXd normals);
OrientedPointCloud make_cloud(Eigen::MatrixXd points, Eigen::MatrixXd normals,
                              Eigen::VectorXd values);

// p_normalized = (p - center) / scale, p_world = p * scale + center. scale > 0.
struct NormalizationTransform {
  Eigen::VectorXd center;
  double scale = 1.0;

  Eigen::VectorXd to_normalized(const Eigen::VectorXd& p) const {
    return (p - center) / scale;
  }
  Eigen::VectorXd to_world(const Eigen::VectorXd& p) const {
    return p * scale + center;
  }

  static NormalizationTransform identity(int dimension);
};

// Maps the cloud's bounding box into the closed origin ball of radius 0.7:
// center = box center, scale = |half-extent| / 0.7. A single-point cloud maps
// to the origin with scale 1; multiple identical points are a "zero extent"
// error.
std::pair<OrientedPointCloud, NormalizationTransform> normalize(
    const OrientedPointCloud& cloud);

struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;

  bool empty() const { return vertices.empty() && triangles.empty(); }
};

// Applies t^-1 to every vertex; connectivity unchanged.
TriangleMesh denormalize_mesh(const TriangleMesh& mesh,
                              const NormalizationTransform& t);

struct Bounds {
  Eigen::VectorXd min;
  Eigen::VectorXd max;
};

// Axis-aligned bounding box of the points, expanded by the given fraction of
// each side's length on both ends.
Bounds bounding_box(const Eigen::MatrixXd& points, double padding = 0.0);

}  // namespace kernelsurf
