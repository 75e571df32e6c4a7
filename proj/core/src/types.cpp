#include "kernelsurf/types.hpp"

#include <stdexcept>

namespace kernelsurf {

namespace {

void validate_cloud(const OrientedPointCloud& cloud) {
  if (cloud.points.rows() < 1) {
    throw std::invalid_argument("cloud must contain at least one sample");
  }
  if (cloud.normals.rows() != cloud.points.rows() ||
      cloud.normals.cols() != cloud.points.cols() ||
      cloud.values.size() != cloud.points.rows()) {
    throw std::invalid_argument("points/normals/values sizes disagree");
  }
  if (!cloud.points.allFinite() || !cloud.normals.allFinite() ||
      !cloud.values.allFinite()) {
    throw std::invalid_argument("non-finite coordinate in cloud");
  }
}

}  // namespace

OrientedPointCloud make_cloud(Eigen::MatrixXd points, Eigen::MatrixXd normals,
                              Eigen::VectorXd values) {
  OrientedPointCloud cloud{std::move(points), std::move(normals),
                           std::move(values)};
  validate_cloud(cloud);
  for (Eigen::Index i = 0; i < cloud.normals.rows(); ++i) {
    double len = cloud.normals.row(i).norm();
    if (len <= 0.0) {
      throw std::invalid_argument("zero-length normal at sample " +
                                  std::to_string(i));
    }
    cloud.normals.row(i) /= len;
  }
  return cloud;
}

OrientedPointCloud make_cloud(Eigen::MatrixXd points, Eigen::MatrixXd normals) {
  Eigen::VectorXd values = Eigen::VectorXd::Zero(points.rows());
  return make_cloud(std::move(points), std::move(normals), std::move(values));
}

NormalizationTransform NormalizationTransform::identity(int dimension) {
  return {Eigen::VectorXd::Zero(dimension), 1.0};
}

std::pair<OrientedPointCloud, NormalizationTransform> normalize(
    const OrientedPointCloud& cloud) {
  validate_cloud(cloud);
  Eigen::VectorXd lo = cloud.points.colwise().minCoeff();
  Eigen::VectorXd hi = cloud.points.colwise().maxCoeff();
  Eigen::VectorXd center = 0.5 * (lo + hi);
  double half_extent = (0.5 * (hi - lo)).norm();

  double scale = 1.0;
  if (half_extent > 0.0) {
    scale = half_extent / 0.7;
  } else if (cloud.size() > 1) {
    throw std::invalid_argument("zero extent: all points identical");
  }

  NormalizationTransform t{center, scale};
  OrientedPointCloud out = cloud;
  out.points = (cloud.points.rowwise() - center.transpose()) / scale;
  return {std::move(out), std::move(t)};
}

TriangleMesh denormalize_mesh(const TriangleMesh& mesh,
                              const NormalizationTransform& t) {
  if (t.center.size() != 3) {
    throw std::invalid_argument("mesh denormalization needs a 3D transform");
  }
  TriangleMesh out = mesh;
  Eigen::Vector3d center = t.center;
  for (auto& v : out.vertices) {
    v = v * t.scale + center;
  }
  return out;
}

Bounds bounding_box(const Eigen::MatrixXd& points, double padding) {
  if (points.rows() < 1) {
    throw std::invalid_argument("bounding box of an empty point set");
  }
  Bounds b;
  b.min = points.colwise().minCoeff();
  b.max = points.colwise().maxCoeff();
  Eigen::VectorXd pad = (b.max - b.min) * padding;
  b.min -= pad;
  b.max += pad;
  return b;
}

}  // namespace kernelsurf
