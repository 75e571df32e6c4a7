#include <gtest/gtest.h>

#include <Eigen/Core>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "kernelsurf/parallel.hpp"
#include "kernelsurf/rng.hpp"
#include "kernelsurf/types.hpp"
#include "test_support.hpp"

using namespace kernelsurf;

namespace {

OrientedPointCloud random_cloud(int n, int d, unsigned long long seed) {
  SeededRng rng(seed);
  Eigen::MatrixXd points(n, d);
  Eigen::MatrixXd normals(n, d);
  Eigen::VectorXd values(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) points(i, j) = rng.uniform(-3.0, 5.0);
    normals.row(i) = tsupport::random_unit(rng, d).transpose();
    values[i] = rng.uniform(-1.0, 1.0);
  }
  return make_cloud(points, normals, values);
}

}  // namespace

TEST(make_cloud, rejects_mismatched_shapes) {
  Eigen::MatrixXd points = Eigen::MatrixXd::Random(4, 3);
  Eigen::MatrixXd normals = Eigen::MatrixXd::Random(3, 3);
  EXPECT_THROW(make_cloud(points, normals), std::invalid_argument);

  Eigen::MatrixXd normals_bad_cols = Eigen::MatrixXd::Random(4, 2);
  EXPECT_THROW(make_cloud(points, normals_bad_cols), std::invalid_argument);

  Eigen::VectorXd values = Eigen::VectorXd::Zero(5);
  Eigen::MatrixXd normals_ok = Eigen::MatrixXd::Random(4, 3);
  EXPECT_THROW(make_cloud(points, normals_ok, values), std::invalid_argument);
}

TEST(make_cloud, rejects_non_finite_input) {
  Eigen::MatrixXd points = Eigen::MatrixXd::Random(3, 3);
  Eigen::MatrixXd normals = Eigen::MatrixXd::Random(3, 3);
  points(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(make_cloud(points, normals), std::invalid_argument);

  points(1, 2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(make_cloud(points, normals), std::invalid_argument);
}

TEST(make_cloud, zero_length_normal_is_an_error) {
  Eigen::MatrixXd points = Eigen::MatrixXd::Random(2, 3);
  Eigen::MatrixXd normals(2, 3);
  normals << 1, 0, 0, 0, 0, 0;
  try {
    make_cloud(points, normals);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("zero-length normal"),
              std::string::npos);
  }
}

TEST(make_cloud, renormalizes_normals) {
  Eigen::MatrixXd points = Eigen::MatrixXd::Zero(2, 3);
  points(1, 0) = 1.0;
  Eigen::MatrixXd normals(2, 3);
  normals << 0, 0, 2, 3, 4, 0;
  OrientedPointCloud cloud = make_cloud(points, normals);
  EXPECT_NEAR(cloud.normals(0, 2), 1.0, 1e-12);
  EXPECT_NEAR(cloud.normals(1, 0), 0.6, 1e-12);
  EXPECT_NEAR(cloud.normals(1, 1), 0.8, 1e-12);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(cloud.normals.row(i).norm(), 1.0, 1e-6);
  }
}

TEST(make_cloud, two_argument_form_zeroes_values) {
  Eigen::MatrixXd points = Eigen::MatrixXd::Random(5, 3);
  Eigen::MatrixXd normals = Eigen::MatrixXd::Ones(5, 3);
  OrientedPointCloud cloud = make_cloud(points, normals);
  EXPECT_EQ(cloud.values.size(), 5);
  EXPECT_EQ(cloud.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(normalize, single_point_maps_to_origin) {
  Eigen::MatrixXd points(1, 3);
  points << 5, 5, 5;
  Eigen::MatrixXd normals(1, 3);
  normals << 0, 1, 0;
  auto [normalized, t] = normalize(make_cloud(points, normals));
  EXPECT_NEAR(normalized.points.row(0).norm(), 0.0, 1e-12);
  EXPECT_NEAR((normalized.normals.row(0) - normals.row(0)).norm(), 0.0, 1e-12);
  EXPECT_EQ(t.scale, 1.0);
  EXPECT_NEAR((t.center - Eigen::Vector3d(5, 5, 5)).norm(), 0.0, 1e-12);
}

TEST(normalize, cube_corners_reach_exactly_the_ball_radius) {
  Eigen::MatrixXd points(8, 3);
  int row = 0;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) points.row(row++) << sx, sy, sz;
  Eigen::MatrixXd normals = Eigen::MatrixXd::Zero(8, 3);
  normals.col(0).setOnes();
  auto [normalized, t] = normalize(make_cloud(points, normals));
  double max_norm = 0.0;
  for (int i = 0; i < 8; ++i) {
    max_norm = std::max(max_norm, normalized.points.row(i).norm());
  }
  EXPECT_NEAR(max_norm, 0.7, 1e-9);
  EXPECT_LE(max_norm, 0.7 + 1e-9);
}

TEST(normalize, round_trip_recovers_world_points) {
  OrientedPointCloud cloud = random_cloud(100, 3, 11);
  auto [normalized, t] = normalize(cloud);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd back = t.to_world(normalized.points.row(i).transpose());
    EXPECT_NEAR((back - cloud.points.row(i).transpose()).norm(), 0.0, 1e-9);
  }
}

TEST(normalize, translation_changes_only_the_center) {
  OrientedPointCloud cloud = random_cloud(40, 3, 7);
  auto [na, ta] = normalize(cloud);

  OrientedPointCloud shifted = cloud;
  Eigen::RowVector3d offset(12.5, -3.0, 40.0);
  shifted.points.rowwise() += offset;
  auto [nb, tb] = normalize(shifted);

  EXPECT_NEAR((na.points - nb.points).cwiseAbs().maxCoeff(), 0.0, 1e-9);
  EXPECT_NEAR(ta.scale, tb.scale, 1e-12);
  EXPECT_NEAR((tb.center - ta.center - offset.transpose()).norm(), 0.0, 1e-9);
}

TEST(normalize, identical_points_are_a_zero_extent_error) {
  Eigen::MatrixXd points(3, 3);
  points << 1, 2, 3, 1, 2, 3, 1, 2, 3;
  Eigen::MatrixXd normals = Eigen::MatrixXd::Zero(3, 3);
  normals.col(1).setOnes();
  try {
    normalize(make_cloud(points, normals));
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("zero extent"), std::string::npos);
  }
}

TEST(normalize, preserves_normals_and_values) {
  OrientedPointCloud cloud = random_cloud(25, 3, 3);
  auto [normalized, t] = normalize(cloud);
  EXPECT_NEAR((normalized.normals - cloud.normals).cwiseAbs().maxCoeff(), 0.0,
              1e-12);
  EXPECT_NEAR((normalized.values - cloud.values).cwiseAbs().maxCoeff(), 0.0,
              1e-12);
}

TEST(denormalize_mesh, identity_transform_is_a_no_op) {
  TriangleMesh mesh;
  mesh.vertices = {{0.1, 0.2, 0.3}, {-0.5, 0.0, 0.25}, {0.0, 0.4, -0.1}};
  mesh.triangles = {{0, 1, 2}};
  TriangleMesh out = denormalize_mesh(mesh, NormalizationTransform::identity(3));
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    EXPECT_NEAR((out.vertices[i] - mesh.vertices[i]).norm(), 0.0, 1e-15);
  }
  EXPECT_EQ(out.triangles, mesh.triangles);
}

TEST(denormalize_mesh, scale_two_doubles_vertex_norms) {
  TriangleMesh mesh;
  mesh.vertices = {{0.3, -0.1, 0.2}, {0.0, 0.5, 0.0}};
  NormalizationTransform t{Eigen::Vector3d::Zero(), 2.0};
  TriangleMesh out = denormalize_mesh(mesh, t);
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    EXPECT_NEAR(out.vertices[i].norm(), 2.0 * mesh.vertices[i].norm(), 1e-12);
  }
}

TEST(denormalize_mesh, inverts_the_normalization_of_the_source_cloud) {
  OrientedPointCloud cloud = random_cloud(30, 3, 19);
  auto [normalized, t] = normalize(cloud);
  TriangleMesh mesh;
  for (int i = 0; i < 5; ++i) {
    mesh.vertices.push_back(normalized.points.row(i).transpose());
  }
  TriangleMesh world = denormalize_mesh(mesh, t);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR((world.vertices[i] - cloud.points.row(i).transpose()).norm(),
                0.0, 1e-9);
  }
}

TEST(bounding_box, padding_expands_each_side) {
  Eigen::MatrixXd points(2, 3);
  points << 0, 0, 0, 1, 2, 4;
  Bounds b = bounding_box(points, 0.1);
  EXPECT_NEAR(b.min[0], -0.1, 1e-12);
  EXPECT_NEAR(b.max[0], 1.1, 1e-12);
  EXPECT_NEAR(b.min[2], -0.4, 1e-12);
  EXPECT_NEAR(b.max[2], 4.4, 1e-12);
}

TEST(rng, same_seed_reproduces_the_stream) {
  SeededRng a(1234);
  SeededRng b(1234);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.next_u64(), b.next_u64());
  }
  SeededRng c(1234), d(1235);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    if (c.next_u64() != d.next_u64()) differs = true;
  }
  EXPECT_TRUE(differs);
}

TEST(rng, uniform_stays_in_range) {
  SeededRng rng(9);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    double v = rng.uniform(-2.0, 3.0);
    EXPECT_GE(v, -2.0);
    EXPECT_LT(v, 3.0);
  }
}

TEST(rng, normal_moments_are_plausible) {
  SeededRng rng(77);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(parallel_for, covers_every_index_exactly_once) {
  const Eigen::Index n = 1001;
  std::vector<int> hits(n, 0);
  parallel_for(n, [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index i = begin; i < end; ++i) hits[i] += 1;
  });
  for (Eigen::Index i = 0; i < n; ++i) EXPECT_EQ(hits[i], 1);
}

TEST(parallel_for, respects_the_thread_env_override) {
  setenv("NS_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3);
  setenv("NS_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1);
  unsetenv("NS_THREADS");
  EXPECT_GE(worker_count(), 1);
}
