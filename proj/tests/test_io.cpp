#include <gtest/gtest.h>

#include <Eigen/Core>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kernelsurf/io.hpp"
#include "kernelsurf/rng.hpp"
#include "kernelsurf/types.hpp"
#include "test_support.hpp"

using namespace kernelsurf;

namespace {

class temp_dir {
 public:
  temp_dir() {
    root_ = std::filesystem::temp_directory_path() /
            ("kernelsurf_io_" + std::to_string(counter_++));
    std::filesystem::create_directories(root_);
  }
  ~temp_dir() { std::filesystem::remove_all(root_); }
  std::string path(const std::string& name) const {
    return (root_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  std::filesystem::path root_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OrientedPointCloud random_cloud(int n, SeededRng& rng) {
  Eigen::MatrixXd points(n, 3);
  Eigen::MatrixXd normals(n, 3);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) points(i, j) = rng.uniform(-2.0, 2.0);
    normals.row(i) = kernelsurf::tsupport::random_unit(rng, 3).transpose();
  }
  return make_cloud(points, normals, values);
}

}  // namespace

TEST(io_xyz, loads_samples_and_skips_comments) {
  temp_dir dir;
  std::string path = dir.path("cloud.xyz");
  write_text(path,
             "# oriented samples\n"
             "0.5 0 0  1 0 0\n"
             "\n"
             "0 0.5 0  0 2 0\n");
  OrientedPointCloud cloud = load_cloud(path);
  ASSERT_EQ(cloud.size(), 2);
  EXPECT_NEAR(cloud.points(0, 0), 0.5, 1e-12);
  // normals come back unit length
  EXPECT_NEAR(cloud.normals(1, 1), 1.0, 1e-12);
}

TEST(io_xyz, wrong_field_count_names_the_line) {
  temp_dir dir;
  std::string path = dir.path("bad.xyz");
  write_text(path,
             "0 0 0 1 0 0\n"
             "0 1 0 1 0 0\n"
             "1 2 3 4 5\n");
  try {
    load_cloud(path);
    FAIL() << "expected a parse error";
  } catch (const std::runtime_error& e) {
    std::string what = e.what();
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    EXPECT_NE(what.find("x y z nx ny nz"), std::string::npos) << what;
  }
}

TEST(io_xyz, missing_file_is_an_error) {
  EXPECT_THROW(load_cloud("/nonexistent/path/cloud.xyz"), std::runtime_error);
}

TEST(io_xyz, file_without_samples_is_an_error) {
  temp_dir dir;
  std::string path = dir.path("empty.xyz");
  write_text(path, "# only a comment\n");
  EXPECT_THROW(load_cloud(path), std::runtime_error);
}

TEST(io_xyz, zero_normal_is_an_error) {
  temp_dir dir;
  std::string path = dir.path("zero_normal.xyz");
  write_text(path, "0 0 0 0 0 0\n");
  EXPECT_THROW(load_cloud(path), std::exception);
}

TEST(io_xyz, round_trip_preserves_the_cloud) {
  temp_dir dir;
  SeededRng rng(31);
  OrientedPointCloud cloud = random_cloud(40, rng);
  std::string path = dir.path("round.xyz");
  save_cloud_xyz(cloud, path);
  OrientedPointCloud back = load_cloud(path);
  ASSERT_EQ(back.size(), cloud.size());
  EXPECT_LT((back.points - cloud.points).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((back.normals - cloud.normals).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(io_ply, reads_ascii_with_extra_properties) {
  temp_dir dir;
  std::string path = dir.path("cloud.ply");
  write_text(path,
             "ply\n"
             "format ascii 1.0\n"
             "comment made by hand\n"
             "element vertex 2\n"
             "property float x\n"
             "property float y\n"
             "property float z\n"
             "property float confidence\n"
             "property float nx\n"
             "property float ny\n"
             "property float nz\n"
             "end_header\n"
             "0.5 0 0 0.9 2 0 0\n"
             "0 0 0.25 0.1 0 0 -1\n");
  OrientedPointCloud cloud = load_cloud(path);
  ASSERT_EQ(cloud.size(), 2);
  EXPECT_NEAR(cloud.points(0, 0), 0.5, 1e-6);
  EXPECT_NEAR(cloud.points(1, 2), 0.25, 1e-6);
  EXPECT_NEAR(cloud.normals(0, 0), 1.0, 1e-6);  // renormalized from (2,0,0)
  EXPECT_NEAR(cloud.normals(1, 2), -1.0, 1e-6);
}

TEST(io_ply, reads_binary_little_endian) {
  temp_dir dir;
  std::string path = dir.path("cloud_bin.ply");
  {
    std::ofstream out(path, std::ios::binary);
    out << "ply\n"
           "format binary_little_endian 1.0\n"
           "element vertex 2\n"
           "property float x\n"
           "property float y\n"
           "property float z\n"
           "property float nx\n"
           "property float ny\n"
           "property float nz\n"
           "end_header\n";
    const float rows[2][6] = {{0.5f, 0.0f, 0.0f, 1.0f, 0.0f, 0.0f},
                              {0.0f, 0.25f, 0.0f, 0.0f, 1.0f, 0.0f}};
    out.write(reinterpret_cast<const char*>(rows), sizeof(rows));
  }
  OrientedPointCloud cloud = load_cloud(path);
  ASSERT_EQ(cloud.size(), 2);
  EXPECT_NEAR(cloud.points(0, 0), 0.5, 1e-6);
  EXPECT_NEAR(cloud.points(1, 1), 0.25, 1e-6);
  EXPECT_NEAR(cloud.normals(1, 1), 1.0, 1e-6);
}

TEST(io_ply, reads_double_properties_exactly) {
  temp_dir dir;
  std::string path = dir.path("cloud_double.ply");
  {
    std::ofstream out(path, std::ios::binary);
    out << "ply\n"
           "format binary_little_endian 1.0\n"
           "element vertex 1\n"
           "property double x\n"
           "property double y\n"
           "property double z\n"
           "property double nx\n"
           "property double ny\n"
           "property double nz\n"
           "end_header\n";
    const double row[6] = {0.123456789012345, -1.5, 2.25, 0.0, 0.0, 1.0};
    out.write(reinterpret_cast<const char*>(row), sizeof(row));
  }
  OrientedPointCloud cloud = load_cloud(path);
  ASSERT_EQ(cloud.size(), 1);
  EXPECT_EQ(cloud.points(0, 0), 0.123456789012345);
}

TEST(io_ply, missing_normals_are_an_error) {
  temp_dir dir;
  std::string path = dir.path("no_normals.ply");
  write_text(path,
             "ply\n"
             "format ascii 1.0\n"
             "element vertex 1\n"
             "property float x\n"
             "property float y\n"
             "property float z\n"
             "end_header\n"
             "0 0 0\n");
  try {
    load_cloud(path);
    FAIL() << "expected a format error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("normals required"),
              std::string::npos);
  }
}

TEST(io_ply, rejects_malformed_headers) {
  temp_dir dir;
  std::string path = dir.path("bad_header.ply");
  write_text(path, "ply\nformat big_endian 1.0\nend_header\n");
  EXPECT_THROW(load_cloud(path), std::runtime_error);

  std::string not_ply = dir.path("not_a.ply");
  write_text(not_ply, "solid nope\n");
  EXPECT_THROW(load_cloud(not_ply), std::runtime_error);
}

TEST(io_obj, empty_mesh_writes_an_empty_file) {
  temp_dir dir;
  TriangleMesh mesh;
  std::string path = dir.path("empty.obj");
  save_mesh(mesh, path);
  EXPECT_EQ(read_bytes(path), "");
}

TEST(io_obj, single_triangle_layout) {
  temp_dir dir;
  TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  mesh.triangles = {{0, 1, 2}};
  std::string path = dir.path("tri.obj");
  save_mesh(mesh, path);
  std::string text = read_bytes(path);
  EXPECT_EQ(text,
            "v 0 0 0\n"
            "v 1 0 0\n"
            "v 0 1 0\n"
            "f 1 2 3\n");
}

TEST(io_obj, round_trip_preserves_the_mesh) {
  temp_dir dir;
  TriangleMesh mesh;
  SeededRng rng(17);
  for (int i = 0; i < 30; ++i) {
    mesh.vertices.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                               rng.uniform(-1.0, 1.0));
  }
  for (int i = 0; i + 2 < 30; i += 3) {
    mesh.triangles.push_back({i, i + 1, i + 2});
  }
  std::string path = dir.path("round.obj");
  save_mesh(mesh, path);
  TriangleMesh back = load_mesh_obj(path);
  ASSERT_EQ(back.vertices.size(), mesh.vertices.size());
  ASSERT_EQ(back.triangles, mesh.triangles);
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    EXPECT_LT((back.vertices[i] - mesh.vertices[i]).norm(), 1e-6);
  }
}

TEST(io_obj, reads_slash_indices_and_fans_polygons) {
  temp_dir dir;
  std::string path = dir.path("fan.obj");
  write_text(path,
             "o quad\n"
             "v 0 0 0\n"
             "v 1 0 0\n"
             "v 1 1 0\n"
             "v 0 1 0\n"
             "vn 0 0 1\n"
             "f 1/1/1 2/2/1 3/3/1 4/4/1\n");
  TriangleMesh mesh = load_mesh_obj(path);
  ASSERT_EQ(mesh.vertices.size(), 4u);
  ASSERT_EQ(mesh.triangles.size(), 2u);
  EXPECT_EQ(mesh.triangles[0], (std::array<int, 3>{0, 1, 2}));
  EXPECT_EQ(mesh.triangles[1], (std::array<int, 3>{0, 2, 3}));
}

TEST(io_obj, supports_negative_relative_indices) {
  temp_dir dir;
  std::string path = dir.path("negative.obj");
  write_text(path,
             "v 0 0 0\n"
             "v 1 0 0\n"
             "v 0 1 0\n"
             "f -3 -2 -1\n");
  TriangleMesh mesh = load_mesh_obj(path);
  ASSERT_EQ(mesh.triangles.size(), 1u);
  EXPECT_EQ(mesh.triangles[0], (std::array<int, 3>{0, 1, 2}));
}

TEST(io_obj, rejects_out_of_range_indices) {
  temp_dir dir;
  std::string path = dir.path("oob.obj");
  write_text(path,
             "v 0 0 0\n"
             "v 1 0 0\n"
             "f 1 2 9\n");
  EXPECT_THROW(load_mesh_obj(path), std::runtime_error);
}
