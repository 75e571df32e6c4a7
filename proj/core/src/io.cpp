#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernelsurf/io.hpp"

namespace kernelsurf {

namespace {

std::string lowercase_extension(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

[[noreturn]] void fail_line(const std::string& path, long line,
                            const std::string& what) {
  fail(path, "line " + std::to_string(line) + ": " + what);
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

OrientedPointCloud load_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::vector<double> rows;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (blank_or_comment(line)) continue;
    std::istringstream fields(line);
    double v[6];
    int got = 0;
    while (got < 6 && (fields >> v[got])) ++got;
    std::string trailing;
    if (got < 6 || (fields >> trailing)) {
      fail_line(path, line_number, "expected 6 numeric fields \"x y z nx ny nz\"");
    }
    rows.insert(rows.end(), v, v + 6);
  }
  Eigen::Index s = static_cast<Eigen::Index>(rows.size() / 6);
  if (s == 0) fail(path, "no samples found");
  Eigen::MatrixXd points(s, 3), normals(s, 3);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (int c = 0; c < 3; ++c) {
      points(i, c) = rows[6 * i + c];
      normals(i, c) = rows[6 * i + 3 + c];
    }
  }
  try {
    return make_cloud(points, normals);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

struct PlyProperty {
  std::string name;
  int byte_size = 0;  // 0 marks a list property
  bool is_double = false;
};

struct PlyElement {
  std::string name;
  long count = 0;
  std::vector<PlyProperty> properties;
};

int scalar_size(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8")
    return 1;
  if (type == "short" || type == "ushort" || type == "int16" ||
      type == "uint16")
    return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
      type == "float" || type == "float32")
    return 4;
  if (type == "double" || type == "float64") return 8;
  return -1;
}

double decode_scalar(const unsigned char* bytes, const PlyProperty& p) {
  if (p.is_double) {
    double d;
    std::memcpy(&d, bytes, 8);
    return d;
  }
  if (p.byte_size == 4) {
    float f;
    std::memcpy(&f, bytes, 4);
    return static_cast<double>(f);
  }
  // small integer types are irrelevant for coordinates; decode anyway
  std::int64_t v = 0;
  std::memcpy(&v, bytes, p.byte_size);
  return static_cast<double>(v);
}

OrientedPointCloud load_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply") {
    fail(path, "not a PLY file (missing magic)");
  }
  bool binary = false;
  std::vector<PlyElement> elements;
  bool saw_format = false;
  for (;;) {
    if (!std::getline(in, line)) fail(path, "unexpected end of PLY header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string keyword;
    fields >> keyword;
    if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) {
      continue;
    }
    if (keyword == "format") {
      std::string kind, version;
      fields >> kind >> version;
      if (kind == "ascii") {
        binary = false;
      } else if (kind == "binary_little_endian") {
        binary = true;
      } else {
        fail(path, "unsupported PLY format \"" + kind + "\"");
      }
      saw_format = true;
    } else if (keyword == "element") {
      PlyElement element;
      fields >> element.name >> element.count;
      elements.push_back(element);
    } else if (keyword == "property") {
      if (elements.empty()) fail(path, "property before any element");
      std::string type;
      fields >> type;
      PlyProperty property;
      if (type == "list") {
        std::string count_type, value_type;
        fields >> count_type >> value_type >> property.name;
        property.byte_size = 0;
      } else {
        fields >> property.name;
        int size = scalar_size(type);
        if (size < 0) fail(path, "unknown PLY type \"" + type + "\"");
        property.byte_size = size;
        property.is_double = (size == 8 && (type == "double" || type == "float64"));
      }
      elements.back().properties.push_back(property);
    } else if (keyword == "end_header") {
      break;
    } else {
      fail(path, "unrecognized PLY header line \"" + line + "\"");
    }
  }
  if (!saw_format) fail(path, "PLY header has no format line");

  const char* wanted[6] = {"x", "y", "z", "nx", "ny", "nz"};
  Eigen::MatrixXd points, normals;
  bool got_vertices = false;
  for (const PlyElement& element : elements) {
    if (element.name != "vertex") {
      // skip a foreign element; impossible for binary list data
      if (binary) {
        long row_bytes = 0;
        for (const PlyProperty& p : element.properties) {
          if (p.byte_size == 0) {
            fail(path, "cannot skip binary list element \"" + element.name +
                           "\" preceding vertex data");
          }
          row_bytes += p.byte_size;
        }
        in.seekg(static_cast<std::streamoff>(row_bytes) * element.count,
                 std::ios::cur);
      } else {
        for (long i = 0; i < element.count; ++i) {
          if (!std::getline(in, line)) fail(path, "unexpected end of PLY data");
        }
      }
      continue;
    }

    int column[6];
    for (int w = 0; w < 6; ++w) {
      column[w] = -1;
      for (std::size_t p = 0; p < element.properties.size(); ++p) {
        if (element.properties[p].name == wanted[w]) {
          column[w] = static_cast<int>(p);
        }
      }
    }
    for (int w = 0; w < 3; ++w) {
      if (column[w] < 0) fail(path, "vertex element lacks x/y/z properties");
    }
    if (column[3] < 0 || column[4] < 0 || column[5] < 0) {
      fail(path, "normals required");
    }
    if (element.count <= 0) fail(path, "vertex element is empty");

    points.resize(element.count, 3);
    normals.resize(element.count, 3);
    if (binary) {
      long row_bytes = 0;
      std::vector<long> offsets;
      for (const PlyProperty& p : element.properties) {
        if (p.byte_size == 0) {
          fail(path, "unsupported list property in vertex element");
        }
        offsets.push_back(row_bytes);
        row_bytes += p.byte_size;
      }
      std::vector<unsigned char> row(row_bytes);
      for (long i = 0; i < element.count; ++i) {
        in.read(reinterpret_cast<char*>(row.data()), row_bytes);
        if (!in) fail(path, "unexpected end of PLY vertex data");
        for (int w = 0; w < 6; ++w) {
          const PlyProperty& p = element.properties[column[w]];
          double value = decode_scalar(row.data() + offsets[column[w]], p);
          if (w < 3) {
            points(i, w) = value;
          } else {
            normals(i, w - 3) = value;
          }
        }
      }
    } else {
      for (long i = 0; i < element.count; ++i) {
        if (!std::getline(in, line)) fail(path, "unexpected end of PLY data");
        std::istringstream fields(line);
        std::vector<double> values(element.properties.size());
        for (std::size_t p = 0; p < element.properties.size(); ++p) {
          if (!(fields >> values[p])) {
            fail(path, "malformed PLY vertex row " + std::to_string(i + 1));
          }
        }
        for (int w = 0; w < 3; ++w) points(i, w) = values[column[w]];
        for (int w = 3; w < 6; ++w) normals(i, w - 3) = values[column[w]];
      }
    }
    got_vertices = true;
    break;  // faces and later elements are irrelevant for a point cloud
  }
  if (!got_vertices) fail(path, "PLY file has no vertex element");
  try {
    return make_cloud(points, normals);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

}  // namespace

OrientedPointCloud load_cloud(const std::string& path) {
  if (lowercase_extension(path) == "ply") return load_ply(path);
  return load_xyz(path);
}

void save_cloud_xyz(const OrientedPointCloud& cloud, const std::string& path) {
  if (cloud.dimension() != 3) {
    throw std::invalid_argument("XYZ output requires a 3D cloud");
  }
  std::ofstream out(path, std::ios::binary);  // binary: force LF endings
  if (!out) fail(path, "cannot open file for writing");
  char buffer[256];
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.9g %.9g %.9g %.9g %.9g %.9g\n",
                  cloud.points(i, 0), cloud.points(i, 1), cloud.points(i, 2),
                  cloud.normals(i, 0), cloud.normals(i, 1),
                  cloud.normals(i, 2));
    out << buffer;
  }
  if (!out) fail(path, "write failure");
}

void save_mesh(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  char buffer[160];
  for (const Eigen::Vector3d& v : mesh.vertices) {
    std::snprintf(buffer, sizeof(buffer), "v %.9g %.9g %.9g\n", v(0), v(1),
                  v(2));
    out << buffer;
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  if (!out) fail(path, "write failure");
}

TriangleMesh load_mesh_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  TriangleMesh mesh;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag)) continue;
    if (tag == "v") {
      Eigen::Vector3d v;
      if (!(fields >> v(0) >> v(1) >> v(2))) {
        fail_line(path, line_number, "malformed vertex");
      }
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> indices;
      std::string token;
      while (fields >> token) {
        // token may be "i", "i/j", or "i//k"; the vertex index leads
        int index = 0;
        try {
          index = std::stoi(token.substr(0, token.find('/')));
        } catch (const std::exception&) {
          fail_line(path, line_number, "malformed face index \"" + token + "\"");
        }
        if (index < 0) {
          index = static_cast<int>(mesh.vertices.size()) + index + 1;
        }
        if (index < 1 || index > static_cast<int>(mesh.vertices.size())) {
          fail_line(path, line_number, "face index out of range");
        }
        indices.push_back(index - 1);
      }
      if (indices.size() < 3) {
        fail_line(path, line_number, "face needs at least 3 vertices");
      }
      for (std::size_t k = 1; k + 1 < indices.size(); ++k) {
        mesh.triangles.push_back({indices[0], indices[k], indices[k + 1]});
      }
    }
    // all other tags (vn, vt, g, o, s, usemtl, mtllib, #) are ignored
  }
  return mesh;
}

}  // namespace kernelsurf
