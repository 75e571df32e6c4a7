#pragma once

#include <string>

#include "kernelsurf/types.hpp"

namespace kernelsurf {

// XYZ: ASCII, one "x y z nx ny nz" line per sample, '#' comments skipped.
// PLY: ASCII or binary_little_endian 1.0 with vertex properties x,y,z and
// nx,ny,nz (missing normals -> "normals required"). Normals renormalized.
// Format chosen by file extension (.ply -> PLY, anything else -> XYZ).
OrientedPointCloud load_cloud(const std::string& path);

void save_cloud_xyz(const OrientedPointCloud& cloud, const std::string& path);

// OBJ: "v x y z" lines then "f i j k" lines, 1-based indices, LF endings.
void save_mesh(const TriangleMesh& mesh, const std::string& path);

// Minimal OBJ reader for metric evaluation: v/f lines, polygons fan-
// triangulated, "i/j/k" references take the vertex index.
TriangleMesh load_mesh_obj(const std::string& path);

}  // namespace kernelsurf
