#pragma once

namespace kernelsurf::detail {

extern const int mc_edge_table[256];
extern const int mc_tri_table[256][16];

}  // namespace kernelsurf::detail
