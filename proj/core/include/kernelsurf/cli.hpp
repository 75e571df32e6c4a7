#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "kernelsurf/solver.hpp"

namespace kernelsurf {

// Exit codes shared by all commands.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage_error = 1;
inline constexpr int exit_numerical_error = 2;

struct ReconstructRequest {
  std::string input_path;
  std::string output_path;
  KernelFamily kernel = KernelFamily::gaussian;
  double lambda = 0.0;
  NystromSpec nystrom;
  int grid_resolution = 128;
  std::uint64_t seed = 0;
  double support_k = 1.0;  // uniform kernel bias bound
};

// normalize -> (optional) select centers -> assemble -> solve -> grid ->
// marching cubes -> denormalize -> save. Prints sample/center counts, lambda,
// residual norms, the RKHS norm and wall time to `log`.
int cmd_reconstruct(const ReconstructRequest& request, std::ostream& log);

struct MetricsRequest {
  std::string mesh_a_path;
  std::string mesh_b_path;
  Eigen::Index samples = 100000;
  std::uint64_t seed = 0;
  bool normalize = true;  // joint unit-cube normalization before sampling
};

// Prints two-sided and both one-sided Chamfer and Hausdorff as a fixed-field
// table.
int cmd_metrics(const MetricsRequest& request, std::ostream& log);

// Kernel invariant suite at reduced sample counts; prints one pass/fail line
// per named check. inject_fault corrupts one Gaussian kernel entry to prove
// the checks can fail.
int cmd_selftest(std::uint64_t seed, bool inject_fault, std::ostream& log);

}  // namespace kernelsurf
