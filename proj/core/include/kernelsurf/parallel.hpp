#pragma once

#include <Eigen/Core>
#include <functional>

namespace kernelsurf {

// Worker count: hardware parallelism, capped by the NS_THREADS env var when
// set to a positive integer. Always >= 1.
int worker_count();

// Runs fn(begin, end) on contiguous chunks of [0, n) across workers and joins.
// Deterministic partition: results must not depend on chunk assignment.
void parallel_for(Eigen::Index n,
                  const std::function<void(Eigen::Index, Eigen::Index)>& fn);

}  // namespace kernelsurf
