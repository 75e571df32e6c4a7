#include "kernelsurf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace kernelsurf {

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("NS_THREADS")) {
    try {
      int cap = std::stoi(env);
      // env wins even above hardware_concurrency so results can be checked
      // for thread-count invariance on small machines
      if (cap >= 1) hw = cap;
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return hw;
}

void parallel_for(Eigen::Index n,
                  const std::function<void(Eigen::Index, Eigen::Index)>& fn) {
  if (n <= 0) return;
  int workers = std::min<Eigen::Index>(worker_count(), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  Eigen::Index chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    Eigen::Index begin = w * chunk;
    Eigen::Index end = std::min(begin + chunk, n);
    if (begin >= end) break;
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace kernelsurf
