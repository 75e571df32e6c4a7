#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "kernelsurf/solver.hpp"

namespace kernelsurf {

namespace {

// uniform grid hash with cell size = radius; neighbors within the radius are
// confined to the 3^d adjacent cells
class ExclusionIndex {
 public:
  ExclusionIndex(const Eigen::MatrixXd& points, double radius)
      : points_(points), radius_(radius), d_(static_cast<int>(points.cols())) {}

  bool has_neighbor(Eigen::Index candidate) const {
    if (radius_ <= 0.0) return false;
    std::vector<std::int64_t> cell = cell_of(candidate);
    std::vector<std::int64_t> offset(d_, -1);
    while (true) {
      std::vector<std::int64_t> probe(d_);
      for (int k = 0; k < d_; ++k) probe[k] = cell[k] + offset[k];
      auto it = cells_.find(key_of(probe));
      if (it != cells_.end()) {
        for (Eigen::Index i : it->second) {
          if ((points_.row(i) - points_.row(candidate)).norm() < radius_) {
            return true;
          }
        }
      }
      int k = 0;
      for (; k < d_; ++k) {
        if (++offset[k] <= 1) break;
        offset[k] = -1;
      }
      if (k == d_) return false;
    }
  }

  void insert(Eigen::Index i) {
    if (radius_ <= 0.0) return;
    cells_[key_of(cell_of(i))].push_back(i);
  }

 private:
  std::vector<std::int64_t> cell_of(Eigen::Index i) const {
    std::vector<std::int64_t> c(d_);
    for (int k = 0; k < d_; ++k) {
      c[k] = static_cast<std::int64_t>(std::floor(points_(i, k) / radius_));
    }
    return c;
  }

  static std::uint64_t key_of(const std::vector<std::int64_t>& cell) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::int64_t v : cell) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 0x100000001b3ull;
    }
    return h;
  }

  const Eigen::MatrixXd& points_;
  double radius_;
  int d_;
  std::unordered_map<std::uint64_t, std::vector<Eigen::Index>> cells_;
};

// greedy dart throwing in the given order
std::vector<Eigen::Index> dart_throw(const Eigen::MatrixXd& points,
                                     const std::vector<Eigen::Index>& order,
                                     double radius) {
  ExclusionIndex index(points, radius);
  std::vector<Eigen::Index> accepted;
  for (Eigen::Index i : order) {
    if (!index.has_neighbor(i)) {
      accepted.push_back(i);
      index.insert(i);
    }
  }
  return accepted;
}

std::vector<Eigen::Index> shuffled_order(Eigen::Index n, SeededRng& rng) {
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (Eigen::Index i = n - 1; i > 0; --i) {
    Eigen::Index j = static_cast<Eigen::Index>(rng.uniform_index(i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

// farthest-point padding: repeatedly add the input point with the largest
// distance to the current selection
void pad_farthest(const Eigen::MatrixXd& points,
                  std::vector<Eigen::Index>& selected, Eigen::Index target) {
  const Eigen::Index n = points.rows();
  std::vector<char> in_selection(n, 0);
  for (Eigen::Index i : selected) in_selection[i] = 1;
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index s : selected) {
      dist[i] = std::min(dist[i], (points.row(i) - points.row(s)).norm());
    }
  }
  while (static_cast<Eigen::Index>(selected.size()) < target) {
    Eigen::Index best = -1;
    double best_dist = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!in_selection[i] && dist[i] > best_dist) {
        best_dist = dist[i];
        best = i;
      }
    }
    selected.push_back(best);
    in_selection[best] = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], (points.row(i) - points.row(best)).norm());
    }
  }
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& points,
                            const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), points.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = points.row(rows[i]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd select_nystrom_centers(const OrientedPointCloud& cloud,
                                       const NystromSpec& target,
                                       SeededRng& rng) {
  const Eigen::Index s = cloud.size();
  const Eigen::MatrixXd& points = cloud.points;

  if (target.mode == NystromSpec::Mode::all_points) {
    return points;
  }

  if (target.mode == NystromSpec::Mode::radius) {
    if (!(target.radius > 0.0)) {
      throw std::invalid_argument("exclusion radius must be positive");
    }
    return gather_rows(points,
                       dart_throw(points, shuffled_order(s, rng), target.radius));
  }

  const Eigen::Index m = target.count;
  if (m < 1) {
    throw std::invalid_argument("center count must be >= 1");
  }
  if (m > s) {
    throw std::invalid_argument("unreachable center count: M > sample count");
  }
  if (m == s) {
    // radius -> 0 branch
    return points;
  }

  std::vector<Eigen::Index> order = shuffled_order(s, rng);
  Bounds box = bounding_box(points);
  double lo = 0.0;
  double hi = (box.max - box.min).norm();
  if (hi <= 0.0) hi = 1.0;

  std::vector<Eigen::Index> best;
  Eigen::Index best_gap = std::numeric_limits<Eigen::Index>::max();
  for (int iter = 0; iter < 60; ++iter) {
    double mid = 0.5 * (lo + hi);
    std::vector<Eigen::Index> accepted = dart_throw(points, order, mid);
    Eigen::Index count = static_cast<Eigen::Index>(accepted.size());
    Eigen::Index gap = std::abs(count - m);
    if (gap < best_gap) {
      best_gap = gap;
      best = std::move(accepted);
    }
    if (10 * gap <= m) break;  // within 10% of the target
    if (count > m) {
      lo = mid;  // too many accepted: grow the radius
    } else {
      hi = mid;
    }
  }

  if (static_cast<Eigen::Index>(best.size()) > m) {
    best.resize(m);  // truncate in acceptance order
  } else if (static_cast<Eigen::Index>(best.size()) < m) {
    pad_farthest(points, best, m);
  }
  return gather_rows(points, best);
}

}  // namespace kernelsurf
