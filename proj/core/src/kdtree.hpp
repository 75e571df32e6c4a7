#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace kernelsurf::detail {

// static median-split kd-tree over 3D points; exact nearest neighbor
class KdTree3 {
 public:
  explicit KdTree3(const std::vector<Eigen::Vector3d>& points)
      : points_(points) {
    std::vector<int> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    nodes_.reserve(points.size());
    root_ = build(order, 0, static_cast<int>(order.size()), 0);
  }

  // squared distance and point index of the nearest neighbor
  std::pair<double, int> nearest(const Eigen::Vector3d& q) const {
    double best = std::numeric_limits<double>::infinity();
    int best_index = -1;
    search(root_, q, best, best_index);
    return {best, best_index};
  }

 private:
  struct Node {
    int point;
    int left;
    int right;
    int axis;
  };

  int build(std::vector<int>& order, int begin, int end, int depth) {
    if (begin >= end) return -1;
    int axis = depth % 3;
    int mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid,
                     order.begin() + end, [&](int a, int b) {
                       return points_[a](axis) < points_[b](axis);
                     });
    int node = static_cast<int>(nodes_.size());
    nodes_.push_back({order[mid], -1, -1, axis});
    int left = build(order, begin, mid, depth + 1);
    int right = build(order, mid + 1, end, depth + 1);
    nodes_[node].left = left;
    nodes_[node].right = right;
    return node;
  }

  void search(int node, const Eigen::Vector3d& q, double& best,
              int& best_index) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    double dist2 = (points_[n.point] - q).squaredNorm();
    if (dist2 < best) {
      best = dist2;
      best_index = n.point;
    }
    double delta = q(n.axis) - points_[n.point](n.axis);
    int near = delta < 0.0 ? n.left : n.right;
    int far = delta < 0.0 ? n.right : n.left;
    search(near, q, best, best_index);
    if (delta * delta < best) {
      search(far, q, best, best_index);
    }
  }

  const std::vector<Eigen::Vector3d>& points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace kernelsurf::detail
