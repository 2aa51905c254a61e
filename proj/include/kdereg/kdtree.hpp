#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "kdereg/rigid_transform.hpp"

namespace kdereg {

/// Static kd-tree over 3D points. Built once, queried many times.
/// Nearest-neighbor ties resolve to the lowest point index so that queries
/// are reproducible regardless of build layout.
class KdTree3 {
 public:
  KdTree3() = default;

  explicit KdTree3(std::vector<Point3> points) : pts_(std::move(points)) {
    order_.resize(pts_.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!pts_.empty()) root_ = build(0, static_cast<int>(pts_.size()));
  }

  std::size_t size() const { return pts_.size(); }
  const Point3& point(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  /// Index of the closest point, -1 on an empty tree.
  int nearest(const Point3& query) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    if (root_ >= 0) search_nearest(root_, query, best, best_d2);
    return best;
  }

  /// Number of points with squared distance <= radius^2, optionally skipping
  /// one index (the query point itself).
  int radius_count(const Point3& query, double radius, int exclude = -1) const {
    int count = 0;
    if (root_ >= 0) search_radius(root_, query, radius * radius, exclude, count);
    return count;
  }

  /// Distances to the k nearest points, excluding `exclude`. Returns fewer
  /// than k entries when the tree is smaller. Unsorted.
  std::vector<double> knn_distances(const Point3& query, int k, int exclude = -1) const {
    std::priority_queue<double> heap;  // max-heap of squared distances
    if (root_ >= 0 && k > 0) search_knn(root_, query, k, exclude, heap);
    std::vector<double> out;
    out.reserve(heap.size());
    while (!heap.empty()) {
      out.push_back(std::sqrt(heap.top()));
      heap.pop();
    }
    return out;
  }

 private:
  struct Node {
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order_
  };
  static constexpr int kLeafSize = 16;

  int build(int begin, int end) {
    Node node;
    if (end - begin <= kLeafSize) {
      node.begin = begin;
      node.end = end;
      // stable leaf ordering keeps scans deterministic
      std::sort(order_.begin() + begin, order_.begin() + end);
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size()) - 1;
    }
    Point3 lo = pts_[static_cast<std::size_t>(order_[static_cast<std::size_t>(begin)])];
    Point3 hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      const Point3& p = pts_[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)])];
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                       const double ca = pts_[static_cast<std::size_t>(a)][axis];
                       const double cb = pts_[static_cast<std::size_t>(b)][axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    node.axis = axis;
    node.split = pts_[static_cast<std::size_t>(order_[static_cast<std::size_t>(mid)])][axis];
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(self)].left = left;
    nodes_[static_cast<std::size_t>(self)].right = right;
    return self;
  }

  void search_nearest(int ni, const Point3& q, int& best, double& best_d2) const {
    const Node& n = nodes_[static_cast<std::size_t>(ni)];
    if (n.axis < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int idx = order_[static_cast<std::size_t>(i)];
        const double d2 = (pts_[static_cast<std::size_t>(idx)] - q).squaredNorm();
        if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
          best_d2 = d2;
          best = idx;
        }
      }
      return;
    }
    const double delta = q[n.axis] - n.split;
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    search_nearest(near, q, best, best_d2);
    if (delta * delta <= best_d2) search_nearest(far, q, best, best_d2);
  }

  void search_radius(int ni, const Point3& q, double r2, int exclude, int& count) const {
    const Node& n = nodes_[static_cast<std::size_t>(ni)];
    if (n.axis < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int idx = order_[static_cast<std::size_t>(i)];
        if (idx == exclude) continue;
        if ((pts_[static_cast<std::size_t>(idx)] - q).squaredNorm() <= r2) ++count;
      }
      return;
    }
    const double delta = q[n.axis] - n.split;
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    search_radius(near, q, r2, exclude, count);
    if (delta * delta <= r2) search_radius(far, q, r2, exclude, count);
  }

  void search_knn(int ni, const Point3& q, int k, int exclude,
                  std::priority_queue<double>& heap) const {
    const Node& n = nodes_[static_cast<std::size_t>(ni)];
    if (n.axis < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int idx = order_[static_cast<std::size_t>(i)];
        if (idx == exclude) continue;
        const double d2 = (pts_[static_cast<std::size_t>(idx)] - q).squaredNorm();
        if (static_cast<int>(heap.size()) < k) {
          heap.push(d2);
        } else if (d2 < heap.top()) {
          heap.pop();
          heap.push(d2);
        }
      }
      return;
    }
    const double delta = q[n.axis] - n.split;
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    search_knn(near, q, k, exclude, heap);
    if (static_cast<int>(heap.size()) < k || delta * delta <= heap.top()) {
      search_knn(far, q, k, exclude, heap);
    }
  }

  std::vector<Point3> pts_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace kdereg
