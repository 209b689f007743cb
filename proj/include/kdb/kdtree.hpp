#pragma once

#include <algorithm>
#include <cstddef>
#include <queue>
#include <vector>

namespace kdb {

// Static k-d tree over fixed-dimension real points, built once, queried for
// k nearest neighbours. Points are stored flat, row-major.
class KdTree {
 public:
  KdTree(std::vector<double> flat, std::size_t dim)
      : pts_(std::move(flat)), dim_(dim), count_(dim ? pts_.size() / dim : 0) {
    idx_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) idx_[i] = i;
    if (count_ > 0) build(0, count_, 0);
  }

  std::size_t size() const { return count_; }

  // indices of the k nearest points to q, nearest first; q itself may be a
  // tree point (it is then returned)
  std::vector<std::size_t> knn(const double* q, std::size_t k) const {
    Heap heap;
    if (count_ > 0) search(0, count_, 0, q, k, heap);
    std::vector<std::pair<double, std::size_t>> hits;
    hits.reserve(heap.size());
    while (!heap.empty()) {
      hits.push_back(heap.top());
      heap.pop();
    }
    std::vector<std::size_t> out(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i)
      out[hits.size() - 1 - i] = hits[i].second;
    return out;
  }

 private:
  using Heap = std::priority_queue<std::pair<double, std::size_t>>;

  const double* pt(std::size_t i) const { return pts_.data() + idx_[i] * dim_; }

  double dist2(const double* a, const double* b) const {
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      double d = a[j] - b[j];
      s += d * d;
    }
    return s;
  }

  void build(std::size_t lo, std::size_t hi, std::size_t axis) {
    if (hi - lo <= 1) return;
    std::size_t mid = (lo + hi) / 2;
    std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                     [&](std::size_t a, std::size_t b) {
                       return pts_[a * dim_ + axis] < pts_[b * dim_ + axis];
                     });
    std::size_t next = (axis + 1) % dim_;
    build(lo, mid, next);
    build(mid + 1, hi, next);
  }

  void search(std::size_t lo, std::size_t hi, std::size_t axis, const double* q,
              std::size_t k, Heap& heap) const {
    if (lo >= hi) return;
    std::size_t mid = (lo + hi) / 2;
    const double* m = pt(mid);
    double d2 = dist2(q, m);
    if (heap.size() < k) {
      heap.emplace(d2, idx_[mid]);
    } else if (d2 < heap.top().first) {
      heap.pop();
      heap.emplace(d2, idx_[mid]);
    }
    double split = m[axis] - q[axis];
    std::size_t next = (axis + 1) % dim_;
    if (split >= 0.0) {
      search(lo, mid, next, q, k, heap);
      if (heap.size() < k || split * split < heap.top().first)
        search(mid + 1, hi, next, q, k, heap);
    } else {
      search(mid + 1, hi, next, q, k, heap);
      if (heap.size() < k || split * split < heap.top().first)
        search(lo, mid, next, q, k, heap);
    }
  }

  std::vector<double> pts_;
  std::size_t dim_;
  std::size_t count_;
  std::vector<std::size_t> idx_;
};

}  // namespace kdb
