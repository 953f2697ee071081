// Copyright 2026 The mlqaoa Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mlqaoa/coarsen.hpp"

namespace mlqaoa::detail {

/// Static 3-d tree over a point set, answering exact k-nearest-neighbor
/// queries. Ties in distance resolve to the lower point index, matching the
/// brute-force ordering.
class KdTree3 {
 public:
    explicit KdTree3(std::span<const Point3> points) : points_(points) {
        order_.resize(points.size());
        for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<NodeId>(i);
        nodes_.reserve(points.size());
        if (!order_.empty()) build(0, order_.size());
    }

    /// The k nearest points to points[query], excluding query itself, as
    /// (squared distance, index) sorted ascending.
    std::vector<std::pair<double, NodeId>> nearest(NodeId query, std::size_t k) const {
        std::vector<std::pair<double, NodeId>> heap;
        heap.reserve(k + 1);
        if (k > 0 && !nodes_.empty()) search(0, query, k, heap);
        std::sort_heap(heap.begin(), heap.end());
        return heap;
    }

 private:
    struct Node {
        NodeId point;
        int axis;
        std::size_t left = npos;
        std::size_t right = npos;
    };
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t build(std::size_t begin, std::size_t end) {
        // Split on the axis of largest spread at the median.
        Point3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
        for (std::size_t k = begin; k < end; ++k) {
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], points_[order_[k]][a]);
                hi[a] = std::max(hi[a], points_[order_[k]][a]);
            }
        }
        int axis = 0;
        for (int a = 1; a < 3; ++a) {
            if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
        }
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](NodeId a, NodeId b) {
                             return points_[a][axis] != points_[b][axis]
                                            ? points_[a][axis] < points_[b][axis]
                                            : a < b;
                         });
        const std::size_t id = nodes_.size();
        nodes_.push_back({order_[mid], axis});
        if (begin < mid) nodes_[id].left = build(begin, mid);
        if (mid + 1 < end) nodes_[id].right = build(mid + 1, end);
        return id;
    }

    double dist2(NodeId a, NodeId b) const {
        double s = 0;
        for (int k = 0; k < 3; ++k) {
            const double d = points_[a][k] - points_[b][k];
            s += d * d;
        }
        return s;
    }

    void search(std::size_t id, NodeId query, std::size_t k,
                std::vector<std::pair<double, NodeId>>& heap) const {
        const Node& node = nodes_[id];
        if (node.point != query) {
            const std::pair<double, NodeId> cand{dist2(node.point, query), node.point};
            if (heap.size() < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end());
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        const double delta = points_[query][node.axis] - points_[node.point][node.axis];
        const std::size_t near = delta < 0 ? node.left : node.right;
        const std::size_t far = delta < 0 ? node.right : node.left;
        if (near != npos) search(near, query, k, heap);
        // Visit the far side on equality too, so equal-distance points with a
        // lower index are not skipped.
        if (far != npos && (heap.size() < k || delta * delta <= heap.front().first)) {
            search(far, query, k, heap);
        }
    }

    std::span<const Point3> points_;
    std::vector<NodeId> order_;
    std::vector<Node> nodes_;
};

}  // namespace mlqaoa::detail
