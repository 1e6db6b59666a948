// Copyright 2026 The lidargen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lidargen/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "lidargen/errors.hpp"

namespace lidargen {

namespace {
constexpr std::uint32_t kLeafSize = 12;
}

KdTree3::KdTree3(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  if (points_.empty()) fail(ErrorCode::kInvalidInput, "kd-tree needs at least one point");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  build(0, static_cast<std::uint32_t>(order_.size()), 0);
}

std::int32_t KdTree3::build(std::uint32_t begin, std::uint32_t end, int depth) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, -1, 0.0});
  if (end - begin <= kLeafSize) return id;

  // Split along the widest axis of this node's bounding box.
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] - lo[axis] <= 0.0) return id;  // all coincident

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double va = points_[a][axis];
                     const double vb = points_[b][axis];
                     return va < vb || (va == vb && a < b);
                   });
  const double split = points_[order_[mid]][axis];
  const std::int32_t left = build(begin, mid, depth + 1);
  const std::int32_t right = build(mid, end, depth + 1);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void KdTree3::search(std::int32_t id, const Vec3& q, Hit& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.axis < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t idx = order_[i];
      const double d = (points_[idx] - q).squaredNorm();
      if (d < best.sq_dist || (d == best.sq_dist && idx < best.index)) {
        best.sq_dist = d;
        best.index = idx;
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const std::int32_t near = diff < 0.0 ? node.left : node.right;
  const std::int32_t far = diff < 0.0 ? node.right : node.left;
  search(near, q, best);
  // <= keeps equal-distance candidates on the far side reachable for the
  // lowest-index tie rule.
  if (diff * diff <= best.sq_dist) search(far, q, best);
}

KdTree3::Hit KdTree3::nearest(const Vec3& query) const {
  Hit best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  search(0, query, best);
  return best;
}

}  // namespace lidargen
