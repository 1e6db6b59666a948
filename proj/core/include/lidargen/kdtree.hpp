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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lidargen/geometry.hpp"

namespace lidargen {

/// Static 3D kd-tree for exact nearest-neighbor queries.
class KdTree3 {
 public:
  struct Hit {
    std::size_t index = 0;
    double sq_dist = 0.0;
  };

  /// Copies the points. Throws kInvalidInput when `points` is empty.
  explicit KdTree3(std::span<const Vec3> points);

  /// Exact nearest neighbor. Ties resolve to the lowest point index.
  Hit nearest(const Vec3& query) const;

  std::size_t size() const { return points_.size(); }
  const Vec3& point(std::size_t i) const { return points_[i]; }

 private:
  struct Node {
    std::uint32_t begin = 0;  // range into order_
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int axis = -1;            // -1 for leaves
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, int depth);
  void search(std::int32_t node, const Vec3& q, Hit& best) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace lidargen
