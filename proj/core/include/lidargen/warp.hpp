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
#include <map>
#include <utility>
#include <vector>

#include "lidargen/geometry.hpp"
#include "lidargen/layout.hpp"
#include "lidargen/range_codec.hpp"

namespace lidargen {

// Poses map ego coordinates at step t into the world frame, which is the ego
// frame at t = 0.

/// Ego pose at step t in [0, T]: translation (dx_t, dy_t, 0), yaw from the
/// heading of the latest non-zero step (0 before any motion).
/// Throws kInvalidInput when t > T.
Pose ego_pose_at(const Trajectory& ego_trajectory, std::size_t t);

/// G_t * G_prev^-1, so that relative_motion(G_t, G_prev) * G_prev = G_t.
Pose relative_motion(const Pose& g_t, const Pose& g_prev);

struct FrameDecomposition {
  PointCloud background;
  std::map<int, PointCloud> foregrounds;  // one entry per box, possibly empty
};

/// Each point goes to the first box (in list order) containing it, else to
/// the background. Order within each part follows the input.
FrameDecomposition split_fg_bg(const PointCloud& cloud, const std::vector<std::pair<int, Box3D>>& boxes);

/// Re-expresses static points seen at `g_prev` in the ego frame of `g_t`:
/// p_t = G_t^-1 G_prev p_prev.
PointCloud warp_background(const PointCloud& background, const Pose& g_t, const Pose& g_prev);

/// World box (frame-0 coordinates) of an object at step t.
Box3D object_world_box(const Box3D& box0, const Trajectory& trajectory, std::size_t t);

/// Ego-frame box of an object at step t.
Box3D object_box_at(const Box3D& box0, const Trajectory& trajectory, const Trajectory& ego_trajectory,
                    std::size_t t);

struct WarpedObject {
  PointCloud points;
  Box3D box;  // ego frame at `to`
};

/// Moves points captured in the ego frame at step `from` rigidly with the
/// object to step `to` and expresses them in the ego frame at `to`.
WarpedObject warp_object(const PointCloud& points, const Box3D& box0, const Trajectory& trajectory,
                         const Trajectory& ego_trajectory, std::size_t from, std::size_t to);

/// Boxes of every layout object in the ego frame at step t, in layout order.
std::vector<std::pair<int, Box3D>> layout_boxes_at(const Layout4D& layout, std::size_t t);

/// Splits a frame captured at step t with the layout boxes at t.
FrameDecomposition decompose_frame(const PointCloud& cloud, const Layout4D& layout, std::size_t t);

/// Projection of B^{0->t}, B^{t-1->t} and every F_i^{t-1->t}, merged by the
/// z-buffer. Requires 1 <= t <= T.
RangeImage conditioning_map(const FrameDecomposition& decomp0, const FrameDecomposition& decomp_prev,
                            const Layout4D& layout, std::size_t t, const SensorConfig& cfg);

/// The merged cloud behind conditioning_map.
PointCloud conditioning_cloud(const FrameDecomposition& decomp0, const FrameDecomposition& decomp_prev,
                              const Layout4D& layout, std::size_t t);

}  // namespace lidargen
