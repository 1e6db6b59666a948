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

#include "lidargen/warp.hpp"

#include "lidargen/errors.hpp"

namespace lidargen {

Pose ego_pose_at(const Trajectory& ego_trajectory, std::size_t t) {
  if (t > ego_trajectory.steps()) {
    fail(ErrorCode::kInvalidInput, "ego step " + std::to_string(t) + " outside [0, " +
                                       std::to_string(ego_trajectory.steps()) + "]");
  }
  const double yaw = heading_sequence(ego_trajectory, 0.0)[t];
  const Vec2 d = ego_trajectory.at(t);
  return Pose::from_yaw(yaw, Vec3(d.x(), d.y(), 0.0));
}

Pose relative_motion(const Pose& g_t, const Pose& g_prev) { return g_t * g_prev.inverse(); }

FrameDecomposition split_fg_bg(const PointCloud& cloud, const std::vector<std::pair<int, Box3D>>& boxes) {
  FrameDecomposition out;
  for (const auto& [id, box] : boxes) out.foregrounds[id];
  for (const auto& p : cloud) {
    bool assigned = false;
    for (const auto& [id, box] : boxes) {
      if (contains_point(box, p.position())) {
        out.foregrounds[id].push_back(p);
        assigned = true;
        break;
      }
    }
    if (!assigned) out.background.push_back(p);
  }
  return out;
}

PointCloud warp_background(const PointCloud& background, const Pose& g_t, const Pose& g_prev) {
  return transform_points(background, g_t.inverse() * g_prev);
}

Box3D object_world_box(const Box3D& box0, const Trajectory& trajectory, std::size_t t) {
  return box_at_step(box0, trajectory, t);
}

Box3D object_box_at(const Box3D& box0, const Trajectory& trajectory, const Trajectory& ego_trajectory,
                    std::size_t t) {
  return transform_box(object_world_box(box0, trajectory, t), ego_pose_at(ego_trajectory, t).inverse());
}

namespace {

// Object (box) frame -> world.
Pose object_pose(const Box3D& world_box) { return Pose::from_yaw(world_box.yaw(), world_box.center()); }

}  // namespace

WarpedObject warp_object(const PointCloud& points, const Box3D& box0, const Trajectory& trajectory,
                         const Trajectory& ego_trajectory, std::size_t from, std::size_t to) {
  const Pose g_from = ego_pose_at(ego_trajectory, from);
  const Pose g_to = ego_pose_at(ego_trajectory, to);
  const Box3D world_from = object_world_box(box0, trajectory, from);
  const Box3D world_to = object_world_box(box0, trajectory, to);
  const Pose motion = g_to.inverse() * object_pose(world_to) * object_pose(world_from).inverse() * g_from;
  return {transform_points(points, motion), transform_box(world_to, g_to.inverse())};
}

std::vector<std::pair<int, Box3D>> layout_boxes_at(const Layout4D& layout, std::size_t t) {
  std::vector<std::pair<int, Box3D>> out;
  out.reserve(layout.objects.size());
  for (const auto& o : layout.objects) {
    out.emplace_back(o.node_id, object_box_at(o.box, o.trajectory, layout.ego_trajectory, t));
  }
  return out;
}

FrameDecomposition decompose_frame(const PointCloud& cloud, const Layout4D& layout, std::size_t t) {
  return split_fg_bg(cloud, layout_boxes_at(layout, t));
}

PointCloud conditioning_cloud(const FrameDecomposition& decomp0, const FrameDecomposition& decomp_prev,
                              const Layout4D& layout, std::size_t t) {
  if (t < 1 || t > layout.horizon()) {
    fail(ErrorCode::kInvalidInput, "conditioning step must lie in [1, " + std::to_string(layout.horizon()) + "]");
  }
  const Pose g0 = ego_pose_at(layout.ego_trajectory, 0);
  const Pose g_prev = ego_pose_at(layout.ego_trajectory, t - 1);
  const Pose g_t = ego_pose_at(layout.ego_trajectory, t);
  PointCloud merged = warp_background(decomp0.background, g_t, g0);
  const PointCloud from_prev = warp_background(decomp_prev.background, g_t, g_prev);
  merged.points.insert(merged.points.end(), from_prev.begin(), from_prev.end());
  for (const auto& o : layout.objects) {
    const auto it = decomp_prev.foregrounds.find(o.node_id);
    if (it == decomp_prev.foregrounds.end()) continue;
    const auto warped = warp_object(it->second, o.box, o.trajectory, layout.ego_trajectory, t - 1, t);
    merged.points.insert(merged.points.end(), warped.points.begin(), warped.points.end());
  }
  return merged;
}

RangeImage conditioning_map(const FrameDecomposition& decomp0, const FrameDecomposition& decomp_prev,
                            const Layout4D& layout, std::size_t t, const SensorConfig& cfg) {
  return project(conditioning_cloud(decomp0, decomp_prev, layout, t), cfg);
}

}  // namespace lidargen
