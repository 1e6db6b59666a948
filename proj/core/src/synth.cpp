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

#include "lidargen/synth.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "lidargen/errors.hpp"
#include "lidargen/warp.hpp"

namespace lidargen {

void SceneSpec::validate() const {
  if (!(noise_sigma >= 0.0)) fail(ErrorCode::kInvalidInput, "noise_sigma must be non-negative");
  if (!(ground_intensity >= 0.0 && ground_intensity <= 1.0)) {
    fail(ErrorCode::kInvalidInput, "ground intensity must lie in [0, 1]");
  }
  std::set<int> ids;
  for (const auto& o : objects) {
    const std::string who = "scene object " + std::to_string(o.node_id);
    if (!ids.insert(o.node_id).second) fail(ErrorCode::kInvalidInput, "duplicate " + who);
    if (!(o.material >= 0.0 && o.material <= 1.0)) fail(ErrorCode::kInvalidInput, who + " material outside [0, 1]");
    if (o.trajectory.steps() != ego_trajectory.steps()) {
      fail(ErrorCode::kInvalidInput, who + " trajectory length differs from the ego trajectory");
    }
  }
}

std::optional<double> intersect_ray_obb(const Vec3& origin, const Vec3& direction, const Box3D& box) {
  const Mat3 rt = rot_z(box.yaw()).transpose();
  const Vec3 o = rt * (origin - box.center());
  const Vec3 d = rt * direction;
  const Vec3 half = 0.5 * box.size();
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) {
      if (std::abs(o[i]) > half[i]) return std::nullopt;
      continue;
    }
    double t0 = (-half[i] - o[i]) / d[i];
    double t1 = (half[i] - o[i]) / d[i];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_near > 0.0) return t_near;
  if (t_far > 0.0) return t_far;
  return std::nullopt;
}

PointCloud raycast_frame(const SceneSpec& spec, const SensorConfig& cfg, std::size_t t, Rng& rng) {
  cfg.validate();
  spec.validate();
  const Pose pose = ego_pose_at(spec.ego_trajectory, t);
  std::vector<Box3D> boxes;
  boxes.reserve(spec.objects.size());
  for (const auto& o : spec.objects) boxes.push_back(object_world_box(o.box, o.trajectory, t));

  const Vec3 origin = pose.translation();
  PointCloud out;
  for (int row = 0; row < cfg.height; ++row) {
    for (int col = 0; col < cfg.width; ++col) {
      const Vec3 ray = pixel_ray(row, col, cfg);
      const Vec3 dir = pose.rotation() * ray;
      double best = std::numeric_limits<double>::infinity();
      double intensity = 0.0;
      if (dir.z() < 0.0) {
        const double tg = (spec.ground_z - origin.z()) / dir.z();
        if (tg > 0.0) {
          best = tg;
          intensity = spec.ground_intensity;
        }
      }
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto hit = intersect_ray_obb(origin, dir, boxes[i]);
        if (hit && *hit < best) {
          best = *hit;
          intensity = spec.objects[i].material;
        }
      }
      if (!std::isfinite(best)) continue;
      double range = best;
      if (spec.noise_sigma > 0.0) range += spec.noise_sigma * rng.normal();
      if (range <= 0.0 || range > cfg.max_range) continue;
      out.push_back(LidarPoint::at(ray * range, intensity));
    }
  }
  return out;
}

SceneSequence simulate_sequence(const SceneSpec& spec, const SensorConfig& cfg, std::size_t frames, Rng& rng) {
  if (frames < 1) fail(ErrorCode::kInvalidInput, "sequence needs at least one frame");
  if (frames - 1 > spec.horizon()) {
    fail(ErrorCode::kInvalidInput, "scene trajectories cover only " + std::to_string(spec.horizon() + 1) +
                                       " frames, " + std::to_string(frames) + " requested");
  }
  SceneSequence seq;
  for (std::size_t t = 0; t < frames; ++t) {
    seq.frames.push_back({raycast_frame(spec, cfg, t, rng), ego_pose_at(spec.ego_trajectory, t)});
  }
  return seq;
}

Layout4D layout_from_spec(const SceneSpec& spec) {
  Layout4D layout;
  layout.ego_trajectory = spec.ego_trajectory;
  for (const auto& o : spec.objects) {
    LayoutObject obj;
    obj.node_id = o.node_id;
    obj.category = o.category;
    obj.box = o.box;
    obj.trajectory = o.trajectory;
    obj.motion_state = classify_motion(o.trajectory);
    layout.objects.push_back(std::move(obj));
  }
  return layout;
}

SceneSpec spec_from_layout(const Layout4D& layout, double material, double ground_z) {
  SceneSpec spec;
  spec.ground_z = ground_z;
  spec.ego_trajectory = layout.ego_trajectory;
  for (const auto& o : layout.objects) {
    spec.objects.push_back({o.node_id, o.category, o.box, o.trajectory, material});
  }
  return spec;
}

}  // namespace lidargen
