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
#include <optional>
#include <vector>

#include "lidargen/geometry.hpp"
#include "lidargen/layout.hpp"
#include "lidargen/range_codec.hpp"
#include "lidargen/rng.hpp"

namespace lidargen {

struct SceneObject {
  int node_id = 0;
  Category category = Category::kCar;
  Box3D box;  // world frame at t = 0
  Trajectory trajectory;
  double material = 0.5;  // returned intensity
};

/// Ground plane plus moving boxes. The ego frame origin is the sensor.
struct SceneSpec {
  double ground_z = -1.84;
  double ground_intensity = 0.2;
  std::vector<SceneObject> objects;
  Trajectory ego_trajectory;
  double noise_sigma = 0.0;  // meters of Gaussian range noise

  std::size_t horizon() const { return ego_trajectory.steps(); }
  /// Throws kInvalidInput on materials outside [0, 1], unequal trajectory
  /// lengths, negative noise or repeated node ids.
  void validate() const;
};

/// Nearest positive ray parameter at which origin + t * direction meets the
/// box (the exit distance when the origin is inside), or nullopt.
std::optional<double> intersect_ray_obb(const Vec3& origin, const Vec3& direction, const Box3D& box);

/// One ray per pixel center from the ego pose at step t; nearest hit among
/// the ground plane and the boxes at step t. Points are in the ego frame, in
/// row-major pixel order; misses and hits beyond max_range are dropped.
PointCloud raycast_frame(const SceneSpec& spec, const SensorConfig& cfg, std::size_t t, Rng& rng);

/// Frames t = 0..frames-1 with exact ego poses. Requires frames - 1 <= T.
SceneSequence simulate_sequence(const SceneSpec& spec, const SensorConfig& cfg, std::size_t frames, Rng& rng);

/// Layout with the scene's boxes and trajectories (no canonical shapes).
Layout4D layout_from_spec(const SceneSpec& spec);

/// Scene built from a layout with one material for every object.
SceneSpec spec_from_layout(const Layout4D& layout, double material = 0.5, double ground_z = -1.84);

}  // namespace lidargen
