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

namespace lidargen {

struct IcpConfig {
  int max_iterations = 50;
  double tolerance = 1e-10;  // stop when the MSE improves by less than this
  /// Correspondences farther apart than this are ignored (<= 0 keeps all).
  double max_correspondence_distance = 0.0;
};

struct IcpResult {
  Pose transform;  // maps source points onto the target
  std::vector<double> mse;  // per iteration, before each update
  int iterations = 0;
  bool converged = false;
};

/// Best rigid transform (Kabsch) mapping src[i] onto dst[i].
/// Throws kDegenerate with fewer than 3 points or collinear input.
Pose fit_rigid(const std::vector<Vec3>& src, const std::vector<Vec3>& dst);

/// Point-to-point ICP with kd-tree correspondences.
/// Throws kDegenerate when either cloud has fewer than three non-collinear
/// points.
IcpResult icp(const std::vector<Vec3>& source, const std::vector<Vec3>& target, const IcpConfig& cfg = {},
              const Pose& initial = Pose());
IcpResult icp(const PointCloud& source, const PointCloud& target, const IcpConfig& cfg = {},
              const Pose& initial = Pose());

struct PoseError {
  double rotation = 0.0;     // |R_pred R_gt^T - I|_F
  double translation = 0.0;  // |t_pred - t_gt|
};

PoseError pose_error(const Pose& predicted, const Pose& truth);

/// Ground-truth transform taking frame b coordinates into frame a.
Pose frame_to_frame(const Pose& g_a, const Pose& g_b);

struct TtceConfig {
  IcpConfig icp;
  /// Points with z at or below this height (sensor frame) are left out of
  /// registration. A flat ground plane is sampled in rings that move with the
  /// sensor and pulls point-to-point ICP towards zero translation.
  std::optional<double> ground_cut;
};

/// Points strictly above `height`.
PointCloud drop_below(const PointCloud& cloud, double height);

/// Mean pose error of ICP-estimated consecutive relative transforms.
/// Throws kInvalidInput with fewer than two frames or mismatched pose counts.
PoseError ttce(const SceneSequence& sequence, const std::vector<Pose>& gt_poses, const TtceConfig& cfg = {});
/// Same, given already estimated relative transforms (frame t+1 -> t).
PoseError ttce_from_estimates(const std::vector<Pose>& estimated, const std::vector<Pose>& gt_poses);

/// Mean Chamfer distance between frame t and frame t+k aligned into frame t
/// with the given poses.
double ctc(const SceneSequence& sequence, const std::vector<Pose>& gt_poses, std::size_t k = 1);

}  // namespace lidargen
