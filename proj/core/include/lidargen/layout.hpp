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

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lidargen/diffusion.hpp"
#include "lidargen/geometry.hpp"
#include "lidargen/scene_graph.hpp"

namespace lidargen {

/// One object of a 4D layout. `shape` holds canonical points: coordinates in
/// [-1, 1]^3 of the box frame and intensity mapped affinely to [-1, 1].
struct LayoutObject {
  int node_id = 0;
  Category category = Category::kCar;
  MotionState motion_state = MotionState::kStationary;
  Box3D box;
  Trajectory trajectory;
  PointCloud shape;

  bool operator==(const LayoutObject&) const = default;
};

struct Layout4D {
  Trajectory ego_trajectory;
  std::vector<LayoutObject> objects;

  std::size_t horizon() const { return ego_trajectory.steps(); }
  /// Throws kLookup for unknown node ids.
  const LayoutObject& object(int node_id) const;
  bool operator==(const Layout4D&) const = default;
};

/// Throws kInvalidInput when a box center leaves `bounds`, trajectory lengths
/// differ, node ids repeat, or a canonical coordinate leaves [-1, 1].
void validate_layout(const Layout4D& layout, const WorldBounds& bounds = {});

/// (cx, cy, cz) normalized to [0, 1] by the bounds, log of the three sizes,
/// then sin and cos of the yaw.
using BoxCode = Eigen::Matrix<double, 8, 1>;
inline constexpr int kBoxCodeDim = 8;

/// Throws kDomain when the center lies outside the bounds.
BoxCode encode_box(const Box3D& box, const WorldBounds& bounds = {});
/// Renormalizes (sin, cos) before atan2; a zero vector decodes to yaw 0.
Box3D decode_box(const BoxCode& code, const WorldBounds& bounds = {});

inline constexpr double kDefaultDisplacementBound = 20.0;

/// 2T values (dx_1, dy_1, ..., dx_T, dy_T) / bound. Throws kDomain when a
/// component exceeds the bound in magnitude.
VectorXd encode_trajectory(const Trajectory& trajectory, double bound = kDefaultDisplacementBound);
/// Throws kShapeMismatch on odd lengths.
Trajectory decode_trajectory(const VectorXd& code, double bound = kDefaultDisplacementBound);

/// Rotates by -yaw about the box center, divides by the half extents and maps
/// intensity i to 2i - 1.
PointCloud canonicalize_points(const PointCloud& cloud, const Box3D& box);
PointCloud decanonicalize_points(const PointCloud& canonical, const Box3D& box);

/// (1 / N_p) * sum over unordered pairs of max(0, IoU - tau), N_p = N(N-1)/2.
double box_overlap_penalty(const std::vector<Box3D>& boxes, double tau = 0.01);

/// Same penalty evaluated on the propagated boxes at t = 1..T and divided by
/// N_p * T. Throws kInvalidInput when lists or trajectory lengths disagree.
double trajectory_overlap_penalty(const std::vector<Box3D>& boxes,
                                  const std::vector<Trajectory>& trajectories, double tau = 0.01);

/// Category one-hot (9), motion one-hot (4), in-degree, out-degree and a
/// histogram of outgoing relation labels (9), each count divided by
/// kConditionCountScale and clamped to 1.
inline constexpr int kConditionDim = 24;
inline constexpr double kConditionCountScale = 32.0;
VectorXd featurize_condition(const SceneGraph& graph, int node_id);

/// Denoisers for the three branches. Box: dim 8, condition kConditionDim.
/// Trajectory: dim 2T, condition kConditionDim + 8 (the encoded box).
/// Shape: dim 4 per point, condition 8 (the encoded box).
struct LayoutModels {
  const Denoiser* box = nullptr;
  const Denoiser* trajectory = nullptr;
  const Denoiser* shape = nullptr;
};

struct LayoutSamplerConfig {
  int sample_steps = 256;
  int horizon = 5;
  int num_points = 512;
  int reject_k = 8;
  double penalty_weight = 0.01;  // lambda
  double penalty_tau = 0.01;
  double displacement_bound = kDefaultDisplacementBound;
  WorldBounds bounds;
  Vec3 ego_size = Vec3(4.0, 1.8, 1.5);
};

struct LayoutSample {
  Layout4D layout;
  int rejections = 0;
  int collisions = 0;  // colliding pairs in the returned layout
  double score = 0.0;  // lambda * (box + trajectory penalty)
};

/// Samples boxes, then trajectories (ego included) conditioned on the boxes,
/// then canonical shapes. A draw whose boxes collide (IoU > 0) is redrawn up
/// to reject_k times; the lowest-score draw is kept.
LayoutSample sample_layout(const SceneGraph& graph, const LayoutModels& models,
                           const NoiseSchedule& schedule, const LayoutSamplerConfig& cfg,
                           std::uint64_t seed);

/// Number of unordered object pairs whose boxes overlap at t = 0.
int count_collisions(const std::vector<Box3D>& boxes);

}  // namespace lidargen
