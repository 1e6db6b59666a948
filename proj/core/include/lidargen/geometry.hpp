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

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace lidargen {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// One LiDAR return. Coordinates in meters, intensity unitless in [0, 1].
struct LidarPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double intensity = 0.0;

  Vec3 position() const { return {x, y, z}; }
  static LidarPoint at(const Vec3& p, double intensity) {
    return {p.x(), p.y(), p.z(), intensity};
  }
  bool operator==(const LidarPoint&) const = default;
};

struct PointCloud {
  std::vector<LidarPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void push_back(const LidarPoint& p) { points.push_back(p); }
  auto begin() const { return points.begin(); }
  auto end() const { return points.end(); }
  auto begin() { return points.begin(); }
  auto end() { return points.end(); }
  const LidarPoint& operator[](std::size_t i) const { return points[i]; }
  LidarPoint& operator[](std::size_t i) { return points[i]; }

  std::vector<Vec3> positions() const;
  bool operator==(const PointCloud&) const = default;
};

/// Throws ErrorCode::kInvalidInput on non-finite coordinates or intensity
/// outside [0, 1].
void validate_cloud(const PointCloud& cloud);

/// Concatenates clouds in argument order.
PointCloud merge_clouds(std::initializer_list<const PointCloud*> clouds);

/// Maps any angle into (-pi, pi].
double normalize_angle(double radians);

Mat3 rot_z(double yaw);

/// Oriented box with yaw about +z. `size` is the full extent along the box's
/// local x (heading), local y and z axes. Immutable after construction.
class Box3D {
 public:
  Box3D() : Box3D(Vec3::Zero(), Vec3::Ones(), 0.0) {}
  /// Throws kInvalidInput when a size component is not > 0 or anything is
  /// non-finite. Yaw is normalized into (-pi, pi].
  Box3D(const Vec3& center, const Vec3& size, double yaw);

  const Vec3& center() const { return center_; }
  const Vec3& size() const { return size_; }
  double yaw() const { return yaw_; }
  double volume() const { return size_.prod(); }
  double z_min() const { return center_.z() - 0.5 * size_.z(); }
  double z_max() const { return center_.z() + 0.5 * size_.z(); }

  Box3D with_center(const Vec3& c) const { return Box3D(c, size_, yaw_); }
  Box3D with_yaw(double yaw) const { return Box3D(center_, size_, yaw); }

  /// Footprint corners, counter-clockwise.
  std::array<Vec2, 4> bev_corners() const;

  bool operator==(const Box3D&) const = default;

 private:
  Vec3 center_;
  Vec3 size_;
  double yaw_;
};

/// Planar displacements (dx, dy) of steps t = 1..T relative to frame 0.
struct Trajectory {
  std::vector<Vec2> displacements;

  std::size_t steps() const { return displacements.size(); }
  /// Displacement at step t, with t = 0 meaning the origin.
  Vec2 at(std::size_t t) const {
    return t == 0 ? Vec2::Zero() : displacements.at(t - 1);
  }
  static Trajectory stationary(std::size_t steps) {
    return Trajectory{std::vector<Vec2>(steps, Vec2::Zero())};
  }
  bool operator==(const Trajectory&) const = default;
};

void validate_trajectory(const Trajectory& trajectory);

/// Headings for t = 0..T. Entry 0 is `initial`; afterwards each step's
/// direction atan2(dy, dx), holding the previous heading on steps shorter
/// than 1e-9 m.
std::vector<double> heading_sequence(const Trajectory& trajectory, double initial);

/// World box of an object at step t: center shifted by the displacement,
/// yaw set to the heading at t (initial heading = the box yaw).
/// Throws kInvalidInput when t > T.
Box3D box_at_step(const Box3D& box, const Trajectory& trajectory, std::size_t t);

/// Rigid transform p' = R p + t.
class Pose {
 public:
  Pose() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}
  /// Throws kInvalidInput unless R^T R = I and det R = +1 within 1e-9.
  Pose(const Mat3& rotation, const Vec3& translation);

  static Pose from_yaw(double yaw, const Vec3& translation);
  /// Builds without orthonormality checks; for products of valid poses.
  static Pose unchecked(const Mat3& rotation, const Vec3& translation);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Pose inverse() const;
  Pose operator*(const Pose& rhs) const;
  Eigen::Matrix4d matrix() const;

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

/// Axis-aligned world volume, inclusive on both ends.
struct WorldBounds {
  Vec3 min = Vec3(-80.0, -80.0, -8.0);
  Vec3 max = Vec3(80.0, 80.0, 8.0);

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  Vec3 extent() const { return max - min; }
  bool operator==(const WorldBounds&) const = default;
};

/// Frames of a LiDAR sequence with ego->world poses (world = ego frame 0).
struct SceneSequence {
  struct Frame {
    PointCloud cloud;
    Pose pose;
  };
  std::vector<Frame> frames;

  std::size_t size() const { return frames.size(); }
  std::vector<Pose> poses() const {
    std::vector<Pose> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f.pose);
    return out;
  }
};

/// Corners of the oriented box; bottom face first (counter-clockwise), then
/// top face in the same order.
std::array<Vec3, 8> box_corners(const Box3D& box);

/// Inclusive inside test. `margin` grows the box on every face.
bool contains_point(const Box3D& box, const Vec3& p, double margin = 0.0);

/// Area of the intersection of the two footprints.
double bev_intersection_area(const Box3D& a, const Box3D& b);
double iou_bev(const Box3D& a, const Box3D& b);
double intersection_volume(const Box3D& a, const Box3D& b);
/// Exact oriented IoU: convex footprint clipping times z-interval overlap.
double iou_3d(const Box3D& a, const Box3D& b);

/// Applies the pose to every point; intensities are unchanged.
PointCloud transform_points(const PointCloud& cloud, const Pose& pose);
Box3D transform_box(const Box3D& box, const Pose& pose);

}  // namespace lidargen
