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

#include "lidargen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lidargen/errors.hpp"

namespace lidargen {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Signed side of p relative to the directed line a->b; >= 0 means left/on.
double side(const Vec2& a, const Vec2& b, const Vec2& p) { return cross2(b - a, p - a); }

Vec2 line_intersection(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  const double sp = side(a, b, p);
  const double sq = side(a, b, q);
  const double t = sp / (sp - sq);
  return p + t * (q - p);
}

double polygon_area(const std::vector<Vec2>& poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross2(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

// Sutherland-Hodgman: clip `subject` against every edge of the convex,
// counter-clockwise `clip` polygon.
std::vector<Vec2> clip_convex(std::vector<Vec2> subject, const std::array<Vec2, 4>& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % clip.size()];
    std::vector<Vec2> out;
    out.reserve(subject.size() + 2);
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Vec2& cur = subject[i];
      const Vec2& prev = subject[(i + subject.size() - 1) % subject.size()];
      const bool cur_in = side(a, b, cur) >= 0.0;
      const bool prev_in = side(a, b, prev) >= 0.0;
      if (cur_in) {
        if (!prev_in) out.push_back(line_intersection(prev, cur, a, b));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(line_intersection(prev, cur, a, b));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

double z_overlap(const Box3D& a, const Box3D& b) {
  return std::max(0.0, std::min(a.z_max(), b.z_max()) - std::max(a.z_min(), b.z_min()));
}

}  // namespace

std::vector<Vec3> PointCloud::positions() const {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.position());
  return out;
}

void validate_cloud(const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      fail(ErrorCode::kInvalidInput, "point " + std::to_string(i) + " has a non-finite coordinate");
    }
    if (!(p.intensity >= 0.0 && p.intensity <= 1.0)) {
      fail(ErrorCode::kInvalidInput, "point " + std::to_string(i) + " has intensity outside [0,1]");
    }
  }
}

PointCloud merge_clouds(std::initializer_list<const PointCloud*> clouds) {
  PointCloud out;
  std::size_t total = 0;
  for (const auto* c : clouds) total += c->size();
  out.points.reserve(total);
  for (const auto* c : clouds) out.points.insert(out.points.end(), c->begin(), c->end());
  return out;
}

double normalize_angle(double radians) {
  double a = std::remainder(radians, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

Mat3 rot_z(double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Mat3 r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

Box3D::Box3D(const Vec3& center, const Vec3& size, double yaw)
    : center_(center), size_(size), yaw_(normalize_angle(yaw)) {
  if (!center.allFinite() || !size.allFinite() || !std::isfinite(yaw)) {
    fail(ErrorCode::kInvalidInput, "box has non-finite parameters");
  }
  if (!(size.x() > 0.0 && size.y() > 0.0 && size.z() > 0.0)) {
    std::ostringstream msg;
    msg << "box size must be positive, got (" << size.x() << ", " << size.y() << ", " << size.z()
        << ")";
    fail(ErrorCode::kInvalidInput, msg.str());
  }
}

std::array<Vec2, 4> Box3D::bev_corners() const {
  const double c = std::cos(yaw_);
  const double s = std::sin(yaw_);
  const double hx = 0.5 * size_.x();
  const double hy = 0.5 * size_.y();
  const std::array<Vec2, 4> local = {Vec2(hx, hy), Vec2(-hx, hy), Vec2(-hx, -hy), Vec2(hx, -hy)};
  std::array<Vec2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = Vec2(center_.x() + c * local[i].x() - s * local[i].y(),
                  center_.y() + s * local[i].x() + c * local[i].y());
  }
  return out;
}

void validate_trajectory(const Trajectory& trajectory) {
  if (trajectory.displacements.empty()) {
    fail(ErrorCode::kInvalidInput, "trajectory must have at least one step");
  }
  for (const auto& d : trajectory.displacements) {
    if (!d.allFinite()) fail(ErrorCode::kInvalidInput, "trajectory has non-finite displacement");
  }
}

std::vector<double> heading_sequence(const Trajectory& trajectory, double initial) {
  std::vector<double> headings(trajectory.steps() + 1, initial);
  for (std::size_t t = 1; t <= trajectory.steps(); ++t) {
    const Vec2 step = trajectory.at(t) - trajectory.at(t - 1);
    headings[t] = step.norm() > 1e-9 ? std::atan2(step.y(), step.x()) : headings[t - 1];
  }
  return headings;
}

Box3D box_at_step(const Box3D& box, const Trajectory& trajectory, std::size_t t) {
  if (t > trajectory.steps()) {
    fail(ErrorCode::kInvalidInput, "step " + std::to_string(t) + " beyond trajectory length " +
                                       std::to_string(trajectory.steps()));
  }
  if (t == 0) return box;
  const Vec2 d = trajectory.at(t);
  const double heading = heading_sequence(trajectory, box.yaw())[t];
  return Box3D(box.center() + Vec3(d.x(), d.y(), 0.0), box.size(), heading);
}

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    fail(ErrorCode::kInvalidInput, "pose has non-finite entries");
  }
  const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-9 || std::abs(rotation.determinant() - 1.0) > 1e-9) {
    fail(ErrorCode::kInvalidInput, "pose rotation is not a proper orthonormal matrix");
  }
}

Pose Pose::from_yaw(double yaw, const Vec3& translation) {
  return unchecked(rot_z(yaw), translation);
}

Pose Pose::unchecked(const Mat3& rotation, const Vec3& translation) {
  Pose p;
  p.rotation_ = rotation;
  p.translation_ = translation;
  return p;
}

Pose Pose::inverse() const {
  const Mat3 rt = rotation_.transpose();
  return unchecked(rt, -(rt * translation_));
}

Pose Pose::operator*(const Pose& rhs) const {
  return unchecked(rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_);
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

std::array<Vec3, 8> box_corners(const Box3D& box) {
  const auto bev = box.bev_corners();
  std::array<Vec3, 8> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = Vec3(bev[i].x(), bev[i].y(), box.z_min());
    out[i + 4] = Vec3(bev[i].x(), bev[i].y(), box.z_max());
  }
  return out;
}

bool contains_point(const Box3D& box, const Vec3& p, double margin) {
  const Vec3 d = p - box.center();
  const double c = std::cos(box.yaw());
  const double s = std::sin(box.yaw());
  const double lx = c * d.x() + s * d.y();
  const double ly = -s * d.x() + c * d.y();
  const Vec3 half = 0.5 * box.size();
  return std::abs(lx) <= half.x() + margin && std::abs(ly) <= half.y() + margin &&
         std::abs(d.z()) <= half.z() + margin;
}

double bev_intersection_area(const Box3D& a, const Box3D& b) {
  const auto ca = a.bev_corners();
  const auto cb = b.bev_corners();
  // Cheap reject on circumscribed circles.
  const double ra = 0.5 * std::hypot(a.size().x(), a.size().y());
  const double rb = 0.5 * std::hypot(b.size().x(), b.size().y());
  const double dx = a.center().x() - b.center().x();
  const double dy = a.center().y() - b.center().y();
  if (dx * dx + dy * dy > (ra + rb) * (ra + rb)) return 0.0;
  return polygon_area(clip_convex(std::vector<Vec2>(ca.begin(), ca.end()), cb));
}

double iou_bev(const Box3D& a, const Box3D& b) {
  const double inter = bev_intersection_area(a, b);
  const double uni = a.size().x() * a.size().y() + b.size().x() * b.size().y() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

double intersection_volume(const Box3D& a, const Box3D& b) {
  const double dz = z_overlap(a, b);
  if (dz <= 0.0) return 0.0;
  return bev_intersection_area(a, b) * dz;
}

double iou_3d(const Box3D& a, const Box3D& b) {
  const double inter = intersection_volume(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.volume() + b.volume() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

PointCloud transform_points(const PointCloud& cloud, const Pose& pose) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back(LidarPoint::at(pose.apply(p.position()), p.intensity));
  return out;
}

Box3D transform_box(const Box3D& box, const Pose& pose) {
  const Mat3& r = pose.rotation();
  if (std::abs(r(2, 2) - 1.0) > 1e-9) {
    fail(ErrorCode::kInvalidInput, "boxes only support yaw rotations");
  }
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return Box3D(pose.apply(box.center()), box.size(), box.yaw() + yaw);
}

}  // namespace lidargen
