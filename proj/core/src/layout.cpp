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

#include "lidargen/layout.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lidargen/errors.hpp"

namespace lidargen {

const LayoutObject& Layout4D::object(int node_id) const {
  for (const auto& o : objects) {
    if (o.node_id == node_id) return o;
  }
  fail(ErrorCode::kLookup, "layout has no node " + std::to_string(node_id));
}

void validate_layout(const Layout4D& layout, const WorldBounds& bounds) {
  validate_trajectory(layout.ego_trajectory);
  std::set<int> ids;
  for (const auto& o : layout.objects) {
    const std::string who = "layout node " + std::to_string(o.node_id);
    if (!ids.insert(o.node_id).second) fail(ErrorCode::kInvalidInput, "duplicate " + who);
    if (!bounds.contains(o.box.center())) fail(ErrorCode::kInvalidInput, who + " lies outside the world bounds");
    if (o.trajectory.steps() != layout.ego_trajectory.steps()) {
      fail(ErrorCode::kInvalidInput, who + " trajectory length differs from the ego trajectory");
    }
    validate_trajectory(o.trajectory);
    for (const auto& p : o.shape) {
      const double m = std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z), std::abs(p.intensity)});
      if (!(m <= 1.0)) fail(ErrorCode::kInvalidInput, who + " has a canonical point outside [-1, 1]");
    }
  }
}

BoxCode encode_box(const Box3D& box, const WorldBounds& bounds) {
  if (!bounds.contains(box.center())) {
    fail(ErrorCode::kDomain, "box center outside the world bounds");
  }
  BoxCode code;
  const Vec3 rel = (box.center() - bounds.min).cwiseQuotient(bounds.extent());
  code << rel, box.size().array().log().matrix(), std::sin(box.yaw()), std::cos(box.yaw());
  return code;
}

Box3D decode_box(const BoxCode& code, const WorldBounds& bounds) {
  const Vec3 center = bounds.min + code.head<3>().cwiseProduct(bounds.extent());
  const Vec3 size = code.segment<3>(3).array().exp().matrix();
  const double s = code[6];
  const double c = code[7];
  const double norm = std::hypot(s, c);
  const double yaw = norm > 0.0 ? std::atan2(s / norm, c / norm) : 0.0;
  return Box3D(center, size, yaw);
}

VectorXd encode_trajectory(const Trajectory& trajectory, double bound) {
  if (!(bound > 0.0)) fail(ErrorCode::kInvalidInput, "displacement bound must be positive");
  VectorXd code(2 * static_cast<Eigen::Index>(trajectory.steps()));
  for (std::size_t t = 0; t < trajectory.steps(); ++t) {
    const Vec2& d = trajectory.displacements[t];
    if (std::abs(d.x()) > bound || std::abs(d.y()) > bound) {
      fail(ErrorCode::kDomain, "displacement at step " + std::to_string(t + 1) + " exceeds the bound");
    }
    code[2 * static_cast<Eigen::Index>(t)] = d.x() / bound;
    code[2 * static_cast<Eigen::Index>(t) + 1] = d.y() / bound;
  }
  return code;
}

Trajectory decode_trajectory(const VectorXd& code, double bound) {
  if (code.size() % 2 != 0) fail(ErrorCode::kShapeMismatch, "trajectory code length must be even");
  Trajectory traj;
  for (Eigen::Index i = 0; i < code.size(); i += 2) {
    traj.displacements.emplace_back(code[i] * bound, code[i + 1] * bound);
  }
  return traj;
}

PointCloud canonicalize_points(const PointCloud& cloud, const Box3D& box) {
  const Mat3 rt = rot_z(box.yaw()).transpose();
  const Vec3 half = 0.5 * box.size();
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud) {
    const Vec3 local = (rt * (p.position() - box.center())).cwiseQuotient(half);
    out.push_back(LidarPoint::at(local, 2.0 * p.intensity - 1.0));
  }
  return out;
}

PointCloud decanonicalize_points(const PointCloud& canonical, const Box3D& box) {
  const Mat3 r = rot_z(box.yaw());
  const Vec3 half = 0.5 * box.size();
  PointCloud out;
  out.points.reserve(canonical.size());
  for (const auto& p : canonical) {
    const Vec3 world = r * p.position().cwiseProduct(half) + box.center();
    out.push_back(LidarPoint::at(world, 0.5 * (p.intensity + 1.0)));
  }
  return out;
}

namespace {

double pair_excess(const std::vector<Box3D>& boxes, double tau) {
  double sum = 0.0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      sum += std::max(0.0, iou_3d(boxes[i], boxes[j]) - tau);
    }
  }
  return sum;
}

double pair_count(std::size_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

}  // namespace

double box_overlap_penalty(const std::vector<Box3D>& boxes, double tau) {
  if (boxes.size() < 2) return 0.0;
  return pair_excess(boxes, tau) / pair_count(boxes.size());
}

double trajectory_overlap_penalty(const std::vector<Box3D>& boxes,
                                  const std::vector<Trajectory>& trajectories, double tau) {
  if (boxes.size() != trajectories.size()) {
    fail(ErrorCode::kInvalidInput, "boxes and trajectories differ in count");
  }
  if (boxes.size() < 2) return 0.0;
  const std::size_t horizon = trajectories.front().steps();
  for (const auto& tr : trajectories) {
    if (tr.steps() != horizon) fail(ErrorCode::kInvalidInput, "trajectory lengths differ");
  }
  if (horizon == 0) return 0.0;
  double sum = 0.0;
  std::vector<Box3D> at_t(boxes.size());
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t i = 0; i < boxes.size(); ++i) at_t[i] = box_at_step(boxes[i], trajectories[i], t);
    sum += pair_excess(at_t, tau);
  }
  return sum / (pair_count(boxes.size()) * static_cast<double>(horizon));
}

int count_collisions(const std::vector<Box3D>& boxes) {
  int n = 0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (iou_3d(boxes[i], boxes[j]) > 0.0) ++n;
    }
  }
  return n;
}

VectorXd featurize_condition(const SceneGraph& graph, int node_id) {
  const SceneNode& node = graph.node(node_id);
  VectorXd f = VectorXd::Zero(kConditionDim);
  f[static_cast<Eigen::Index>(node.category)] = 1.0;
  f[static_cast<Eigen::Index>(kCategoryCount + static_cast<std::size_t>(node.motion_state))] = 1.0;
  const auto base = static_cast<Eigen::Index>(kCategoryCount + kMotionStateCount);
  double in_deg = 0.0;
  double out_deg = 0.0;
  std::array<double, kRelationCount> hist{};
  for (const auto& e : graph.edges) {
    if (e.object == node_id) in_deg += 1.0;
    if (e.subject == node_id) {
      out_deg += 1.0;
      for (Relation r : e.relations.to_vector()) hist[static_cast<std::size_t>(r)] += 1.0;
    }
  }
  auto scaled = [](double c) { return std::min(1.0, c / kConditionCountScale); };
  f[base] = scaled(in_deg);
  f[base + 1] = scaled(out_deg);
  for (std::size_t r = 0; r < kRelationCount; ++r) f[base + 2 + static_cast<Eigen::Index>(r)] = scaled(hist[r]);
  return f;
}

namespace {

BoxCode clamp_box_code(BoxCode code) {
  for (int i = 0; i < 3; ++i) code[i] = std::clamp(code[i], 0.0, 1.0);
  for (int i = 3; i < 6; ++i) code[i] = std::clamp(code[i], -5.0, 5.0);
  for (int i = 6; i < 8; ++i) code[i] = std::clamp(code[i], -1.0, 1.0);
  return code;
}

void check_model(const Denoiser* model, int dim, int cond_dim, const char* branch) {
  if (model == nullptr) fail(ErrorCode::kInvalidInput, std::string(branch) + " denoiser missing");
  if (model->dim() != dim || model->cond_dim() != cond_dim) {
    fail(ErrorCode::kShapeMismatch, std::string(branch) + " denoiser expects dim " +
                                        std::to_string(model->dim()) + " / cond " +
                                        std::to_string(model->cond_dim()) + ", need " +
                                        std::to_string(dim) + " / " + std::to_string(cond_dim));
  }
}

struct Draw {
  std::vector<Box3D> boxes;
  std::vector<Trajectory> trajectories;  // objects first, ego last
  double score = 0.0;
  int collisions = 0;
};

}  // namespace

LayoutSample sample_layout(const SceneGraph& graph, const LayoutModels& models,
                           const NoiseSchedule& schedule, const LayoutSamplerConfig& cfg,
                           std::uint64_t seed) {
  graph.validate();
  if (cfg.horizon < 1 || cfg.num_points < 0 || cfg.reject_k < 0) {
    fail(ErrorCode::kInvalidInput, "invalid layout sampler configuration");
  }
  const int traj_dim = 2 * cfg.horizon;
  check_model(models.box, kBoxCodeDim, kConditionDim, "box");
  check_model(models.trajectory, traj_dim, kConditionDim + kBoxCodeDim, "trajectory");
  if (cfg.num_points > 0) check_model(models.shape, 4, kBoxCodeDim, "shape");

  std::vector<const SceneNode*> objects;
  for (const auto& n : graph.nodes) {
    if (n.id != 0) objects.push_back(&n);
  }
  const auto m = static_cast<Eigen::Index>(objects.size());

  MatrixXd box_cond(m, kConditionDim);
  for (Eigen::Index i = 0; i < m; ++i) box_cond.row(i) = featurize_condition(graph, objects[static_cast<std::size_t>(i)]->id).transpose();
  const VectorXd ego_cond = featurize_condition(graph, 0);
  const BoxCode ego_code = encode_box(ego_box(cfg.ego_size), cfg.bounds);

  Rng rng(seed);
  Draw best;
  bool have_best = false;
  int attempts = 0;
  for (int attempt = 0; attempt <= cfg.reject_k; ++attempt) {
    ++attempts;
    Draw d;
    MatrixXd codes = p_sample_loop(*models.box, box_cond, static_cast<int>(m), schedule, cfg.sample_steps, rng);
    MatrixXd traj_cond(m + 1, kConditionDim + kBoxCodeDim);
    for (Eigen::Index i = 0; i < m; ++i) {
      const BoxCode code = clamp_box_code(codes.row(i).transpose());
      d.boxes.push_back(decode_box(code, cfg.bounds));
      traj_cond.row(i) << box_cond.row(i), code.transpose();
    }
    traj_cond.row(m) << ego_cond.transpose(), ego_code.transpose();
    const MatrixXd traj_codes =
        p_sample_loop(*models.trajectory, traj_cond, static_cast<int>(m + 1), schedule, cfg.sample_steps, rng);
    for (Eigen::Index i = 0; i <= m; ++i) {
      const VectorXd c = traj_codes.row(i).transpose().cwiseMax(-1.0).cwiseMin(1.0);
      d.trajectories.push_back(decode_trajectory(c, cfg.displacement_bound));
    }
    const std::vector<Trajectory> obj_traj(d.trajectories.begin(), d.trajectories.begin() + m);
    d.collisions = count_collisions(d.boxes);
    d.score = cfg.penalty_weight * (box_overlap_penalty(d.boxes, cfg.penalty_tau) +
                                    trajectory_overlap_penalty(d.boxes, obj_traj, cfg.penalty_tau));
    const bool better = !have_best || d.score < best.score ||
                        (d.score == best.score && d.collisions < best.collisions);
    if (better) {
      best = std::move(d);
      have_best = true;
    }
    if (best.collisions == 0) break;
  }

  LayoutSample out;
  out.rejections = attempts - 1;
  out.collisions = best.collisions;
  out.score = best.score;
  out.layout.ego_trajectory = best.trajectories.back();
  for (Eigen::Index i = 0; i < m; ++i) {
    const SceneNode& node = *objects[static_cast<std::size_t>(i)];
    LayoutObject obj;
    obj.node_id = node.id;
    obj.category = node.category;
    obj.motion_state = node.motion_state;
    obj.box = best.boxes[static_cast<std::size_t>(i)];
    obj.trajectory = best.trajectories[static_cast<std::size_t>(i)];
    if (cfg.num_points > 0) {
      const BoxCode code = encode_box(obj.box, cfg.bounds);
      const MatrixXd shape_cond = code.transpose().replicate(cfg.num_points, 1);
      const MatrixXd pts = p_sample_loop(*models.shape, shape_cond, cfg.num_points, schedule, cfg.sample_steps, rng);
      obj.shape.points.reserve(static_cast<std::size_t>(cfg.num_points));
      for (Eigen::Index r = 0; r < pts.rows(); ++r) {
        const Eigen::Vector4d v = pts.row(r).transpose().cwiseMax(-1.0).cwiseMin(1.0);
        obj.shape.push_back({v[0], v[1], v[2], v[3]});
      }
    }
    out.layout.objects.push_back(std::move(obj));
  }
  return out;
}

}  // namespace lidargen
