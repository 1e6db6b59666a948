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

#include "lidargen/edit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "lidargen/errors.hpp"
#include "lidargen/synth.hpp"
#include "lidargen/warp.hpp"

namespace lidargen {

namespace {
constexpr std::array<std::string_view, 4> kEditNames = {"insert", "delete", "drag", "retrajectory"};
}  // namespace

std::string_view edit_kind_name(EditKind kind) { return kEditNames[static_cast<std::size_t>(kind)]; }

std::optional<EditKind> parse_edit_kind(std::string_view name) {
  for (std::size_t i = 0; i < kEditNames.size(); ++i) {
    if (kEditNames[i] == name) return static_cast<EditKind>(i);
  }
  return std::nullopt;
}

EditOp EditOp::insert(LayoutObject node) {
  EditOp op;
  op.kind = EditKind::kInsert;
  op.node = std::move(node);
  return op;
}

EditOp EditOp::remove(int target) {
  EditOp op;
  op.kind = EditKind::kDelete;
  op.target = target;
  return op;
}

EditOp EditOp::drag(int target, const Vec3& displacement) {
  EditOp op;
  op.kind = EditKind::kDrag;
  op.target = target;
  op.displacement = displacement;
  return op;
}

EditOp EditOp::retrajectory(int target, Trajectory trajectory) {
  EditOp op;
  op.kind = EditKind::kRetrajectory;
  op.target = target;
  op.trajectory = std::move(trajectory);
  return op;
}

namespace {

std::size_t find_index(const Layout4D& layout, int id) {
  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    if (layout.objects[i].node_id == id) return i;
  }
  fail(ErrorCode::kLookup, "edit target " + std::to_string(id) + " is not in the layout");
}

std::vector<std::pair<int, int>> collisions_with(const Layout4D& layout, int id) {
  std::vector<std::pair<int, int>> out;
  const LayoutObject& target = layout.object(id);
  for (const auto& o : layout.objects) {
    if (o.node_id == id) continue;
    if (iou_3d(target.box, o.box) > 0.0) {
      out.emplace_back(std::min(id, o.node_id), std::max(id, o.node_id));
    }
  }
  return out;
}

}  // namespace

EditResult apply_edit(const Layout4D& layout, const EditOp& op) {
  EditResult res{layout, {}};
  Layout4D& out = res.layout;
  const std::size_t horizon = layout.horizon();
  int edited = op.target;
  switch (op.kind) {
    case EditKind::kInsert: {
      if (!op.node) fail(ErrorCode::kInvalidInput, "insert edit needs a node");
      LayoutObject node = *op.node;
      if (node.node_id <= 0) {
        int max_id = 0;
        for (const auto& o : out.objects) max_id = std::max(max_id, o.node_id);
        node.node_id = max_id + 1;
      }
      for (const auto& o : out.objects) {
        if (o.node_id == node.node_id) {
          fail(ErrorCode::kInvalidInput, "insert edit reuses node id " + std::to_string(node.node_id));
        }
      }
      if (node.trajectory.steps() == 0) node.trajectory = Trajectory::stationary(horizon);
      if (node.trajectory.steps() != horizon) {
        fail(ErrorCode::kInvalidInput, "inserted trajectory length differs from the layout horizon");
      }
      edited = node.node_id;
      out.objects.push_back(std::move(node));
      break;
    }
    case EditKind::kDelete:
      out.objects.erase(out.objects.begin() + static_cast<std::ptrdiff_t>(find_index(out, op.target)));
      return res;
    case EditKind::kDrag: {
      if (!op.displacement.allFinite()) fail(ErrorCode::kInvalidInput, "drag displacement must be finite");
      LayoutObject& o = out.objects[find_index(out, op.target)];
      o.box = o.box.with_center(o.box.center() + op.displacement);
      break;
    }
    case EditKind::kRetrajectory: {
      if (!op.trajectory) fail(ErrorCode::kInvalidInput, "retrajectory edit needs a trajectory");
      if (op.trajectory->steps() != horizon) {
        fail(ErrorCode::kInvalidInput, "new trajectory length differs from the layout horizon");
      }
      validate_trajectory(*op.trajectory);
      out.objects[find_index(out, op.target)].trajectory = *op.trajectory;
      break;
    }
  }
  res.collisions = collisions_with(out, edited);
  return res;
}

EditResult apply_edits(const Layout4D& layout, const std::vector<EditOp>& ops) {
  EditResult acc{layout, {}};
  for (const auto& op : ops) {
    EditResult step = apply_edit(acc.layout, op);
    acc.layout = std::move(step.layout);
    acc.collisions.insert(acc.collisions.end(), step.collisions.begin(), step.collisions.end());
  }
  return acc;
}

std::vector<int> changed_nodes(const Layout4D& before, const Layout4D& after) {
  std::set<int> changed;
  for (const auto& o : before.objects) {
    const auto it = std::find_if(after.objects.begin(), after.objects.end(),
                                 [&](const LayoutObject& n) { return n.node_id == o.node_id; });
    if (it == after.objects.end() || !(it->box == o.box) || !(it->trajectory == o.trajectory)) {
      changed.insert(o.node_id);
    }
  }
  for (const auto& o : after.objects) {
    const bool existed = std::any_of(before.objects.begin(), before.objects.end(),
                                     [&](const LayoutObject& n) { return n.node_id == o.node_id; });
    if (!existed) changed.insert(o.node_id);
  }
  return {changed.begin(), changed.end()};
}

std::size_t EditMask::count() const {
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::uint8_t{1}));
}

EditMask ray_hit_mask(const std::vector<Box3D>& boxes, const SensorConfig& cfg) {
  cfg.validate();
  EditMask mask(cfg.height, cfg.width);
  if (boxes.empty()) return mask;
  const Vec3 origin = Vec3::Zero();
  for (int row = 0; row < cfg.height; ++row) {
    for (int col = 0; col < cfg.width; ++col) {
      const Vec3 ray = pixel_ray(row, col, cfg);
      for (const auto& b : boxes) {
        if (intersect_ray_obb(origin, ray, b)) {
          mask.set(row, col, 1);
          break;
        }
      }
    }
  }
  return mask;
}

EditMask dilate(const EditMask& mask, int radius) {
  if (radius < 0) fail(ErrorCode::kInvalidInput, "dilation radius must be non-negative");
  if (radius == 0) return mask;
  EditMask out(mask.height, mask.width);
  for (int row = 0; row < mask.height; ++row) {
    for (int col = 0; col < mask.width; ++col) {
      if (!mask.at(row, col)) continue;
      for (int dr = -radius; dr <= radius; ++dr) {
        const int r = row + dr;
        if (r < 0 || r >= mask.height) continue;
        for (int dc = -radius; dc <= radius; ++dc) {
          const int c = ((col + dc) % mask.width + mask.width) % mask.width;
          out.set(r, c, 1);
        }
      }
    }
  }
  return out;
}

EditMask edit_mask(const Layout4D& before, const Layout4D& after, const SensorConfig& cfg, int dilation,
                   std::size_t t) {
  std::vector<Box3D> boxes;
  for (int id : changed_nodes(before, after)) {
    for (const Layout4D* l : {&before, &after}) {
      for (const auto& o : l->objects) {
        if (o.node_id == id) boxes.push_back(object_box_at(o.box, o.trajectory, l->ego_trajectory, t));
      }
    }
  }
  return dilate(ray_hit_mask(boxes, cfg), dilation);
}

MatrixXd inpaint_blend(const MatrixXd& d_hat, const MatrixXd& x0_orig, const VectorXd& mask, int t_prev,
                       const NoiseSchedule& schedule, Rng& rng) {
  if (d_hat.rows() != x0_orig.rows() || d_hat.cols() != x0_orig.cols() || mask.size() != d_hat.rows()) {
    fail(ErrorCode::kShapeMismatch, "inpaint blend inputs differ in shape");
  }
  MatrixXd z(x0_orig.rows(), x0_orig.cols());
  rng.fill_normal(std::span<double>(z.data(), static_cast<std::size_t>(z.size())));
  const MatrixXd d_tilde = q_sample(x0_orig, t_prev, z, schedule);
  MatrixXd out(d_hat.rows(), d_hat.cols());
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    out.row(r) = (1.0 - mask[r]) * d_tilde.row(r) + mask[r] * d_hat.row(r);
  }
  return out;
}

MatrixXd inpaint_loop(const MatrixXd& x0_orig, const VectorXd& mask, const ProposalFn& propose,
                      const NoiseSchedule& schedule, int sample_steps, Rng& rng) {
  const auto taus = respaced_timesteps(schedule.steps, sample_steps);
  MatrixXd x(x0_orig.rows(), x0_orig.cols());
  rng.fill_normal(std::span<double>(x.data(), static_cast<std::size_t>(x.size())));
  for (std::size_t k = taus.size() - 1; k >= 1; --k) {
    const MatrixXd d_hat = propose(x, taus[k], taus[k - 1], rng);
    x = inpaint_blend(d_hat, x0_orig, mask, taus[k - 1], schedule, rng);
  }
  return x;
}

ProposalFn denoiser_proposal(const Denoiser& denoiser, const MatrixXd& cond, const NoiseSchedule& schedule) {
  return [&denoiser, cond, schedule](const MatrixXd& x_t, int t, int t_prev, Rng& rng) {
    const MatrixXd eps_hat = denoiser.predict(x_t, t, cond);
    MatrixXd noise(x_t.rows(), x_t.cols());
    if (t_prev > 0) rng.fill_normal(std::span<double>(noise.data(), static_cast<std::size_t>(noise.size())));
    return p_sample_step(x_t, eps_hat, t, t_prev, schedule, noise);
  };
}

ProposalFn target_proposal(MatrixXd target, const NoiseSchedule& schedule) {
  return [target = std::move(target), schedule](const MatrixXd&, int, int t_prev, Rng& rng) {
    MatrixXd noise(target.rows(), target.cols());
    rng.fill_normal(std::span<double>(noise.data(), static_cast<std::size_t>(noise.size())));
    return q_sample(target, t_prev, noise, schedule);
  };
}

MatrixXd tensor_to_matrix(const RangeTensor& tensor) {
  MatrixXd m(static_cast<Eigen::Index>(tensor.height) * tensor.width, tensor.channels);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = tensor.data[static_cast<std::size_t>(r * m.cols() + c)];
    }
  }
  return m;
}

RangeTensor matrix_to_tensor(const MatrixXd& m, int height, int width) {
  if (m.rows() != static_cast<Eigen::Index>(height) * width) {
    fail(ErrorCode::kShapeMismatch, "matrix rows do not match the tensor size");
  }
  RangeTensor t(height, width, static_cast<int>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      t.data[static_cast<std::size_t>(r * m.cols() + c)] = static_cast<float>(m(r, c));
    }
  }
  return t;
}

VectorXd mask_vector(const EditMask& mask) {
  VectorXd v(static_cast<Eigen::Index>(mask.values.size()));
  for (std::size_t i = 0; i < mask.values.size(); ++i) v[static_cast<Eigen::Index>(i)] = mask.values[i];
  return v;
}

InpaintResult resynthesize(const RangeImage& original, const RangeImage& target, const EditMask& mask,
                           const SensorConfig& cfg, const NoiseSchedule& schedule, int sample_steps, Rng& rng) {
  if (original.height() != target.height() || original.width() != target.width() ||
      mask.height != original.height() || mask.width != original.width()) {
    fail(ErrorCode::kShapeMismatch, "inpainting inputs differ in size");
  }
  const MatrixXd x0 = tensor_to_matrix(encode_tensor(original, cfg));
  const MatrixXd x_new = tensor_to_matrix(encode_tensor(target, cfg));
  InpaintResult res;
  res.final_state = inpaint_loop(x0, mask_vector(mask), target_proposal(x_new, schedule), schedule, sample_steps, rng);
  const RangeImage generated = decode_tensor(matrix_to_tensor(res.final_state, original.height(), original.width()), cfg);
  res.image = original;
  for (int row = 0; row < original.height(); ++row) {
    for (int col = 0; col < original.width(); ++col) {
      if (!mask.at(row, col)) continue;
      if (generated.valid(row, col)) {
        res.image.set(row, col, generated.depth(row, col), generated.intensity(row, col));
      } else {
        res.image.clear(row, col);
      }
    }
  }
  return res;
}

}  // namespace lidargen
