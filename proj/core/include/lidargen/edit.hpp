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
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "lidargen/diffusion.hpp"
#include "lidargen/layout.hpp"
#include "lidargen/range_codec.hpp"

namespace lidargen {

enum class EditKind : std::uint8_t { kInsert, kDelete, kDrag, kRetrajectory };

std::string_view edit_kind_name(EditKind kind);
std::optional<EditKind> parse_edit_kind(std::string_view name);

struct EditOp {
  EditKind kind = EditKind::kDelete;
  int target = 0;                    // ignored by insert
  std::optional<LayoutObject> node;  // insert; node_id <= 0 picks max id + 1
  Vec3 displacement = Vec3::Zero();  // drag
  std::optional<Trajectory> trajectory;  // retrajectory

  static EditOp insert(LayoutObject node);
  static EditOp remove(int target);
  static EditOp drag(int target, const Vec3& displacement);
  static EditOp retrajectory(int target, Trajectory trajectory);
};

struct EditResult {
  Layout4D layout;
  /// Unordered node pairs overlapping (IoU > 0) at t = 0 that involve the
  /// edited node.
  std::vector<std::pair<int, int>> collisions;
};

/// Throws kLookup for unknown targets and kInvalidInput for malformed payloads
/// (missing fields, trajectory length mismatch, duplicate ids).
EditResult apply_edit(const Layout4D& layout, const EditOp& op);

/// Applies the ops in order; collisions accumulate.
EditResult apply_edits(const Layout4D& layout, const std::vector<EditOp>& ops);

/// Node ids whose box or trajectory differs, or which exist in only one
/// layout. Ascending.
std::vector<int> changed_nodes(const Layout4D& before, const Layout4D& after);

struct EditMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;  // row-major, 0 or 1

  EditMask() = default;
  EditMask(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0) {}
  std::uint8_t at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)];
  }
  void set(int row, int col, std::uint8_t v) {
    values[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)] = v;
  }
  std::size_t count() const;
  bool operator==(const EditMask&) const = default;
};

/// Pixels whose center ray meets the box (any positive distance).
EditMask ray_hit_mask(const std::vector<Box3D>& boxes, const SensorConfig& cfg);

/// Square (Chebyshev) dilation; columns wrap around in azimuth.
EditMask dilate(const EditMask& mask, int radius);

/// Ray-hit pixels of every changed node at step t (old and new boxes, ego
/// frame), dilated by `dilation` pixels.
EditMask edit_mask(const Layout4D& before, const Layout4D& after, const SensorConfig& cfg, int dilation = 2,
                   std::size_t t = 0);

/// Rows are pixels, columns channels. `mask` holds one value per row.
/// Returns (1 - m) * d_tilde + m * d_hat with
/// d_tilde = sqrt(ab_prev) x0_orig + sqrt(1 - ab_prev) z, z ~ N(0, I).
MatrixXd inpaint_blend(const MatrixXd& d_hat, const MatrixXd& x0_orig, const VectorXd& mask, int t_prev,
                       const NoiseSchedule& schedule, Rng& rng);

/// Produces the freshly denoised sample at t_prev from the current state.
using ProposalFn = std::function<MatrixXd(const MatrixXd& x_t, int t, int t_prev, Rng& rng)>;

/// Reverse loop over the respaced timesteps with the blend applied at every
/// step. Starts from pure noise.
MatrixXd inpaint_loop(const MatrixXd& x0_orig, const VectorXd& mask, const ProposalFn& propose,
                      const NoiseSchedule& schedule, int sample_steps, Rng& rng);

/// Proposal from a trained or oracle denoiser (one ancestral step).
ProposalFn denoiser_proposal(const Denoiser& denoiser, const MatrixXd& cond, const NoiseSchedule& schedule);
/// Proposal that noises a known clean target to t_prev, used when the
/// simulator renders the edited scene.
ProposalFn target_proposal(MatrixXd target, const NoiseSchedule& schedule);

/// (H*W) x C view of a tensor and back.
MatrixXd tensor_to_matrix(const RangeTensor& tensor);
RangeTensor matrix_to_tensor(const MatrixXd& m, int height, int width);
VectorXd mask_vector(const EditMask& mask);

struct InpaintResult {
  RangeImage image;
  MatrixXd final_state;  // blended tensor after the last step
};

/// Re-generates the masked pixels of `original` with the simulator render
/// `target` of the edited layout. Pixels outside the mask are copied from
/// `original`, which is what the blend yields once alpha_bar reaches 1.
InpaintResult resynthesize(const RangeImage& original, const RangeImage& target, const EditMask& mask,
                           const SensorConfig& cfg, const NoiseSchedule& schedule, int sample_steps, Rng& rng);

}  // namespace lidargen
