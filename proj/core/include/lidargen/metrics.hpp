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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lidargen/geometry.hpp"
#include "lidargen/layout.hpp"
#include "lidargen/range_codec.hpp"
#include "lidargen/scene_graph.hpp"

namespace lidargen {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---- Distribution metrics -------------------------------------------------

struct BevGridSpec {
  double min_x = -80.0;
  double max_x = 80.0;
  double min_y = -80.0;
  double max_y = 80.0;
  int bins = 100;
};

/// Normalized bins x bins mass grid, row index along y, column along x.
struct BevHistogram {
  BevGridSpec grid;
  std::vector<double> mass;
  bool empty = true;  // no point fell inside the grid
};

/// Points outside the grid are dropped; the upper edge belongs to the last bin.
BevHistogram bev_histogram(const PointCloud& cloud, const BevGridSpec& grid = {});

/// Base-2 Jensen-Shannon divergence with 0 log 0 = 0. Throws kShapeMismatch.
double jsd(const std::vector<double>& p, const std::vector<double>& q);
double jsd(const BevHistogram& p, const BevHistogram& q);

enum class KernelKind { kGaussian, kLinear };

struct KernelConfig {
  KernelKind kind = KernelKind::kGaussian;
  /// Gaussian bandwidth; <= 0 selects the median pairwise distance of the
  /// pooled samples (1 if that is zero).
  double sigma = 0.0;
};

/// Biased (V-statistic) squared MMD between sample rows. Throws kInvalidInput
/// on empty sets and kShapeMismatch on differing dimensions.
double mmd(const MatrixXd& x, const MatrixXd& y, const KernelConfig& kernel = {});
double median_heuristic_sigma(const MatrixXd& x, const MatrixXd& y);

struct FeatureSet {
  MatrixXd features;  // n x D

  VectorXd mean() const;
  /// Sample covariance (n - 1 denominator; zero for n = 1).
  MatrixXd covariance() const;
};

/// |mu_g - mu_r|^2 + Tr(S_g + S_r - 2 (S_g^1/2 S_r S_g^1/2)^1/2).
double frechet(const VectorXd& mu_g, const MatrixXd& sigma_g, const VectorXd& mu_r, const MatrixXd& sigma_r);
double frechet(const FeatureSet& generated, const FeatureSet& reference);

/// Symmetric PSD square root by eigendecomposition. Eigenvalues below -1e-8
/// throw kNumeric; smaller negatives are clipped to 0.
MatrixXd psd_sqrt(const MatrixXd& m);

/// Mean squared nearest-neighbor distance X->Y plus Y->X. Throws on empty sets.
double chamfer(const std::vector<Vec3>& x, const std::vector<Vec3>& y);
double chamfer(const PointCloud& x, const PointCloud& y);

/// Handcrafted range-image features: per patch, the mean normalized depth of
/// valid pixels and the valid fraction. Patches tile the image.
VectorXd range_patch_features(const RangeImage& image, const SensorConfig& cfg, int patch_rows = 8,
                              int patch_cols = 128);
/// Handcrafted point features: 8x8 BEV occupancy over +-40 m, then mean and
/// standard deviation of z and of the planar range.
VectorXd point_features(const PointCloud& cloud);

// ---- Object metrics -------------------------------------------------------

struct DetectionRecord {
  std::string frame_id;
  Box3D box;
  std::string category;
  double confidence = 0.0;
};

struct GroundTruthRecord {
  std::string frame_id;
  Box3D box;
  std::string category;
};

struct FdcEntry {
  std::string category;
  std::optional<double> mean_confidence;  // nullopt when the class is absent
  std::size_t count = 0;
};

/// Mean confidence per requested class.
std::vector<FdcEntry> fdc(const std::vector<DetectionRecord>& detections, const std::vector<std::string>& classes);

enum class ApMode { kR11, kR40 };
enum class MatchSpace { kBev, k3D };

/// Greedy confidence-descending matching within each frame (each ground
/// truth matched at most once, best IoU first), then interpolated precision
/// averaged over 11 (0, 0.1, .., 1) or 40 (1/40, .., 1) recall points.
double average_precision(const std::vector<DetectionRecord>& detections,
                         const std::vector<GroundTruthRecord>& ground_truth, double iou_threshold = 0.5,
                         ApMode mode = ApMode::kR11, MatchSpace space = MatchSpace::kBev);

/// Fraction of equal labels. Throws kShapeMismatch / kInvalidInput.
double cfca(const std::vector<std::string>& predicted, const std::vector<std::string>& truth);
/// Mean over objects of the mean IoU between its samples and its truth box.
double cfsc(const std::vector<std::vector<Box3D>>& samples, const std::vector<Box3D>& truth);

// ---- Layout metrics -------------------------------------------------------

/// Fraction of graph edges whose recomputed relation set equals the edge's
/// labels. Layout boxes are frame-0 ego coordinates; node 0 uses ego_box.
/// Graphs without edges score 1. Throws kLookup for unresolvable nodes.
double scr(const Layout4D& layout, const SceneGraph& graph, const RelationConfig& cfg = {},
           const Vec3& ego_size = Vec3(4.0, 1.8, 1.5));

/// Fraction of object trajectories whose classified motion state equals the
/// graph node's state. Layouts without objects score 1.
double mscr(const Layout4D& layout, const SceneGraph& graph, const MotionConfig& cfg = {});

/// Colliding (IoU > 0) unordered pairs over all frames / pairs over all frames.
double bcr(const std::vector<std::vector<Box3D>>& frames);
/// Pairs colliding at any step t = 1..T / all pairs.
double tcr(const std::vector<Box3D>& boxes, const std::vector<Trajectory>& trajectories);
/// Boxes of every object at t = 1..T, one entry per step.
std::vector<std::vector<Box3D>> propagate_boxes(const std::vector<Box3D>& boxes,
                                                const std::vector<Trajectory>& trajectories);

}  // namespace lidargen
