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

#include "lidargen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "lidargen/errors.hpp"
#include "lidargen/kdtree.hpp"

namespace lidargen {

BevHistogram bev_histogram(const PointCloud& cloud, const BevGridSpec& grid) {
  if (grid.bins < 1 || !(grid.max_x > grid.min_x) || !(grid.max_y > grid.min_y)) {
    fail(ErrorCode::kInvalidInput, "invalid BEV grid");
  }
  BevHistogram h;
  h.grid = grid;
  const auto bins = static_cast<std::size_t>(grid.bins);
  h.mass.assign(bins * bins, 0.0);
  auto bin_of = [&](double v, double lo, double hi) {
    const auto b = static_cast<int>(std::floor((v - lo) / (hi - lo) * grid.bins));
    return std::min(b, grid.bins - 1);
  };
  std::size_t kept = 0;
  for (const auto& p : cloud) {
    if (p.x < grid.min_x || p.x > grid.max_x || p.y < grid.min_y || p.y > grid.max_y) continue;
    const auto col = static_cast<std::size_t>(bin_of(p.x, grid.min_x, grid.max_x));
    const auto row = static_cast<std::size_t>(bin_of(p.y, grid.min_y, grid.max_y));
    h.mass[row * bins + col] += 1.0;
    ++kept;
  }
  if (kept > 0) {
    h.empty = false;
    for (double& m : h.mass) m /= static_cast<double>(kept);
  }
  return h;
}

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) fail(ErrorCode::kShapeMismatch, "JSD inputs differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) sum += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) sum += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::max(0.0, sum);
}

double jsd(const BevHistogram& p, const BevHistogram& q) {
  if (p.grid.bins != q.grid.bins) fail(ErrorCode::kShapeMismatch, "BEV histograms differ in bins");
  return jsd(p.mass, q.mass);
}

namespace {

void check_samples(const MatrixXd& x, const MatrixXd& y) {
  if (x.rows() == 0 || y.rows() == 0) fail(ErrorCode::kInvalidInput, "MMD needs non-empty sample sets");
  if (x.cols() != y.cols()) fail(ErrorCode::kShapeMismatch, "MMD samples differ in dimension");
}

double mean_kernel(const MatrixXd& a, const MatrixXd& b, const KernelConfig& k, double sigma) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      if (k.kind == KernelKind::kLinear) {
        sum += a.row(i).dot(b.row(j));
      } else {
        sum += std::exp(-(a.row(i) - b.row(j)).squaredNorm() / (2.0 * sigma * sigma));
      }
    }
  }
  return sum / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}

}  // namespace

double median_heuristic_sigma(const MatrixXd& x, const MatrixXd& y) {
  MatrixXd z(x.rows() + y.rows(), x.cols());
  z << x, y;
  std::vector<double> d;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < z.rows(); ++j) d.push_back((z.row(i) - z.row(j)).norm());
  }
  if (d.empty()) return 1.0;
  std::sort(d.begin(), d.end());
  const std::size_t n = d.size();
  const double med = n % 2 == 1 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
  return med > 0.0 ? med : 1.0;
}

double mmd(const MatrixXd& x, const MatrixXd& y, const KernelConfig& kernel) {
  check_samples(x, y);
  const double sigma =
      kernel.kind == KernelKind::kGaussian && kernel.sigma <= 0.0 ? median_heuristic_sigma(x, y) : kernel.sigma;
  const double v = mean_kernel(x, x, kernel, sigma) + mean_kernel(y, y, kernel, sigma) -
                   2.0 * mean_kernel(x, y, kernel, sigma);
  return std::max(0.0, v);
}

VectorXd FeatureSet::mean() const {
  if (features.rows() == 0) fail(ErrorCode::kInvalidInput, "feature set is empty");
  return features.colwise().mean().transpose();
}

MatrixXd FeatureSet::covariance() const {
  const VectorXd mu = mean();
  const Eigen::Index n = features.rows();
  if (n < 2) return MatrixXd::Zero(features.cols(), features.cols());
  const MatrixXd centered = features.rowwise() - mu.transpose();
  return centered.transpose() * centered / static_cast<double>(n - 1);
}

MatrixXd psd_sqrt(const MatrixXd& m) {
  const MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  if (es.info() != Eigen::Success) fail(ErrorCode::kNumeric, "eigendecomposition failed");
  VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-8) fail(ErrorCode::kNumeric, "matrix is not positive semidefinite");
    ev[i] = std::sqrt(std::max(0.0, ev[i]));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double frechet(const VectorXd& mu_g, const MatrixXd& sigma_g, const VectorXd& mu_r, const MatrixXd& sigma_r) {
  const Eigen::Index d = mu_g.size();
  if (mu_r.size() != d || sigma_g.rows() != d || sigma_g.cols() != d || sigma_r.rows() != d || sigma_r.cols() != d) {
    fail(ErrorCode::kShapeMismatch, "Frechet inputs differ in dimension");
  }
  const MatrixXd root_g = psd_sqrt(sigma_g);
  const MatrixXd inner = root_g * sigma_r * root_g;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (inner + inner.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::kNumeric, "eigendecomposition failed");
  double trace_root = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (ev < -1e-8) fail(ErrorCode::kNumeric, "covariance product is not positive semidefinite");
    trace_root += std::sqrt(std::max(0.0, ev));
  }
  const double value = (mu_g - mu_r).squaredNorm() + sigma_g.trace() + sigma_r.trace() - 2.0 * trace_root;
  return std::max(0.0, value);
}

double frechet(const FeatureSet& generated, const FeatureSet& reference) {
  if (generated.features.cols() != reference.features.cols()) {
    fail(ErrorCode::kShapeMismatch, "feature sets differ in dimension");
  }
  return frechet(generated.mean(), generated.covariance(), reference.mean(), reference.covariance());
}

namespace {

double directed_mean_sq(const std::vector<Vec3>& from, const KdTree3& to) {
  double sum = 0.0;
  for (const auto& p : from) sum += to.nearest(p).sq_dist;
  return sum / static_cast<double>(from.size());
}

}  // namespace

double chamfer(const std::vector<Vec3>& x, const std::vector<Vec3>& y) {
  if (x.empty() || y.empty()) fail(ErrorCode::kInvalidInput, "Chamfer distance needs non-empty sets");
  const KdTree3 tx(x);
  const KdTree3 ty(y);
  return directed_mean_sq(x, ty) + directed_mean_sq(y, tx);
}

double chamfer(const PointCloud& x, const PointCloud& y) { return chamfer(x.positions(), y.positions()); }

VectorXd range_patch_features(const RangeImage& image, const SensorConfig& cfg, int patch_rows, int patch_cols) {
  if (patch_rows < 1 || patch_cols < 1 || image.height() % patch_rows != 0 || image.width() % patch_cols != 0) {
    fail(ErrorCode::kInvalidInput, "patch size must tile the image");
  }
  const int pr = image.height() / patch_rows;
  const int pc = image.width() / patch_cols;
  VectorXd f = VectorXd::Zero(2 * pr * pc);
  for (int i = 0; i < pr; ++i) {
    for (int j = 0; j < pc; ++j) {
      double sum = 0.0;
      int valid = 0;
      for (int r = i * patch_rows; r < (i + 1) * patch_rows; ++r) {
        for (int c = j * patch_cols; c < (j + 1) * patch_cols; ++c) {
          if (!image.valid(r, c)) continue;
          sum += normalize_depth(std::min<double>(image.depth(r, c), cfg.max_range), cfg);
          ++valid;
        }
      }
      const int k = i * pc + j;
      f[2 * k] = valid > 0 ? sum / valid : 0.0;
      f[2 * k + 1] = static_cast<double>(valid) / (patch_rows * patch_cols);
    }
  }
  return f;
}

VectorXd point_features(const PointCloud& cloud) {
  VectorXd f = VectorXd::Zero(68);
  const BevHistogram h = bev_histogram(cloud, BevGridSpec{-40.0, 40.0, -40.0, 40.0, 8});
  for (std::size_t i = 0; i < h.mass.size(); ++i) f[static_cast<Eigen::Index>(i)] = h.mass[i];
  if (cloud.empty()) return f;
  double sz = 0, szz = 0, sr = 0, srr = 0;
  for (const auto& p : cloud) {
    const double r = std::hypot(p.x, p.y);
    sz += p.z;
    szz += p.z * p.z;
    sr += r;
    srr += r * r;
  }
  const double n = static_cast<double>(cloud.size());
  f[64] = sz / n;
  f[65] = std::sqrt(std::max(0.0, szz / n - f[64] * f[64]));
  f[66] = sr / n;
  f[67] = std::sqrt(std::max(0.0, srr / n - f[66] * f[66]));
  return f;
}

std::vector<FdcEntry> fdc(const std::vector<DetectionRecord>& detections, const std::vector<std::string>& classes) {
  std::vector<FdcEntry> out;
  for (const auto& cls : classes) {
    FdcEntry e{cls, std::nullopt, 0};
    double sum = 0.0;
    for (const auto& d : detections) {
      if (d.category != cls) continue;
      sum += d.confidence;
      ++e.count;
    }
    if (e.count > 0) e.mean_confidence = sum / static_cast<double>(e.count);
    out.push_back(e);
  }
  return out;
}

double average_precision(const std::vector<DetectionRecord>& detections,
                         const std::vector<GroundTruthRecord>& ground_truth, double iou_threshold, ApMode mode,
                         MatchSpace space) {
  if (ground_truth.empty() || detections.empty()) return 0.0;
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });
  std::vector<bool> taken(ground_truth.size(), false);
  std::vector<double> precision;
  std::vector<double> recall;
  std::size_t tp = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const DetectionRecord& det = detections[order[rank]];
    double best_iou = -1.0;
    std::size_t best = ground_truth.size();
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (taken[g] || ground_truth[g].frame_id != det.frame_id) continue;
      const double iou = space == MatchSpace::kBev ? iou_bev(det.box, ground_truth[g].box)
                                                   : iou_3d(det.box, ground_truth[g].box);
      if (iou > best_iou) {
        best_iou = iou;
        best = g;
      }
    }
    if (best < ground_truth.size() && best_iou >= iou_threshold) {
      taken[best] = true;
      ++tp;
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(rank + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(ground_truth.size()));
  }
  std::vector<double> points;
  if (mode == ApMode::kR11) {
    for (int i = 0; i <= 10; ++i) points.push_back(i / 10.0);
  } else {
    for (int i = 1; i <= 40; ++i) points.push_back(i / 40.0);
  }
  double ap = 0.0;
  for (double r : points) {
    double best = 0.0;
    for (std::size_t i = 0; i < recall.size(); ++i) {
      if (recall[i] >= r - 1e-12) best = std::max(best, precision[i]);
    }
    ap += best;
  }
  return ap / static_cast<double>(points.size());
}

double cfca(const std::vector<std::string>& predicted, const std::vector<std::string>& truth) {
  if (predicted.size() != truth.size()) fail(ErrorCode::kShapeMismatch, "label lists differ in length");
  if (truth.empty()) fail(ErrorCode::kInvalidInput, "no labels to compare");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double cfsc(const std::vector<std::vector<Box3D>>& samples, const std::vector<Box3D>& truth) {
  if (samples.size() != truth.size()) fail(ErrorCode::kShapeMismatch, "sample and truth lists differ in length");
  if (truth.empty()) fail(ErrorCode::kInvalidInput, "no objects to compare");
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (samples[i].empty()) fail(ErrorCode::kInvalidInput, "object " + std::to_string(i) + " has no samples");
    double s = 0.0;
    for (const auto& b : samples[i]) s += iou_3d(b, truth[i]);
    total += s / static_cast<double>(samples[i].size());
  }
  return total / static_cast<double>(truth.size());
}

namespace {

Box3D node_box(const Layout4D& layout, int id, const Vec3& ego_size) {
  if (id == 0) return ego_box(ego_size);
  return layout.object(id).box;
}

}  // namespace

double scr(const Layout4D& layout, const SceneGraph& graph, const RelationConfig& cfg, const Vec3& ego_size) {
  if (graph.edges.empty()) return 1.0;
  std::size_t consistent = 0;
  for (const auto& e : graph.edges) {
    const RelationSet got = relate(node_box(layout, e.subject, ego_size), node_box(layout, e.object, ego_size), cfg);
    if (got == e.relations) ++consistent;
  }
  return static_cast<double>(consistent) / static_cast<double>(graph.edges.size());
}

double mscr(const Layout4D& layout, const SceneGraph& graph, const MotionConfig& cfg) {
  if (layout.objects.empty()) return 1.0;
  std::size_t match = 0;
  for (const auto& o : layout.objects) {
    if (classify_motion(o.trajectory, cfg) == graph.node(o.node_id).motion_state) ++match;
  }
  return static_cast<double>(match) / static_cast<double>(layout.objects.size());
}

double bcr(const std::vector<std::vector<Box3D>>& frames) {
  std::size_t pairs = 0;
  std::size_t colliding = 0;
  for (const auto& boxes : frames) {
    const std::size_t n = boxes.size();
    pairs += n * (n > 0 ? n - 1 : 0) / 2;
    colliding += static_cast<std::size_t>(count_collisions(boxes));
  }
  return pairs == 0 ? 0.0 : static_cast<double>(colliding) / static_cast<double>(pairs);
}

std::vector<std::vector<Box3D>> propagate_boxes(const std::vector<Box3D>& boxes,
                                                const std::vector<Trajectory>& trajectories) {
  if (boxes.size() != trajectories.size()) fail(ErrorCode::kInvalidInput, "boxes and trajectories differ in count");
  std::vector<std::vector<Box3D>> frames;
  if (boxes.empty()) return frames;
  const std::size_t horizon = trajectories.front().steps();
  for (const auto& tr : trajectories) {
    if (tr.steps() != horizon) fail(ErrorCode::kInvalidInput, "trajectory lengths differ");
  }
  for (std::size_t t = 1; t <= horizon; ++t) {
    std::vector<Box3D> at_t;
    for (std::size_t i = 0; i < boxes.size(); ++i) at_t.push_back(box_at_step(boxes[i], trajectories[i], t));
    frames.push_back(std::move(at_t));
  }
  return frames;
}

double tcr(const std::vector<Box3D>& boxes, const std::vector<Trajectory>& trajectories) {
  const auto frames = propagate_boxes(boxes, trajectories);
  const std::size_t n = boxes.size();
  if (n < 2) return 0.0;
  std::size_t colliding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool hit = std::any_of(frames.begin(), frames.end(),
                                   [&](const std::vector<Box3D>& f) { return iou_3d(f[i], f[j]) > 0.0; });
      colliding += hit ? 1 : 0;
    }
  }
  return static_cast<double>(colliding) / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace lidargen
