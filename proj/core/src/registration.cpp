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

#include "lidargen/registration.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lidargen/errors.hpp"
#include "lidargen/kdtree.hpp"
#include "lidargen/metrics.hpp"

namespace lidargen {

namespace {

void check_spread(const std::vector<Vec3>& pts, const char* what) {
  if (pts.size() < 3) fail(ErrorCode::kDegenerate, std::string(what) + " needs at least 3 points");
  Vec3 mean = Vec3::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> es(cov, Eigen::EigenvaluesOnly);
  const Vec3 ev = es.eigenvalues();  // ascending
  if (!(ev[2] > 0.0) || ev[1] <= 1e-12 * ev[2]) {
    fail(ErrorCode::kDegenerate, std::string(what) + " points are collinear");
  }
}

}  // namespace

Pose fit_rigid(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
  if (src.size() != dst.size()) fail(ErrorCode::kShapeMismatch, "rigid fit needs paired points");
  check_spread(src, "rigid fit");
  const double n = static_cast<double>(src.size());
  Vec3 cs = Vec3::Zero();
  Vec3 cd = Vec3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    cs += src[i];
    cd += dst[i];
  }
  cs /= n;
  cd /= n;
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) h += (src[i] - cs) * (dst[i] - cd).transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 fix = Mat3::Identity();
  fix(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Mat3 r = svd.matrixV() * fix * svd.matrixU().transpose();
  return Pose::unchecked(r, cd - r * cs);
}

IcpResult icp(const std::vector<Vec3>& source, const std::vector<Vec3>& target, const IcpConfig& cfg,
              const Pose& initial) {
  check_spread(source, "ICP source");
  check_spread(target, "ICP target");
  const KdTree3 tree(target);
  const double max_sq = cfg.max_correspondence_distance > 0.0
                            ? cfg.max_correspondence_distance * cfg.max_correspondence_distance
                            : std::numeric_limits<double>::infinity();
  IcpResult res;
  res.transform = initial;
  std::vector<Vec3> src;
  std::vector<Vec3> dst;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    src.clear();
    dst.clear();
    double sum = 0.0;
    for (const auto& p : source) {
      const auto hit = tree.nearest(res.transform.apply(p));
      if (hit.sq_dist > max_sq) continue;
      src.push_back(p);
      dst.push_back(tree.point(hit.index));
      sum += hit.sq_dist;
    }
    if (src.size() < 3) fail(ErrorCode::kDegenerate, "ICP lost its correspondences");
    const double mse = sum / static_cast<double>(src.size());
    if (!res.mse.empty() && res.mse.back() - mse < cfg.tolerance) {
      res.mse.push_back(mse);
      res.converged = true;
      break;
    }
    res.mse.push_back(mse);
    res.transform = fit_rigid(src, dst);
    res.iterations = iter + 1;
  }
  return res;
}

IcpResult icp(const PointCloud& source, const PointCloud& target, const IcpConfig& cfg, const Pose& initial) {
  return icp(source.positions(), target.positions(), cfg, initial);
}

PoseError pose_error(const Pose& predicted, const Pose& truth) {
  return {(predicted.rotation() * truth.rotation().transpose() - Mat3::Identity()).norm(),
          (predicted.translation() - truth.translation()).norm()};
}

Pose frame_to_frame(const Pose& g_a, const Pose& g_b) { return g_a.inverse() * g_b; }

PoseError ttce_from_estimates(const std::vector<Pose>& estimated, const std::vector<Pose>& gt_poses) {
  if (gt_poses.size() < 2 || estimated.size() + 1 != gt_poses.size()) {
    fail(ErrorCode::kInvalidInput, "need one estimate per consecutive frame pair");
  }
  PoseError mean;
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    const PoseError e = pose_error(estimated[i], frame_to_frame(gt_poses[i], gt_poses[i + 1]));
    mean.rotation += e.rotation;
    mean.translation += e.translation;
  }
  mean.rotation /= static_cast<double>(estimated.size());
  mean.translation /= static_cast<double>(estimated.size());
  return mean;
}

PointCloud drop_below(const PointCloud& cloud, double height) {
  PointCloud out;
  for (const auto& p : cloud) {
    if (p.z > height) out.push_back(p);
  }
  return out;
}

PoseError ttce(const SceneSequence& sequence, const std::vector<Pose>& gt_poses, const TtceConfig& cfg) {
  if (sequence.size() < 2) fail(ErrorCode::kInvalidInput, "TTCE needs at least two frames");
  if (gt_poses.size() != sequence.size()) fail(ErrorCode::kInvalidInput, "one pose per frame required");
  std::vector<Pose> est;
  for (std::size_t t = 0; t + 1 < sequence.size(); ++t) {
    const PointCloud& src = sequence.frames[t + 1].cloud;
    const PointCloud& dst = sequence.frames[t].cloud;
    if (cfg.ground_cut) {
      est.push_back(icp(drop_below(src, *cfg.ground_cut), drop_below(dst, *cfg.ground_cut), cfg.icp).transform);
    } else {
      est.push_back(icp(src, dst, cfg.icp).transform);
    }
  }
  return ttce_from_estimates(est, gt_poses);
}

double ctc(const SceneSequence& sequence, const std::vector<Pose>& gt_poses, std::size_t k) {
  if (k < 1 || sequence.size() <= k) fail(ErrorCode::kInvalidInput, "CTC needs more than k frames");
  if (gt_poses.size() != sequence.size()) fail(ErrorCode::kInvalidInput, "one pose per frame required");
  double sum = 0.0;
  const std::size_t pairs = sequence.size() - k;
  for (std::size_t t = 0; t < pairs; ++t) {
    const PointCloud aligned = transform_points(sequence.frames[t + k].cloud, frame_to_frame(gt_poses[t], gt_poses[t + k]));
    sum += chamfer(sequence.frames[t].cloud, aligned);
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace lidargen
