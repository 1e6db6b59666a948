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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lidargen/errors.hpp"
#include "lidargen/metrics.hpp"
#include "lidargen/registration.hpp"
#include "lidargen/rng.hpp"
#include "lidargen/synth.hpp"
#include "lidargen/warp.hpp"
#include "oracles.hpp"

namespace lidargen {
namespace {

constexpr double kPi = std::numbers::pi;

double yaw_of(const Pose& p) { return std::atan2(p.rotation()(1, 0), p.rotation()(0, 0)); }

std::vector<Vec3> random_points(Rng& rng, int n, double half) {
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) {
    pts.emplace_back(rng.uniform(-half, half), rng.uniform(-half, half), rng.uniform(-half, half));
  }
  return pts;
}

std::vector<Vec3> apply(const Pose& p, const std::vector<Vec3>& pts) {
  std::vector<Vec3> out;
  for (const auto& q : pts) out.push_back(p.apply(q));
  return out;
}

TEST(FitRigid, RecoversKnownTransform) {
  Rng rng(1);
  const auto src = random_points(rng, 30, 5.0);
  const Mat3 r = Eigen::AngleAxisd(0.7, Vec3(0.2, -0.5, 1.0).normalized()).toRotationMatrix();
  const Pose truth(r, Vec3(1, -2, 0.5));
  const Pose fit = fit_rigid(src, apply(truth, src));
  EXPECT_LT((fit.matrix() - truth.matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(FitRigid, RejectsDegenerate) {
  EXPECT_THROW(fit_rigid({Vec3(0, 0, 0), Vec3(1, 0, 0)}, {Vec3(0, 0, 0), Vec3(1, 0, 0)}), Error);
  const std::vector<Vec3> line = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)};
  EXPECT_THROW(fit_rigid(line, line), Error);
}

TEST(Icp, IdentityOnSameCloud) {
  Rng rng(2);
  const auto x = random_points(rng, 500, 5.0);
  const IcpResult r = icp(x, x);
  EXPECT_LT((r.transform.matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Icp, RecoversSmallRotationAndShift) {
  Rng rng(3);
  const auto x = random_points(rng, 3000, 5.0);
  const Pose truth = Pose::from_yaw(3.0 * kPi / 180.0, Vec3(0.2, 0, 0));
  const IcpResult r = icp(x, apply(truth, x));
  const PoseError e = pose_error(r.transform, truth);
  EXPECT_LT((r.transform.translation() - truth.translation()).norm(), 0.01);
  EXPECT_LT(std::abs(yaw_of(r.transform) - yaw_of(truth)), 0.005);
  EXPECT_LT(e.rotation, 0.005);
  EXPECT_TRUE(r.converged);
}

TEST(Icp, MseNeverIncreases) {
  Rng rng(4);
  const auto x = random_points(rng, 800, 5.0);
  const Pose truth = Pose::from_yaw(0.08, Vec3(0.4, -0.2, 0.1));
  IcpConfig cfg;
  cfg.max_iterations = 40;
  cfg.tolerance = 0.0;
  const IcpResult r = icp(x, apply(truth, x), cfg);
  ASSERT_GE(r.mse.size(), 2u);
  for (std::size_t i = 1; i < r.mse.size(); ++i) EXPECT_LE(r.mse[i], r.mse[i - 1] + 1e-12) << i;
}

TEST(Icp, DegenerateInput) {
  const std::vector<Vec3> line = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  Rng rng(5);
  EXPECT_THROW(icp(line, random_points(rng, 10, 1.0)), Error);
}

TEST(PoseErr, QuarterTurnFrobenius) {
  const PoseError e = pose_error(Pose::from_yaw(kPi / 2, Vec3::Zero()), Pose());
  EXPECT_NEAR(e.rotation, 2.0, 1e-12);
  EXPECT_NEAR(e.rotation, 2.0 * std::sqrt(2.0) * std::sin(kPi / 4), 1e-12);
  EXPECT_EQ(e.translation, 0.0);
  EXPECT_NEAR(pose_error(Pose::from_yaw(0, Vec3(3, 4, 0)), Pose()).translation, 5.0, 1e-12);
}

TEST(Ttce, ExactEstimatesScoreZero) {
  const Trajectory ego{{{1, 0}, {2, 0.2}, {2.9, 0.6}}};
  std::vector<Pose> gt, est;
  for (std::size_t t = 0; t <= 3; ++t) gt.push_back(ego_pose_at(ego, t));
  for (std::size_t t = 0; t < 3; ++t) est.push_back(frame_to_frame(gt[t], gt[t + 1]));
  const PoseError e = ttce_from_estimates(est, gt);
  EXPECT_NEAR(e.rotation, 0.0, 1e-12);
  EXPECT_NEAR(e.translation, 0.0, 1e-12);
  EXPECT_THROW(ttce_from_estimates(est, {gt[0], gt[1]}), Error);
}

TEST(Ttce, SimulatorSequenceNoiseFree) {
  const SceneSpec spec = testing::probe_scene();
  SensorConfig cfg;
  cfg.width = 1024;
  cfg.height = 32;
  Rng rng(6);
  const SceneSequence seq = simulate_sequence(spec, cfg, 5, rng);
  TtceConfig tc;
  tc.icp.max_iterations = 100;
  tc.ground_cut = spec.ground_z + 0.2;
  const PoseError e = ttce(seq, seq.poses(), tc);
  EXPECT_LT(e.rotation, 0.01);
  EXPECT_LT(e.translation, 0.02);
}

TEST(Ctc, StaticSceneIsZero) {
  SceneSpec spec = testing::probe_scene();
  spec.ego_trajectory = Trajectory::stationary(4);
  SensorConfig cfg;
  cfg.width = 256;
  cfg.height = 16;
  Rng rng(7);
  const SceneSequence seq = simulate_sequence(spec, cfg, 4, rng);
  EXPECT_NEAR(ctc(seq, seq.poses(), 1), 0.0, 1e-9);
  EXPECT_NEAR(ctc(seq, seq.poses(), 2), 0.0, 1e-9);
}

TEST(Ctc, IntervalOneIsPairwiseMean) {
  const SceneSpec spec = testing::probe_scene();
  SensorConfig cfg;
  cfg.width = 256;
  cfg.height = 16;
  Rng rng(8);
  const SceneSequence seq = simulate_sequence(spec, cfg, 4, rng);
  const auto poses = seq.poses();
  double direct = 0.0;
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
    const Pose rel = poses[t].inverse() * poses[t + 1];
    direct += testing::brute_chamfer(seq.frames[t].cloud.positions(),
                                     transform_points(seq.frames[t + 1].cloud, rel).positions());
  }
  EXPECT_NEAR(ctc(seq, poses, 1), direct / 3.0, 1e-9);
  EXPECT_THROW(ctc(seq, poses, 4), Error);
}

TEST(Ctc, SinglePointTranslation) {
  // A fixed world point seen by an ego moving by v per frame.
  const Vec3 world(10, 3, -1);
  const Vec3 v(0.7, 0.4, 0.0);
  SceneSequence seq;
  std::vector<Pose> zero;
  for (int t = 0; t < 4; ++t) {
    const Pose g = Pose::from_yaw(0.0, v * t);
    PointCloud c;
    c.push_back(LidarPoint::at(g.inverse().apply(world), 0.5));
    seq.frames.push_back({c, g});
    zero.emplace_back();
  }
  EXPECT_NEAR(ctc(seq, seq.poses(), 1), 0.0, 1e-12);
  EXPECT_NEAR(ctc(seq, zero, 1), 2.0 * v.squaredNorm(), 1e-12);
}

}  // namespace
}  // namespace lidargen
