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
#include "lidargen/rng.hpp"
#include "lidargen/synth.hpp"
#include "lidargen/warp.hpp"
#include "oracles.hpp"

namespace lidargen {
namespace {

constexpr double kPi = std::numbers::pi;

Pose random_pose(Rng& rng) {
  return Pose::from_yaw(rng.uniform(-kPi, kPi), Vec3(rng.normal(0, 5), rng.normal(0, 5), rng.normal(0, 1)));
}

void expect_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR((a - b).norm(), 0.0, tol) << a.transpose() << " vs " << b.transpose();
}

PointCloud random_cloud(Rng& rng, int n) {
  PointCloud c;
  for (int i = 0; i < n; ++i) {
    c.push_back({rng.normal(0, 10), rng.normal(0, 10), rng.normal(0, 2), rng.uniform()});
  }
  return c;
}

TEST(EgoPose, FollowsLatestHeading) {
  Trajectory ego{{{1, 0}, {1, 0}, {1, 1}}};
  const Pose g0 = ego_pose_at(ego, 0);
  EXPECT_TRUE(g0.matrix().isApprox(Eigen::Matrix4d::Identity()));
  const Pose g2 = ego_pose_at(ego, 2);
  expect_near(g2.translation(), Vec3(1, 0, 0), 1e-12);
  EXPECT_NEAR(std::atan2(g2.rotation()(1, 0), g2.rotation()(0, 0)), 0.0, 1e-12);
  const Pose g3 = ego_pose_at(ego, 3);
  EXPECT_NEAR(std::atan2(g3.rotation()(1, 0), g3.rotation()(0, 0)), kPi / 2, 1e-12);
  EXPECT_THROW(ego_pose_at(ego, 4), Error);
}

TEST(RelativeMotion, IdentityForEqualPoses) {
  Rng rng(1);
  const Pose g = random_pose(rng);
  EXPECT_TRUE(relative_motion(g, g).matrix().isApprox(Eigen::Matrix4d::Identity(), 1e-12));
}

TEST(RelativeMotion, TranslationDifference) {
  const Pose a = Pose::from_yaw(0.0, Vec3(3, 1, 0));
  const Pose b = Pose::from_yaw(0.0, Vec3(1, -1, 2));
  expect_near(relative_motion(a, b).translation(), Vec3(2, 2, -2), 1e-12);
}

TEST(RelativeMotion, ComposesBack) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Pose gt = random_pose(rng);
    const Pose gp = random_pose(rng);
    EXPECT_TRUE((relative_motion(gt, gp) * gp).matrix().isApprox(gt.matrix(), 1e-9));
    EXPECT_LT(((relative_motion(gt, gp) * gp).matrix() - gt.matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(RelativeMotion, ChainMatchesDirect) {
  Trajectory ego{{{1, 0}, {2, 0.3}, {2.8, 1.0}, {3.2, 2.0}, {3.3, 3.1}}};
  Pose chain = ego_pose_at(ego, 0);
  for (std::size_t t = 1; t <= ego.steps(); ++t) {
    chain = relative_motion(ego_pose_at(ego, t), ego_pose_at(ego, t - 1)) * chain;
  }
  EXPECT_LT((chain.matrix() - ego_pose_at(ego, ego.steps()).matrix()).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Split, NoBoxesAllBackground) {
  Rng rng(3);
  const PointCloud c = random_cloud(rng, 40);
  const FrameDecomposition d = split_fg_bg(c, {});
  EXPECT_EQ(d.background, c);
  EXPECT_TRUE(d.foregrounds.empty());
}

TEST(Split, PointInsideBox) {
  PointCloud c;
  c.push_back({5, 0, 0, 0.5});
  c.push_back({0, 9, 0, 0.5});
  const FrameDecomposition d = split_fg_bg(c, {{7, Box3D(Vec3(5, 0, 0), Vec3::Ones(), 0.0)}});
  ASSERT_EQ(d.foregrounds.count(7), 1u);
  EXPECT_EQ(d.foregrounds.at(7).size(), 1u);
  EXPECT_EQ(d.foregrounds.at(7)[0].x, 5.0);
  EXPECT_EQ(d.background.size(), 1u);
}

TEST(Split, FirstBoxWinsAndPartitionCounts) {
  Rng rng(4);
  const PointCloud c = random_cloud(rng, 500);
  const std::vector<std::pair<int, Box3D>> boxes = {{1, Box3D(Vec3(0, 0, 0), Vec3(10, 10, 4), 0.3)},
                                                    {2, Box3D(Vec3(3, 3, 0), Vec3(10, 10, 4), 0.0)},
                                                    {3, Box3D(Vec3(40, 40, 0), Vec3(1, 1, 1), 0.0)}};
  const FrameDecomposition d = split_fg_bg(c, boxes);
  std::size_t total = d.background.size();
  for (const auto& [id, part] : d.foregrounds) total += part.size();
  EXPECT_EQ(total, c.size());
  EXPECT_EQ(d.foregrounds.size(), 3u);
  EXPECT_TRUE(d.foregrounds.at(3).empty());
  for (const auto& p : d.foregrounds.at(2)) EXPECT_FALSE(contains_point(boxes[0].second, p.position()));
  for (const auto& p : d.background) {
    for (const auto& [id, b] : boxes) EXPECT_FALSE(contains_point(b, p.position()));
  }
}

TEST(WarpBackground, NoMotionUnchanged) {
  Rng rng(5);
  const PointCloud c = random_cloud(rng, 30);
  const Pose g = random_pose(rng);
  const PointCloud w = warp_background(c, g, g);
  ASSERT_EQ(w.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) expect_near(w[i].position(), c[i].position(), 1e-9);
}

TEST(WarpBackground, EgoAdvanceShiftsBack) {
  PointCloud c;
  c.push_back({10, 2, -1, 0.3});
  const PointCloud w = warp_background(c, Pose::from_yaw(0, Vec3(1, 0, 0)), Pose());
  expect_near(w[0].position(), Vec3(9, 2, -1), 1e-12);
  EXPECT_EQ(w[0].intensity, 0.3);
}

TEST(WarpBackground, RoundTripAndRigidity) {
  Rng rng(6);
  const PointCloud c = random_cloud(rng, 60);
  const Pose a = random_pose(rng);
  const Pose b = random_pose(rng);
  const PointCloud fwd = warp_background(c, a, b);
  const PointCloud back = warp_background(fwd, b, a);
  for (std::size_t i = 0; i < c.size(); ++i) expect_near(back[i].position(), c[i].position(), 1e-9);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const double d0 = (c[i].position() - c[i + 1].position()).norm();
    const double d1 = (fwd[i].position() - fwd[i + 1].position()).norm();
    EXPECT_NEAR(d0, d1, 1e-9);
  }
}

TEST(WarpObject, ObjectMovesEgoStatic) {
  const Box3D box(Vec3(10, 0, -1), Vec3(4, 2, 1.5), 0.0);
  const Trajectory obj{{{1, 0}}};
  const Trajectory ego = Trajectory::stationary(1);
  PointCloud pts;
  pts.push_back({9, 0.5, -1, 0.5});
  const WarpedObject w = warp_object(pts, box, obj, ego, 0, 1);
  expect_near(w.points[0].position(), Vec3(10, 0.5, -1), 1e-12);
  expect_near(w.box.center(), Vec3(11, 0, -1), 1e-12);
}

TEST(WarpObject, EgoMovesObjectStatic) {
  const Box3D box(Vec3(10, 0, -1), Vec3(4, 2, 1.5), 0.0);
  const Trajectory obj = Trajectory::stationary(1);
  const Trajectory ego{{{1, 0}}};
  PointCloud pts;
  pts.push_back({9, 0.5, -1, 0.5});
  const WarpedObject w = warp_object(pts, box, obj, ego, 0, 1);
  expect_near(w.points[0].position(), Vec3(8, 0.5, -1), 1e-12);
}

TEST(WarpObject, CenterMatchesClosedForm) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Box3D box(Vec3(rng.normal(0, 10), rng.normal(0, 10), rng.normal(0, 1)), Vec3(4, 2, 1.5),
                    rng.uniform(-kPi, kPi));
    Trajectory obj, ego;
    Vec2 po = Vec2::Zero(), pe = Vec2::Zero();
    for (int t = 0; t < 4; ++t) {
      po += Vec2(rng.normal(1, 0.5), rng.normal(0, 0.5));
      pe += Vec2(rng.normal(1, 0.5), rng.normal(0, 0.5));
      obj.displacements.push_back(po);
      ego.displacements.push_back(pe);
    }
    for (std::size_t t = 0; t <= 4; ++t) {
      // Ego heading: direction of the latest step, 0 at the start.
      double psi = 0.0;
      if (t > 0) {
        const Vec2 step = ego.at(t) - ego.at(t - 1);
        psi = std::atan2(step.y(), step.x());
      }
      const Vec2 u = box.center().head<2>() + obj.at(t) - ego.at(t);
      const Vec3 expected(std::cos(psi) * u.x() + std::sin(psi) * u.y(),
                          -std::sin(psi) * u.x() + std::cos(psi) * u.y(), box.center().z());
      const WarpedObject w = warp_object(PointCloud{}, box, obj, ego, 0, t);
      expect_near(w.box.center(), expected, 1e-9);
      expect_near(object_box_at(box, obj, ego, t).center(), expected, 1e-9);
    }
  }
}

TEST(WarpObject, RejectsOutOfRange) {
  const Box3D box;
  const Trajectory obj = Trajectory::stationary(2);
  EXPECT_THROW(warp_object(PointCloud{}, box, obj, obj, 0, 3), Error);
}

SensorConfig small_sensor() {
  SensorConfig cfg;
  cfg.width = 256;
  cfg.height = 16;
  return cfg;
}

TEST(Conditioning, ZeroMotionEqualsFrameProjection) {
  SceneSpec spec = testing::probe_scene();
  spec.ego_trajectory = Trajectory::stationary(4);
  const SensorConfig cfg = small_sensor();
  Rng rng(8);
  const SceneSequence seq = simulate_sequence(spec, cfg, 2, rng);
  const Layout4D layout = layout_from_spec(spec);
  const FrameDecomposition d0 = decompose_frame(seq.frames[0].cloud, layout, 0);
  const RangeImage map = conditioning_map(d0, d0, layout, 1, cfg);
  EXPECT_EQ(map, project(seq.frames[0].cloud, cfg));
}

TEST(Conditioning, DepthIsMinimumOverSources) {
  const SceneSpec spec = testing::probe_scene();
  const SensorConfig cfg = small_sensor();
  Rng rng(9);
  const SceneSequence seq = simulate_sequence(spec, cfg, 3, rng);
  const Layout4D layout = layout_from_spec(spec);
  const FrameDecomposition d0 = decompose_frame(seq.frames[0].cloud, layout, 0);
  const FrameDecomposition d1 = decompose_frame(seq.frames[1].cloud, layout, 1);
  const std::size_t t = 2;
  const RangeImage map = conditioning_map(d0, d1, layout, t, cfg);

  const Pose gt = ego_pose_at(spec.ego_trajectory, t);
  std::vector<RangeImage> sources;
  sources.push_back(project(warp_background(d0.background, gt, ego_pose_at(spec.ego_trajectory, 0)), cfg));
  sources.push_back(project(warp_background(d1.background, gt, ego_pose_at(spec.ego_trajectory, 1)), cfg));
  for (const auto& obj : layout.objects) {
    const auto it = d1.foregrounds.find(obj.node_id);
    if (it == d1.foregrounds.end()) continue;
    sources.push_back(
        project(warp_object(it->second, obj.box, obj.trajectory, spec.ego_trajectory, 1, t).points, cfg));
  }
  for (int r = 0; r < cfg.height; ++r) {
    for (int c = 0; c < cfg.width; ++c) {
      bool any = false;
      float best = 0.0f;
      for (const auto& s : sources) {
        if (!s.valid(r, c)) continue;
        if (!any || s.depth(r, c) < best) best = s.depth(r, c);
        any = true;
      }
      ASSERT_EQ(map.valid(r, c), any) << r << "," << c;
      if (any) {
        EXPECT_EQ(map.depth(r, c), best);
      }
    }
  }
}

TEST(Conditioning, ReprojectionIsIdempotent) {
  const SceneSpec spec = testing::probe_scene();
  const SensorConfig cfg = small_sensor();
  Rng rng(10);
  const SceneSequence seq = simulate_sequence(spec, cfg, 2, rng);
  const Layout4D layout = layout_from_spec(spec);
  const FrameDecomposition d0 = decompose_frame(seq.frames[0].cloud, layout, 0);
  const RangeImage map = conditioning_map(d0, d0, layout, 1, cfg);
  EXPECT_EQ(project(unproject(map, cfg), cfg), map);
}

}  // namespace
}  // namespace lidargen
