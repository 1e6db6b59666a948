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

TEST(RayObb, UnitCubeAhead) {
  const Box3D cube(Vec3(5, 0, 0), Vec3::Ones(), 0.0);
  const auto hit = intersect_ray_obb(Vec3::Zero(), Vec3::UnitX(), cube);
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(*hit, 4.5, 1e-12);
  EXPECT_FALSE(intersect_ray_obb(Vec3::Zero(), -Vec3::UnitX(), cube).has_value());
  EXPECT_FALSE(intersect_ray_obb(Vec3::Zero(), Vec3::UnitY(), cube).has_value());
}

TEST(RayObb, InsideReturnsExit) {
  const Box3D cube(Vec3::Zero(), Vec3(2, 2, 2), 0.0);
  const auto hit = intersect_ray_obb(Vec3::Zero(), Vec3::UnitX(), cube);
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(*hit, 1.0, 1e-12);
}

TEST(RayObb, RotatedBoxesMatchMarch) {
  Rng rng(1);
  int hits = 0;
  for (int i = 0; i < 200; ++i) {
    const Box3D box(Vec3(rng.uniform(3, 12), rng.uniform(-4, 4), rng.uniform(-1, 1)),
                    Vec3(rng.uniform(0.5, 5), rng.uniform(0.5, 3), rng.uniform(0.5, 3)), rng.uniform(-kPi, kPi));
    const Vec3 dir = Vec3(1.0, rng.normal(0, 0.3), rng.normal(0, 0.1)).normalized();
    const auto fast = intersect_ray_obb(Vec3::Zero(), dir, box);
    const auto slow = testing::ray_march(Vec3::Zero(), dir, box, 1e-3, 30.0);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << i;
    if (fast) {
      ++hits;
      EXPECT_NEAR(*fast, *slow, 1e-6);
    }
  }
  EXPECT_GT(hits, 20);
}

TEST(RayObb, GrazingEdgeMatchesFineMarch) {
  // The ray clips the corner of a yawed box, crossing it over a few mm.
  const Box3D box(Vec3(6, 0, 0), Vec3(2, 2, 2), kPi / 4);
  const double corner_y = std::sqrt(2.0);
  const Vec3 dir = Vec3(6.0, corner_y - 0.004, 0.0).normalized();
  const auto fast = intersect_ray_obb(Vec3::Zero(), dir, box);
  const auto slow = testing::ray_march(Vec3::Zero(), dir, box, 1e-6, 8.0);
  ASSERT_TRUE(fast.has_value());
  ASSERT_TRUE(slow.has_value());
  EXPECT_NEAR(*fast, *slow, 1e-4);
}

SensorConfig narrow_sensor(double elevation_deg) {
  // A single-row sensor whose only beam points at the given elevation.
  SensorConfig cfg;
  cfg.width = 64;
  cfg.height = 1;
  cfg.fov_up = (elevation_deg + 0.5) * kPi / 180.0;
  cfg.fov_down = (elevation_deg - 0.5) * kPi / 180.0;
  cfg.sensor_height = 2.0;
  return cfg;
}

TEST(Raycast, GroundRangeFromHeight) {
  SceneSpec spec;
  spec.ground_z = -2.0;
  spec.ego_trajectory = Trajectory::stationary(0);
  const SensorConfig cfg = narrow_sensor(-30.0);
  Rng rng(2);
  const PointCloud cloud = raycast_frame(spec, cfg, 0, rng);
  ASSERT_EQ(cloud.size(), 64u);
  for (const auto& p : cloud) {
    EXPECT_NEAR(p.position().norm(), 4.0, 1e-9);
    EXPECT_NEAR(p.z, -2.0, 1e-9);
    EXPECT_EQ(p.intensity, spec.ground_intensity);
  }
}

TEST(Raycast, UpwardBeamsMissEmptyScene) {
  SceneSpec spec;
  spec.ego_trajectory = Trajectory::stationary(0);
  Rng rng(3);
  EXPECT_TRUE(raycast_frame(spec, narrow_sensor(5.0), 0, rng).empty());
}

TEST(Raycast, PointsOnSurfacesAndUnoccluded) {
  const SceneSpec spec = testing::probe_scene();
  SensorConfig cfg;
  cfg.width = 256;
  cfg.height = 16;
  Rng rng(4);
  for (std::size_t t = 0; t <= spec.horizon(); ++t) {
    const PointCloud cloud = raycast_frame(spec, cfg, t, rng);
    EXPECT_LE(cloud.size(), static_cast<std::size_t>(cfg.width * cfg.height));
    const Pose g = ego_pose_at(spec.ego_trajectory, t);
    for (const auto& p : cloud) {
      const Vec3 world = g.apply(p.position());
      double residual = std::abs(world.z() - spec.ground_z);
      std::vector<Box3D> boxes;
      for (const auto& o : spec.objects) boxes.push_back(box_at_step(o.box, o.trajectory, t));
      for (const auto& b : boxes) {
        const Vec3 local = rot_z(-b.yaw()) * (world - b.center());
        const Vec3 half = 0.5 * b.size();
        if ((local.cwiseAbs() - half).maxCoeff() <= 1e-6) {
          residual = std::min(residual, (half - local.cwiseAbs()).minCoeff());
        }
      }
      EXPECT_LT(residual, 1e-6);
      const double range = p.position().norm();
      const Vec3 origin = g.translation();
      const Vec3 dir = (world - origin).normalized();
      for (const auto& b : boxes) {
        const auto hit = intersect_ray_obb(origin, dir, b);
        if (hit && !contains_point(b, origin)) {
          EXPECT_GE(*hit, range - 1e-6);
        }
      }
    }
  }
}

TEST(Raycast, NoiseIsSeeded) {
  SceneSpec spec = testing::probe_scene();
  spec.noise_sigma = 0.05;
  SensorConfig cfg;
  cfg.width = 128;
  cfg.height = 8;
  Rng a(5), b(5), c(6);
  const PointCloud pa = raycast_frame(spec, cfg, 0, a);
  EXPECT_EQ(pa, raycast_frame(spec, cfg, 0, b));
  EXPECT_NE(pa, raycast_frame(spec, cfg, 0, c));
}

TEST(Sequence, StaticSceneFramesIdentical) {
  SceneSpec spec = testing::probe_scene();
  spec.ego_trajectory = Trajectory::stationary(4);
  SensorConfig cfg;
  cfg.width = 128;
  cfg.height = 8;
  Rng rng(7);
  const SceneSequence seq = simulate_sequence(spec, cfg, 5, rng);
  ASSERT_EQ(seq.size(), 5u);
  for (const auto& f : seq.frames) EXPECT_EQ(f.cloud, seq.frames[0].cloud);
}

TEST(Sequence, PosesEqualEgoPoses) {
  const SceneSpec spec = testing::probe_scene();
  SensorConfig cfg;
  cfg.width = 64;
  cfg.height = 4;
  Rng rng(8);
  const SceneSequence seq = simulate_sequence(spec, cfg, 5, rng);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    EXPECT_EQ(seq.frames[t].pose.matrix(), ego_pose_at(spec.ego_trajectory, t).matrix());
  }
  Rng again(8);
  EXPECT_THROW(simulate_sequence(spec, cfg, 6, again), Error);
}

TEST(Sequence, DeterministicAtZeroNoise) {
  const SceneSpec spec = testing::probe_scene();
  SensorConfig cfg;
  cfg.width = 128;
  cfg.height = 8;
  Rng a(1), b(99);
  const SceneSequence x = simulate_sequence(spec, cfg, 3, a);
  const SceneSequence y = simulate_sequence(spec, cfg, 3, b);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(x.frames[t].cloud, y.frames[t].cloud);
}

TEST(Spec, Validation) {
  SceneSpec spec = testing::probe_scene();
  spec.objects[0].material = 1.5;
  EXPECT_THROW(spec.validate(), Error);
  spec = testing::probe_scene();
  spec.objects[1].trajectory = Trajectory::stationary(2);
  EXPECT_THROW(spec.validate(), Error);
  spec = testing::probe_scene();
  spec.objects[1].node_id = spec.objects[0].node_id;
  EXPECT_THROW(spec.validate(), Error);
  spec = testing::probe_scene();
  spec.noise_sigma = -1.0;
  EXPECT_THROW(spec.validate(), Error);
}

TEST(Spec, LayoutRoundTrip) {
  const SceneSpec spec = testing::probe_scene();
  const Layout4D layout = layout_from_spec(spec);
  ASSERT_EQ(layout.objects.size(), spec.objects.size());
  const SceneSpec back = spec_from_layout(layout, 0.5, spec.ground_z);
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    EXPECT_EQ(back.objects[i].box, spec.objects[i].box);
    EXPECT_EQ(back.objects[i].trajectory, spec.objects[i].trajectory);
    EXPECT_EQ(back.objects[i].node_id, spec.objects[i].node_id);
  }
  EXPECT_EQ(back.ego_trajectory, spec.ego_trajectory);
}

}  // namespace
}  // namespace lidargen
