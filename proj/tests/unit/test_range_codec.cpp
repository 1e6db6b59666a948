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
#include "lidargen/range_codec.hpp"
#include "lidargen/rng.hpp"

namespace lidargen {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

PointCloud random_cloud(Rng& rng, int n, double max_range) {
  PointCloud c;
  for (int i = 0; i < n; ++i) {
    const double az = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double el = rng.uniform(-29.0, 9.0) * kDeg;
    const double r = rng.uniform(1.0, max_range);
    c.push_back({r * std::cos(el) * std::cos(az), r * std::cos(el) * std::sin(az), r * std::sin(el), rng.uniform()});
  }
  return c;
}

TEST(Project, ForwardPointLandsOnCenterColumn) {
  SensorConfig cfg;
  const auto px = pixel_of(Vec3(10, 0, 0), cfg);
  ASSERT_TRUE(px);
  EXPECT_EQ(px->col, cfg.width / 2);
  EXPECT_DOUBLE_EQ(image_coordinates(Vec3(10, 0, 0), cfg).x(), cfg.width / 2.0);
}

TEST(Project, ElevationAtFovUpIsTopRow) {
  SensorConfig cfg;
  const Vec3 p(std::cos(cfg.fov_up), 0.0, std::sin(cfg.fov_up));
  EXPECT_NEAR(image_coordinates(10.0 * p, cfg).y(), 0.0, 1e-12);
}

TEST(Project, ZBufferKeepsNearest) {
  SensorConfig cfg;
  const Vec3 ray = pixel_ray(10, 100, cfg);
  PointCloud c;
  c.push_back(LidarPoint::at(9.0 * ray, 0.2));
  c.push_back(LidarPoint::at(5.0 * ray, 0.7));
  const RangeImage img = project(c, cfg);
  ASSERT_TRUE(img.valid(10, 100));
  EXPECT_FLOAT_EQ(img.depth(10, 100), 5.0f);
  EXPECT_FLOAT_EQ(img.intensity(10, 100), 0.7f);
  EXPECT_EQ(img.valid_count(), 1u);
}

TEST(Project, DropsOutOfRangeAndOutOfFov) {
  SensorConfig cfg;
  PointCloud c;
  c.push_back({100, 0, 0, 0.5});
  c.push_back({1, 0, 5, 0.5});
  EXPECT_EQ(project(c, cfg).valid_count(), 0u);
}

TEST(Unproject, AllInvalidGivesEmptyCloud) {
  SensorConfig cfg;
  EXPECT_TRUE(unproject(RangeImage(cfg.height, cfg.width), cfg).empty());
}

TEST(Unproject, PixelCenterRayRoundTrips) {
  SensorConfig cfg;
  const Vec3 ray = pixel_ray(7, 333, cfg);
  PointCloud c;
  c.push_back(LidarPoint::at(10.0 * ray, 0.5));
  const PointCloud back = unproject(project(c, cfg), cfg);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_LT((back[0].position() - 10.0 * ray).norm(), 1e-5);
}

TEST(Unproject, QuantizationBound) {
  SensorConfig cfg;
  Rng rng(2);
  const PointCloud cloud = random_cloud(rng, 5000, 79.0);
  const RangeImage img = project(cloud, cfg);
  const PointCloud back = unproject(img, cfg);
  const Vec2 pitch = angular_pitch(cfg);
  const double half = 0.5 * std::hypot(pitch.x(), pitch.y());
  // Each surviving point is the z-buffer winner of its pixel.
  for (const auto& q : back) {
    const auto px = pixel_of(q.position(), cfg);
    ASSERT_TRUE(px);
    double best = 1e300;
    for (const auto& p : cloud) {
      const auto pp = pixel_of(p.position(), cfg);
      if (pp && *pp == *px) best = std::min(best, (p.position() - q.position()).norm() / p.position().norm());
    }
    EXPECT_LE(best, half + 1e-6);
  }
}

TEST(Project, ReprojectionIsStable) {
  SensorConfig cfg;
  Rng rng(9);
  const RangeImage a = project(random_cloud(rng, 20000, 80.0), cfg);
  EXPECT_EQ(project(unproject(a, cfg), cfg), a);
}

TEST(NormalizeDepth, Endpoints) {
  SensorConfig cfg;
  EXPECT_EQ(normalize_depth(0.0, cfg), 0.0);
  EXPECT_EQ(normalize_depth(80.0, cfg), 1.0);
  EXPECT_EQ(normalize_depth(8.0, cfg), 0.5);
  EXPECT_NEAR(denormalize_depth(normalize_depth(33.3, cfg), cfg), 33.3, 1e-12);
  EXPECT_THROW(normalize_depth(81.0, cfg), Error);
  EXPECT_THROW(denormalize_depth(1.5, cfg), Error);
}

TEST(EncodeTensor, ChannelsAndRoundTrip) {
  SensorConfig cfg;
  RangeImage img(cfg.height, cfg.width);
  img.set(0, 0, 0.0f, 0.0f);
  img.set(1, 1, 80.0f, 1.0f);
  img.set(2, 2, 12.5f, 0.25f);
  const RangeTensor t = encode_tensor(img, cfg);
  EXPECT_EQ(t.channels, kRangeTensorChannels);
  EXPECT_FLOAT_EQ(t.at(0, 0, kDepthChannel), -1.0f);
  EXPECT_FLOAT_EQ(t.at(1, 1, kDepthChannel), 1.0f);
  EXPECT_FLOAT_EQ(t.at(2, 2, kMaskChannel), 1.0f);
  EXPECT_FLOAT_EQ(t.at(3, 3, kMaskChannel), 0.0f);
  const RangeImage back = decode_tensor(t, cfg);
  for (int r = 0; r < cfg.height; ++r) {
    for (int c = 0; c < cfg.width; ++c) {
      if (img.valid(r, c) && img.depth(r, c) > 0.0f) {
        ASSERT_TRUE(back.valid(r, c));
        EXPECT_LE(std::abs(back.depth(r, c) - img.depth(r, c)) / img.depth(r, c), 1e-5);
      }
    }
  }
  EXPECT_NEAR(back.intensity(2, 2), 0.25f, 1e-6);
}

TEST(SensorConfig, Validation) {
  SensorConfig cfg;
  cfg.width = 0;
  EXPECT_THROW(project(PointCloud{}, cfg), Error);
  cfg = SensorConfig{};
  cfg.fov_up = cfg.fov_down;
  EXPECT_THROW(cfg.validate(), Error);
}

}  // namespace
}  // namespace lidargen
