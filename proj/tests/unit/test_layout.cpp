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
#include "lidargen/layout.hpp"
#include "lidargen/rng.hpp"

namespace lidargen {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(BoxCode, Anchors) {
  const WorldBounds bounds;
  const BoxCode c = encode_box(Box3D(bounds.min, Vec3::Ones(), 0.0), bounds);
  EXPECT_EQ(c.head<3>(), Vec3::Zero());
  EXPECT_EQ(c.segment<3>(3), Vec3::Zero());
  EXPECT_DOUBLE_EQ(c[6], 0.0);
  EXPECT_DOUBLE_EQ(c[7], 1.0);
  EXPECT_THROW(encode_box(Box3D(Vec3(100, 0, 0), Vec3::Ones(), 0.0), bounds), Error);
}

TEST(BoxCode, RoundTrip) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Box3D b(Vec3(rng.uniform(-70, 70), rng.uniform(-70, 70), rng.uniform(-3, 3)),
                  Vec3(rng.uniform(0.3, 12), rng.uniform(0.3, 4), rng.uniform(0.5, 4)), rng.uniform(-kPi, kPi));
    const Box3D d = decode_box(encode_box(b));
    EXPECT_LT((d.center() - b.center()).norm(), 1e-6);
    EXPECT_LT((d.size() - b.size()).norm(), 1e-6);
    EXPECT_LT(std::abs(normalize_angle(d.yaw() - b.yaw())), 1e-6);
  }
}

TEST(TrajectoryCode, ZerosBoundAndRoundTrip) {
  EXPECT_EQ(encode_trajectory(Trajectory::stationary(4)), VectorXd::Zero(8));
  const VectorXd c = encode_trajectory(Trajectory{{{20.0, -5.0}}}, 20.0);
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[1], -0.25);
  const Trajectory tr{{{1.3, 0.2}, {2.7, 0.5}, {-4.0, 19.0}}};
  const Trajectory back = decode_trajectory(encode_trajectory(tr));
  for (std::size_t t = 0; t < tr.steps(); ++t) EXPECT_LT((back.displacements[t] - tr.displacements[t]).norm(), 1e-7);
  EXPECT_THROW(encode_trajectory(Trajectory{{{21.0, 0.0}}}), Error);
}

TEST(Canonicalize, CenterCornerRoundTrip) {
  const Box3D b(Vec3(3, -2, 0.5), Vec3(4, 2, 1.6), 0.6);
  PointCloud c;
  c.push_back(LidarPoint::at(b.center(), 0.5));
  c.push_back(LidarPoint::at(b.center() + rot_z(b.yaw()) * (0.5 * b.size()), 1.0));
  const PointCloud k = canonicalize_points(c, b);
  EXPECT_LT(k[0].position().norm(), 1e-12);
  EXPECT_LT((k[1].position() - Vec3::Ones()).norm(), 1e-12);
  EXPECT_DOUBLE_EQ(k[1].intensity, 1.0);
  const PointCloud back = decanonicalize_points(k, b);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_LT((back[i].position() - c[i].position()).norm(), 1e-9);
    EXPECT_NEAR(back[i].intensity, c[i].intensity, 1e-12);
  }
}

TEST(BoxPenalty, HandValues) {
  const Box3D a(Vec3::Zero(), Vec3::Ones(), 0.0);
  EXPECT_EQ(box_overlap_penalty({a, a.with_center(Vec3(5, 0, 0))}), 0.0);
  EXPECT_NEAR(box_overlap_penalty({a, a}, 0.01), 0.99, 1e-12);
  const std::vector<Box3D> three = {a, a.with_center(Vec3(0.5, 0, 0)), a.with_center(Vec3(10, 0, 0))};
  EXPECT_NEAR(box_overlap_penalty(three, 0.01), (1.0 / 3.0) * (1.0 / 3.0 - 0.01), 1e-12);
}

TEST(TrajectoryPenalty, HandValues) {
  const Box3D a(Vec3::Zero(), Vec3::Ones(), 0.0);
  const Box3D b = a.with_center(Vec3(-12, 0, 0));
  const Trajectory still = Trajectory::stationary(5);
  EXPECT_EQ(trajectory_overlap_penalty({a, a.with_center(Vec3(5, 0, 0))}, {still, still}), 0.0);
  // b passes a at step 3 with an x offset of 1/3, so IoU = (2/3) / (4/3) = 0.5.
  const Trajectory pass{{{2, 0}, {6, 0}, {11.0 + 2.0 / 3.0, 0}, {20, 0}, {25, 0}}};
  EXPECT_NEAR(trajectory_overlap_penalty({a, b}, {still, pass}, 0.01), (1.0 / 5.0) * (0.5 - 0.01), 1e-12);
  const Trajectory drift{{{1, 0}, {2, 0}}};
  EXPECT_NEAR(trajectory_overlap_penalty({a, a.with_center(Vec3(0.5, 0, 0))}, {drift, drift}, 0.01),
              box_overlap_penalty({a, a.with_center(Vec3(0.5, 0, 0))}, 0.01), 1e-12);
}

SceneGraph star_graph(int objects) {
  SceneGraph g;
  g.nodes.push_back({0, Category::kEgo, MotionState::kStationary, std::nullopt});
  for (int i = 1; i <= objects; ++i) {
    g.nodes.push_back({i, i % 2 ? Category::kCar : Category::kPedestrian, MotionState::kStationary, std::nullopt});
    g.edges.push_back({i, 0, RelationSet{Relation::kFront}});
  }
  return g;
}

TEST(Featurize, DegreesAndDeterminism) {
  SceneGraph g = star_graph(2);
  const VectorXd ego = featurize_condition(g, 0);
  EXPECT_EQ(ego.size(), kConditionDim);
  EXPECT_DOUBLE_EQ(ego[static_cast<Eigen::Index>(kCategoryCount + kMotionStateCount)], 2.0 / kConditionCountScale);
  const VectorXd one = featurize_condition(g, 1);
  EXPECT_DOUBLE_EQ(one[static_cast<Eigen::Index>(kCategoryCount + kMotionStateCount)], 0.0);
  g.edges.push_back({2, 1, RelationSet{Relation::kLeft}});
  const VectorXd one_more = featurize_condition(g, 1);
  EXPECT_DOUBLE_EQ(one_more[static_cast<Eigen::Index>(kCategoryCount + kMotionStateCount)], 1.0 / kConditionCountScale);
  SceneGraph reordered = g;
  std::swap(reordered.nodes[1], reordered.nodes[2]);
  for (int id = 0; id <= 2; ++id) EXPECT_EQ(featurize_condition(g, id), featurize_condition(reordered, id));
  SceneGraph lonely;
  lonely.nodes.push_back({0, Category::kEgo, MotionState::kStationary, std::nullopt});
  lonely.nodes.push_back({1, Category::kCar, MotionState::kStationary, std::nullopt});
  const VectorXd iso = featurize_condition(lonely, 1);
  EXPECT_EQ(iso.tail(kConditionDim - static_cast<Eigen::Index>(kCategoryCount + kMotionStateCount)).norm(), 0.0);
}

struct Models {
  NoiseSchedule schedule = cosine_schedule(1024);
  std::unique_ptr<Denoiser> box, traj, shape;
  Vec3 center_code{0.6, 0.4, 0.55};
  double sigma = 0.05;

  explicit Models(int horizon) {
    const Vec3 cc = center_code;
    const double s = sigma;
    box = std::make_unique<ConditionalGaussianOracle>(
        kBoxCodeDim, kConditionDim,
        [cc, s](const VectorXd&) {
          VectorXd mu(8), sd(8);
          mu << cc, std::log(0.5), std::log(0.5), std::log(0.5), 0.0, 1.0;
          sd << s, s, s, 0.01, 0.01, 0.01, 0.01, 0.01;
          return std::make_pair(mu, sd);
        },
        schedule);
    traj = std::make_unique<ConditionalGaussianOracle>(
        2 * horizon, kConditionDim + kBoxCodeDim,
        [horizon](const VectorXd&) {
          return std::make_pair(VectorXd(VectorXd::Zero(2 * horizon)), VectorXd(VectorXd::Zero(2 * horizon)));
        },
        schedule);
    shape = std::make_unique<ConditionalGaussianOracle>(
        4, kBoxCodeDim,
        [](const VectorXd&) {
          return std::make_pair(VectorXd(VectorXd::Zero(4)), VectorXd(VectorXd::Constant(4, 0.3)));
        },
        schedule);
  }
  LayoutModels view() const { return {box.get(), traj.get(), shape.get()}; }
};

TEST(SampleLayout, EmptyGraph) {
  const Models m(2);
  LayoutSamplerConfig cfg;
  cfg.horizon = 2;
  cfg.sample_steps = 16;
  cfg.num_points = 8;
  const LayoutSample s = sample_layout(star_graph(0), m.view(), m.schedule, cfg, 1);
  EXPECT_TRUE(s.layout.objects.empty());
  EXPECT_EQ(s.layout.horizon(), 2u);
}

TEST(SampleLayout, ShapeMismatchIsReported) {
  const Models m(3);
  LayoutSamplerConfig cfg;
  cfg.horizon = 2;
  EXPECT_THROW(sample_layout(star_graph(1), m.view(), m.schedule, cfg, 1), Error);
}

TEST(SampleLayout, SeededRunsAreIdentical) {
  const Models m(2);
  LayoutSamplerConfig cfg;
  cfg.horizon = 2;
  cfg.sample_steps = 32;
  cfg.num_points = 0;
  cfg.reject_k = 2;
  const auto a = sample_layout(star_graph(5), m.view(), m.schedule, cfg, 42);
  const auto b = sample_layout(star_graph(5), m.view(), m.schedule, cfg, 42);
  EXPECT_EQ(a.layout, b.layout);
  EXPECT_NO_THROW(validate_layout(a.layout));
}

TEST(SampleLayout, ShapeBranchFillsCanonicalPoints) {
  const Models m(2);
  LayoutSamplerConfig cfg;
  cfg.horizon = 2;
  cfg.sample_steps = 16;
  cfg.num_points = 32;
  cfg.reject_k = 0;
  const GaussianOracleDenoiser unconditioned(VectorXd::Zero(4), VectorXd::Constant(4, 0.3), m.schedule);
  EXPECT_THROW(sample_layout(star_graph(1), {m.box.get(), m.traj.get(), &unconditioned}, m.schedule, cfg, 3), Error);
  const auto s = sample_layout(star_graph(2), m.view(), m.schedule, cfg, 3);
  for (const auto& o : s.layout.objects) {
    ASSERT_EQ(o.shape.size(), 32u);
    for (const auto& p : o.shape) {
      EXPECT_LE(std::abs(p.x), 1.0);
      EXPECT_LE(std::abs(p.intensity), 1.0);
    }
  }
}

TEST(SampleLayout, CenterMeanMatchesOracleTarget) {
  const Models m(1);
  LayoutSamplerConfig cfg;
  cfg.horizon = 1;
  cfg.sample_steps = 64;
  cfg.num_points = 0;
  cfg.reject_k = 0;
  const WorldBounds bounds;
  Vec3 sum = Vec3::Zero();
  int n = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& o : sample_layout(star_graph(50), m.view(), m.schedule, cfg, seed).layout.objects) {
      sum += o.box.center();
      ++n;
    }
  }
  ASSERT_EQ(n, 1000);
  const Vec3 target = bounds.min + m.center_code.cwiseProduct(bounds.extent());
  const Vec3 sd = m.sigma * bounds.extent();
  const Vec3 mean = sum / n;
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(mean[k] - target[k]), 3.0 * sd[k] / std::sqrt(1000.0)) << k;
}

TEST(ValidateLayout, DuplicateIdsRejected) {
  Layout4D l;
  l.ego_trajectory = Trajectory::stationary(2);
  LayoutObject o;
  o.node_id = 1;
  o.trajectory = Trajectory::stationary(2);
  l.objects = {o, o};
  EXPECT_THROW(validate_layout(l), Error);
}

}  // namespace
}  // namespace lidargen
