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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lidargen/errors.hpp"
#include "lidargen/metrics.hpp"
#include "lidargen/rng.hpp"
#include "oracles.hpp"

namespace lidargen {
namespace {

constexpr double kPi = std::numbers::pi;

// ---- distributions ----

TEST(Bev, SingleCenteredPoint) {
  PointCloud c;
  c.push_back({0.0, 0.0, 0.0, 0.5});
  const BevHistogram h = bev_histogram(c);
  EXPECT_FALSE(h.empty);
  EXPECT_EQ(h.mass.size(), 100u * 100u);
  EXPECT_EQ(*std::max_element(h.mass.begin(), h.mass.end()), 1.0);
  EXPECT_EQ(std::count(h.mass.begin(), h.mass.end(), 0.0), 100 * 100 - 1);
}

TEST(Bev, EmptyAndOutOfBounds) {
  PointCloud c;
  EXPECT_TRUE(bev_histogram(c).empty);
  c.push_back({200.0, 0.0, 0.0, 0.5});
  const BevHistogram h = bev_histogram(c);
  EXPECT_TRUE(h.empty);
  EXPECT_EQ(std::accumulate(h.mass.begin(), h.mass.end(), 0.0), 0.0);
}

TEST(Bev, MassConservedAndUpperEdgeKept) {
  Rng rng(1);
  PointCloud c;
  for (int i = 0; i < 500; ++i) c.push_back({rng.uniform(-100, 100), rng.uniform(-100, 100), 0.0, 0.1});
  c.push_back({80.0, 80.0, 0.0, 0.1});
  BevGridSpec g;
  g.bins = 16;
  const BevHistogram h = bev_histogram(c, g);
  EXPECT_NEAR(std::accumulate(h.mass.begin(), h.mass.end(), 0.0), 1.0, 1e-12);
  EXPECT_GT(h.mass.back(), 0.0);
}

using Masses = std::vector<double>;

TEST(Jsd, Cases) {
  EXPECT_EQ(jsd(Masses{0.2, 0.3, 0.5}, Masses{0.2, 0.3, 0.5}), 0.0);
  EXPECT_NEAR(jsd(Masses{1.0, 0.0}, Masses{0.0, 1.0}), 1.0, 1e-12);
  // 0.5 * [1 * log2(1 / 0.75)] + 0.5 * [0.5 log2(0.5 / 0.75) + 0.5 log2(0.5 / 0.25)]
  const double hand = 0.5 * std::log2(4.0 / 3.0) + 0.5 * (0.5 * std::log2(2.0 / 3.0) + 0.5 * 1.0);
  EXPECT_NEAR(hand, 0.31128, 1e-4);
  EXPECT_NEAR(jsd(Masses{1.0, 0.0}, Masses{0.5, 0.5}), 0.31128, 1e-4);
  EXPECT_THROW(jsd(Masses{1.0}, Masses{0.5, 0.5}), Error);
}

TEST(Mmd, ClosedForms) {
  MatrixXd x(1, 1), y(1, 1);
  x << 0.0;
  y << 1.0;
  EXPECT_NEAR(mmd(x, y, {KernelKind::kLinear, 0.0}), 1.0, 1e-12);
  for (double s : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(mmd(x, y, {KernelKind::kGaussian, s}), 2.0 - 2.0 * std::exp(-1.0 / (2.0 * s * s)), 1e-12);
  }
  Rng rng(2);
  MatrixXd z(20, 3);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.normal();
  EXPECT_NEAR(mmd(z, z), 0.0, 1e-12);
  EXPECT_THROW(mmd(MatrixXd(0, 3), z), Error);
  EXPECT_THROW(mmd(MatrixXd::Zero(2, 2), z), Error);
}

TEST(Mmd, PermutationInvariant) {
  Rng rng(3);
  MatrixXd x(15, 2), y(12, 2);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.normal(0.5, 1.0);
  MatrixXd xp = x.colwise().reverse();
  EXPECT_NEAR(mmd(x, y), mmd(xp, y), 1e-12);
  EXPECT_GT(mmd(x, y), 0.0);
}

TEST(Frechet, Cases) {
  const VectorXd mu = VectorXd::Zero(2);
  const MatrixXd eye = MatrixXd::Identity(2, 2);
  EXPECT_NEAR(frechet(mu, eye, mu, eye), 0.0, 1e-12);
  VectorXd shifted(2);
  shifted << 3, 4;
  EXPECT_NEAR(frechet(mu, eye, shifted, eye), 25.0, 1e-12);
  const VectorXd m1 = VectorXd::Zero(1);
  EXPECT_NEAR(frechet(m1, MatrixXd::Constant(1, 1, 4.0), m1, MatrixXd::Constant(1, 1, 1.0)), 1.0, 1e-12);
  EXPECT_THROW(frechet(mu, eye, m1, MatrixXd::Identity(1, 1)), Error);
}

TEST(Frechet, FeatureSetsAndPsd) {
  Rng rng(4);
  FeatureSet a;
  a.features = MatrixXd(50, 3);
  for (Eigen::Index i = 0; i < a.features.size(); ++i) a.features.data()[i] = rng.normal();
  EXPECT_NEAR(frechet(a, a), 0.0, 1e-9);
  const MatrixXd cov = a.covariance();
  EXPECT_TRUE(cov.isApprox(cov.transpose()));
  const MatrixXd root = psd_sqrt(cov);
  EXPECT_TRUE((root * root).isApprox(cov, 1e-10));
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(1, 1) = -1.0;
  EXPECT_THROW(psd_sqrt(bad), Error);
}

TEST(Chamfer, Cases) {
  const std::vector<Vec3> x = {Vec3(0, 0, 0)};
  const std::vector<Vec3> y = {Vec3(1, 0, 0)};
  EXPECT_DOUBLE_EQ(chamfer(x, y), 2.0);
  EXPECT_EQ(chamfer(x, x), 0.0);
  EXPECT_THROW(chamfer(x, std::vector<Vec3>{}), Error);
}

TEST(Chamfer, MatchesBruteForce) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec3> x, y;
    const auto nx = 1 + rng.index(200);
    const auto ny = 1 + rng.index(200);
    for (std::size_t i = 0; i < nx; ++i) x.emplace_back(rng.normal(0, 5), rng.normal(0, 5), rng.normal(0, 1));
    for (std::size_t i = 0; i < ny; ++i) y.emplace_back(rng.normal(1, 5), rng.normal(0, 5), rng.normal(0, 1));
    EXPECT_NEAR(chamfer(x, y), testing::brute_chamfer(x, y), 1e-9);
    std::reverse(x.begin(), x.end());
    EXPECT_NEAR(chamfer(x, y), testing::brute_chamfer(x, y), 1e-9);
  }
}

TEST(Features, Shapes) {
  SensorConfig cfg;
  RangeImage img(cfg.height, cfg.width);
  img.set(0, 0, 10.0f, 0.5f);
  const VectorXd f = range_patch_features(img, cfg);
  EXPECT_EQ(f.size(), 2 * (32 / 8) * (1024 / 128));
  PointCloud c;
  c.push_back({1, 2, 0, 0.5});
  c.push_back({3, -2, 1, 0.5});
  EXPECT_EQ(point_features(c).size(), 64 + 4);
}

// ---- object metrics ----

DetectionRecord det(const std::string& frame, const Box3D& b, const std::string& cls, double conf) {
  return {frame, b, cls, conf};
}

TEST(Fdc, MeansPerClass) {
  const Box3D b;
  const std::vector<DetectionRecord> d = {det("a", b, "car", 0.6), det("a", b, "car", 0.8),
                                          det("b", b, "pedestrian", 0.3)};
  const auto r = fdc(d, {"car", "pedestrian", "bus"});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(*r[0].mean_confidence, 0.7, 1e-12);
  EXPECT_EQ(r[0].count, 2u);
  EXPECT_NEAR(*r[1].mean_confidence, 0.3, 1e-12);
  EXPECT_FALSE(r[2].mean_confidence.has_value());
  EXPECT_EQ(r[2].count, 0u);
}

TEST(Ap, SingleMatchIsOne) {
  const Box3D gt(Vec3(10, 0, 0), Vec3(4, 2, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(average_precision({det("f", gt, "car", 0.9)}, {{"f", gt, "car"}}), 1.0);
  EXPECT_DOUBLE_EQ(average_precision({}, {{"f", gt, "car"}}), 0.0);
}

TEST(Ap, HandInterpolatedCurve) {
  const Box3D g1(Vec3(10, 0, 0), Vec3(4, 2, 1.5), 0.0);
  const Box3D g2(Vec3(-10, 5, 0), Vec3(4, 2, 1.5), 0.0);
  const Box3D far(Vec3(30, 30, 0), Vec3(4, 2, 1.5), 0.0);
  const std::vector<DetectionRecord> d = {det("f", g1, "car", 0.9), det("f", far, "car", 0.8),
                                          det("f", g2, "car", 0.7)};
  const std::vector<GroundTruthRecord> g = {{"f", g1, "car"}, {"f", g2, "car"}};
  // PR after each rank: (R 0.5, P 1), (0.5, 0.5), (1, 2/3). Interpolated
  // precision is 1 for recall <= 0.5 and 2/3 above.
  EXPECT_NEAR(average_precision(d, g, 0.5, ApMode::kR11), (6.0 + 5.0 * 2.0 / 3.0) / 11.0, 1e-12);
  EXPECT_NEAR(average_precision(d, g, 0.5, ApMode::kR40), (20.0 + 20.0 * 2.0 / 3.0) / 40.0, 1e-12);
  EXPECT_NEAR(average_precision(d, g, 0.5, ApMode::kR11, MatchSpace::k3D), (6.0 + 5.0 * 2.0 / 3.0) / 11.0, 1e-12);
}

TEST(Ap, MatchesAcrossFramesOnly) {
  const Box3D b(Vec3(10, 0, 0), Vec3(4, 2, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(average_precision({det("x", b, "car", 0.9)}, {{"y", b, "car"}}), 0.0);
}

TEST(Cfca, Counts) {
  EXPECT_DOUBLE_EQ(cfca({"car", "bus"}, {"car", "bus"}), 1.0);
  EXPECT_DOUBLE_EQ(cfca({"car", "bus", "car", "truck"}, {"car", "bus", "car", "car"}), 0.75);
  EXPECT_THROW(cfca({"car"}, {"car", "bus"}), Error);
}

TEST(Cfsc, MeanIou) {
  const Box3D a(Vec3(0, 0, 0), Vec3::Ones(), 0.0);
  const Box3D b(Vec3(5, 5, 0), Vec3(2, 2, 2), 0.3);
  EXPECT_NEAR(cfsc({{a, a}, {b}}, {a, b}), 1.0, 1e-12);
  const Box3D half = a.with_center(Vec3(0.5, 0, 0));
  const double oracle = testing::voxel_iou_3d(half, a, 0.005);
  EXPECT_NEAR(oracle, 1.0 / 3.0, 2e-3);
  EXPECT_NEAR(cfsc({{a, half}}, {a}), 0.5 * (1.0 + 1.0 / 3.0), 1e-12);
  EXPECT_THROW(cfsc({{}}, {a}), Error);
}

// ---- layout metrics ----

Layout4D two_object_layout() {
  Layout4D l;
  l.ego_trajectory = Trajectory::stationary(5);
  LayoutObject a;
  a.node_id = 1;
  a.box = Box3D(Vec3(12, 1, -0.8), Vec3(4.5, 1.9, 1.7), 0.0);
  a.trajectory = Trajectory{{{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}}};
  a.motion_state = MotionState::kStraight;
  LayoutObject b;
  b.node_id = 2;
  b.category = Category::kPedestrian;
  b.box = Box3D(Vec3(5, -6, -0.9), Vec3(0.7, 0.7, 1.8), 0.0);
  b.trajectory = Trajectory::stationary(5);
  l.objects = {a, b};
  return l;
}

SceneGraph graph_for(const Layout4D& l) {
  SceneGraph g;
  g.nodes.push_back({0, Category::kEgo, MotionState::kStationary, std::nullopt});
  for (const auto& o : l.objects) g.nodes.push_back({o.node_id, o.category, o.motion_state, o.box});
  return g;
}

TEST(Scr, ConsistentAndHalf) {
  const Layout4D l = two_object_layout();
  SceneGraph g = graph_for(l);
  const RelationConfig rc;
  const Box3D ego = ego_box(Vec3(4.0, 1.8, 1.5));
  g.edges.push_back({1, 2, relate(l.objects[0].box, l.objects[1].box, rc)});
  g.edges.push_back({2, 0, relate(l.objects[1].box, ego, rc)});
  EXPECT_DOUBLE_EQ(scr(l, g, rc), 1.0);
  g.edges[1].relations = RelationSet{Relation::kBehind, Relation::kTaller};
  ASSERT_NE(g.edges[1].relations, relate(l.objects[1].box, ego, rc));
  EXPECT_DOUBLE_EQ(scr(l, g, rc), 0.5);
  g.edges.clear();
  EXPECT_DOUBLE_EQ(scr(l, g, rc), 1.0);
  g.edges.push_back({1, 7, {}});
  EXPECT_THROW(scr(l, g, rc), Error);
}

TEST(Mscr, StraightCountsConsistent) {
  Layout4D l = two_object_layout();
  SceneGraph g = graph_for(l);
  EXPECT_DOUBLE_EQ(mscr(l, g), 1.0);
  g.nodes[2].motion_state = MotionState::kLeftTurn;
  EXPECT_DOUBLE_EQ(mscr(l, g), 0.5);
  l.objects.clear();
  EXPECT_DOUBLE_EQ(mscr(l, g), 1.0);
}

TEST(Collisions, DisjointAndOverlap) {
  const Box3D a(Vec3(0, 0, 0), Vec3::Ones(), 0.0);
  const Box3D b(Vec3(5, 0, 0), Vec3::Ones(), 0.0);
  const Box3D c(Vec3(0.5, 0, 0), Vec3::Ones(), 0.0);
  EXPECT_EQ(bcr({{a, b}, {a, b}}), 0.0);
  EXPECT_EQ(tcr({a, b}, {Trajectory::stationary(3), Trajectory::stationary(3)}), 0.0);
  EXPECT_EQ(bcr({{a, c}}), 1.0);
}

TEST(Collisions, CrossingTrajectoriesTouchOnce) {
  // Both unit cubes reach the origin at step 3 only.
  const Box3D a(Vec3(-6, 0, 0), Vec3::Ones(), 0.0);
  const Box3D b(Vec3(0, -6, 0), Vec3::Ones(), kPi / 2);
  Trajectory ta, tb;
  for (int t = 1; t <= 5; ++t) {
    ta.displacements.emplace_back(2.0 * t, 0.0);
    tb.displacements.emplace_back(0.0, 2.0 * t);
  }
  const auto frames = propagate_boxes({a, b}, {ta, tb});
  ASSERT_EQ(frames.size(), 5u);
  EXPECT_NEAR(frames[2][0].center().x(), 0.0, 1e-12);
  EXPECT_NEAR(frames[2][1].center().y(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(tcr({a, b}, {ta, tb}), 1.0);
  EXPECT_DOUBLE_EQ(bcr(frames), 1.0 / 5.0);
}

}  // namespace
}  // namespace lidargen
