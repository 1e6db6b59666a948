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

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "lidargen/diffusion.hpp"
#include "lidargen/geometry.hpp"
#include "lidargen/metrics.hpp"
#include "lidargen/range_codec.hpp"
#include "lidargen/registration.hpp"
#include "lidargen/rng.hpp"
#include "lidargen/synth.hpp"

namespace lidargen {
namespace {

constexpr double kPi = std::numbers::pi;

SceneSpec street(std::size_t steps) {
  SceneSpec spec;
  for (std::size_t t = 1; t <= steps; ++t) spec.ego_trajectory.displacements.emplace_back(1.5 * t, 0.0);
  for (int i = 0; i < 12; ++i) {
    const double x = -30.0 + 5.5 * i;
    const double y = (i % 2 == 0 ? 1.0 : -1.0) * 5.0;
    spec.objects.push_back({i + 1, Category::kCar, Box3D(Vec3(x, y, -0.99), Vec3(4.5, 1.9, 1.7), 0.0),
                            Trajectory::stationary(steps), 0.5});
  }
  return spec;
}

PointCloud frame_cloud() {
  Rng rng(1);
  return raycast_frame(street(1), SensorConfig{}, 0, rng);
}

void BM_RaycastFrame(benchmark::State& state) {
  const SceneSpec spec = street(1);
  SensorConfig cfg;
  cfg.height = static_cast<int>(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(raycast_frame(spec, cfg, 0, rng));
  state.SetItemsProcessed(state.iterations() * cfg.width * cfg.height);
}
BENCHMARK(BM_RaycastFrame)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Project(benchmark::State& state) {
  const PointCloud cloud = frame_cloud();
  const SensorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(project(cloud, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cloud.size()));
}
BENCHMARK(BM_Project)->Unit(benchmark::kMicrosecond);

void BM_Unproject(benchmark::State& state) {
  const SensorConfig cfg;
  const RangeImage img = project(frame_cloud(), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(unproject(img, cfg));
}
BENCHMARK(BM_Unproject)->Unit(benchmark::kMicrosecond);

void BM_Iou3d(benchmark::State& state) {
  Rng rng(2);
  std::vector<Box3D> boxes;
  for (int i = 0; i < 256; ++i) {
    boxes.emplace_back(Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0), Vec3(2, 1, 1.5), rng.uniform(-kPi, kPi));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iou_3d(boxes[i % 256], boxes[(i * 7 + 3) % 256]));
    ++i;
  }
}
BENCHMARK(BM_Iou3d);

void BM_Chamfer(benchmark::State& state) {
  Rng rng(3);
  std::vector<Vec3> x, y;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    x.emplace_back(rng.normal(0, 20), rng.normal(0, 20), rng.normal(0, 1));
    y.emplace_back(rng.normal(0, 20), rng.normal(0, 20), rng.normal(0, 1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(x, y));
}
BENCHMARK(BM_Chamfer)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_IcpConsecutiveFrames(benchmark::State& state) {
  const SceneSpec spec = street(1);
  Rng rng(4);
  const SceneSequence seq = simulate_sequence(spec, SensorConfig{}, 2, rng);
  const PointCloud src = drop_below(seq.frames[1].cloud, spec.ground_z + 0.2);
  const PointCloud dst = drop_below(seq.frames[0].cloud, spec.ground_z + 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(icp(src, dst));
}
BENCHMARK(BM_IcpConsecutiveFrames)->Unit(benchmark::kMillisecond);

void BM_SampleLoopOracle(benchmark::State& state) {
  const NoiseSchedule s = cosine_schedule(1024);
  const GaussianOracleDenoiser d(VectorXd::Constant(8, 0.5), VectorXd::Constant(8, 0.1), s);
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(p_sample_loop(d, MatrixXd(256, 0), 256, s, 256, rng));
}
BENCHMARK(BM_SampleLoopOracle)->Unit(benchmark::kMillisecond);

void BM_MlpGradients(benchmark::State& state) {
  MlpSpec spec;
  spec.data_dim = 8;
  spec.cond_dim = 24;
  const NoiseSchedule s = cosine_schedule(1024);
  Rng rng(6);
  const MlpParams p = init_mlp(spec, rng);
  TrainingBatch b;
  const int rows = static_cast<int>(state.range(0));
  b.x0 = MatrixXd::Random(rows, 8);
  b.cond = MatrixXd::Random(rows, 24);
  b.noise = MatrixXd::Random(rows, 8);
  for (int r = 0; r < rows; ++r) b.timesteps.push_back(1 + r % 1024);
  for (auto _ : state) benchmark::DoNotOptimize(mlp_gradients(spec, p, b, s));
}
BENCHMARK(BM_MlpGradients)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace lidargen

BENCHMARK_MAIN();
