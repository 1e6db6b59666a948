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

#include "lidargen/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <utility>

#include "lidargen/errors.hpp"
#include "lidargen/io.hpp"
#include "lidargen/metrics.hpp"
#include "lidargen/range_codec.hpp"
#include "lidargen/registration.hpp"
#include "lidargen/rng.hpp"
#include "lidargen/warp.hpp"

namespace lidargen {

Vec3 category_size(Category category) {
  switch (category) {
    case Category::kEgo: return {4.0, 1.8, 1.5};
    case Category::kCar: return {4.6, 1.9, 1.7};
    case Category::kTruck: return {7.5, 2.5, 3.0};
    case Category::kConstructionVehicle: return {6.5, 2.8, 3.1};
    case Category::kBus: return {11.0, 2.9, 3.5};
    case Category::kTrailer: return {10.0, 2.8, 3.7};
    case Category::kMotorcycle: return {2.1, 0.8, 1.5};
    case Category::kBicycle: return {1.8, 0.6, 1.3};
    case Category::kPedestrian: return {0.7, 0.7, 1.75};
  }
  return {4.6, 1.9, 1.7};
}

double category_speed(Category category) {
  switch (category) {
    case Category::kPedestrian: return 0.7;
    case Category::kBicycle: return 1.0;
    case Category::kMotorcycle:
    case Category::kEgo:
    case Category::kCar: return 1.5;
    default: return 1.2;
  }
}

namespace {

constexpr double kCenterSigma = 0.125;   // code units of the world extent
constexpr double kGroundSigma = 0.02;    // meters
constexpr double kLogSizeSigma = 0.08;
constexpr double kYawSigma = 0.7;        // sin/cos code, isotropic heading
constexpr double kTrajectorySigma = 0.002;
constexpr double kTurnRate = 0.2;        // radians per step
constexpr double kShapeSigma = 0.35;

Category category_of(const VectorXd& cond) {
  Eigen::Index best = 0;
  cond.head(static_cast<Eigen::Index>(kCategoryCount)).maxCoeff(&best);
  return static_cast<Category>(best);
}

MotionState motion_of(const VectorXd& cond) {
  Eigen::Index best = 0;
  cond.segment(static_cast<Eigen::Index>(kCategoryCount), static_cast<Eigen::Index>(kMotionStateCount))
      .maxCoeff(&best);
  return static_cast<MotionState>(best);
}

}  // namespace

LayoutPriors::LayoutPriors(const RunConfig& cfg, const NoiseSchedule& schedule) {
  const WorldBounds bounds = cfg.bounds;
  const double ground = -cfg.sensor.sensor_height;
  const Vec3 ego_size = cfg.layout.ego_size;
  box_ = std::make_unique<ConditionalGaussianOracle>(
      kBoxCodeDim, kConditionDim,
      [bounds, ground, ego_size](const VectorXd& cond) {
        const Category c = category_of(cond);
        const Vec3 size = c == Category::kEgo ? ego_size : category_size(c);
        VectorXd mu(kBoxCodeDim);
        VectorXd sigma(kBoxCodeDim);
        const Vec3 extent = bounds.extent();
        mu << 0.5, 0.5, (ground + 0.5 * size.z() - bounds.min.z()) / extent.z(), size.array().log().matrix(), 0.0,
            0.0;
        sigma << kCenterSigma, kCenterSigma, kGroundSigma / extent.z(), kLogSizeSigma, kLogSizeSigma,
            kLogSizeSigma, kYawSigma, kYawSigma;
        return std::make_pair(mu, sigma);
      },
      schedule);

  const int horizon = cfg.layout.horizon;
  const double bound = cfg.layout.displacement_bound;
  trajectory_ = std::make_unique<ConditionalGaussianOracle>(
      2 * horizon, kConditionDim + kBoxCodeDim,
      [horizon, bound](const VectorXd& cond) {
        const MotionState m = motion_of(cond);
        VectorXd mu = VectorXd::Zero(2 * horizon);
        if (m == MotionState::kStationary) return std::make_pair(mu, VectorXd(VectorXd::Zero(2 * horizon)));
        const double yaw = std::atan2(cond[kConditionDim + 6], cond[kConditionDim + 7]);
        const double rate = m == MotionState::kLeftTurn ? kTurnRate : m == MotionState::kRightTurn ? -kTurnRate : 0.0;
        const double speed = category_speed(category_of(cond));
        Vec2 pos = Vec2::Zero();
        for (int t = 0; t < horizon; ++t) {
          const double heading = yaw + rate * (t + 0.5);
          pos += speed * Vec2(std::cos(heading), std::sin(heading));
          mu[2 * t] = std::clamp(pos.x() / bound, -1.0, 1.0);
          mu[2 * t + 1] = std::clamp(pos.y() / bound, -1.0, 1.0);
        }
        return std::make_pair(mu, VectorXd(VectorXd::Constant(2 * horizon, kTrajectorySigma)));
      },
      schedule);

  shape_ = std::make_unique<ConditionalGaussianOracle>(
      4, kBoxCodeDim,
      [](const VectorXd&) {
        return std::make_pair(VectorXd(VectorXd::Zero(4)), VectorXd(VectorXd::Constant(4, kShapeSigma)));
      },
      schedule);
}

StageSeeds derive_seeds(std::uint64_t seed) {
  // splitmix64 steps
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return {mix(seed + 0x9e3779b97f4a7c15ULL), mix(seed + 2 * 0x9e3779b97f4a7c15ULL)};
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    fail(e.code(), std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    fail(ErrorCode::kInvalidInput, std::string(name) + ": " + e.what());
  }
}

std::string frame_name(const char* prefix, std::size_t t, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.%s", prefix, t, ext);
  return buf;
}

// Mean |depth difference| over pixels valid in both images; nullopt if none.
std::optional<std::pair<double, std::size_t>> depth_discrepancy(const RangeImage& a, const RangeImage& b) {
  double sum = 0.0;
  std::size_t n = 0;
  for (int r = 0; r < a.height(); ++r) {
    for (int c = 0; c < a.width(); ++c) {
      if (a.valid(r, c) && b.valid(r, c)) {
        sum += std::abs(static_cast<double>(a.depth(r, c)) - static_cast<double>(b.depth(r, c)));
        ++n;
      }
    }
  }
  if (n == 0) return std::nullopt;
  return std::make_pair(sum, n);
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, const PipelineInputs& inputs) {
  stage("config", [&] { cfg.validate(); });
  if (inputs.output_dir.empty()) fail(ErrorCode::kInvalidInput, "config: output directory is required");
  const auto& out = inputs.output_dir;
  const StageSeeds seeds = derive_seeds(cfg.seed);
  PipelineResult res;
  auto record = [&](const std::string& rel) { res.artifacts.push_back(rel); };
  auto save_json = [&](const std::string& rel, const Json& doc) {
    write_json_file((out / rel).string(), doc);
    record(rel);
  };

  res.graph = stage("graph", [&] {
    if (inputs.annotation) {
      return build_graph(annotation_from_json(read_json_file(inputs.annotation->string())), cfg.graph_config());
    }
    if (inputs.graph) return graph_from_json(read_json_file(inputs.graph->string()));
    fail(ErrorCode::kInvalidInput, "either an annotation or a scene graph input is required");
  });
  save_json("config.json", config_to_json(cfg));
  save_json("graph.json", graph_to_json(res.graph));

  const NoiseSchedule schedule = cosine_schedule(cfg.diffusion.train_steps, cfg.diffusion.cosine_s);
  LayoutSample sample = stage("layout", [&] {
    const LayoutPriors priors(cfg, schedule);
    LayoutModels models = priors.models();
    std::optional<MlpDenoiser> box;
    std::optional<MlpDenoiser> traj;
    std::optional<MlpDenoiser> shape;
    if (inputs.box_model) models.box = &box.emplace(read_denoiser(*inputs.box_model));
    if (inputs.trajectory_model) models.trajectory = &traj.emplace(read_denoiser(*inputs.trajectory_model));
    if (inputs.shape_model) models.shape = &shape.emplace(read_denoiser(*inputs.shape_model));
    for (const MlpDenoiser* m : {box ? &*box : nullptr, traj ? &*traj : nullptr, shape ? &*shape : nullptr}) {
      if (m != nullptr && m->train_steps() != cfg.diffusion.train_steps) {
        fail(ErrorCode::kShapeMismatch, "model trained with " + std::to_string(m->train_steps()) +
                                            " diffusion steps, config uses " +
                                            std::to_string(cfg.diffusion.train_steps));
      }
    }
    return sample_layout(res.graph, models, schedule, cfg.layout, seeds.layout);
  });
  res.layout = sample.layout;
  save_json("layout.json", layout_to_json(res.layout));

  res.sequence = stage("synth", [&] {
    res.spec = spec_from_layout(res.layout, cfg.synth.material, -cfg.sensor.sensor_height);
    res.spec.ground_intensity = cfg.synth.ground_intensity;
    res.spec.noise_sigma = cfg.synth.noise_sigma;
    Rng rng(seeds.synth);
    return simulate_sequence(res.spec, cfg.sensor, res.layout.horizon() + 1, rng);
  });
  save_json("scene_spec.json", scene_spec_to_json(res.spec));

  std::vector<RangeImage> images = stage("project", [&] {
    std::vector<RangeImage> imgs;
    for (std::size_t t = 0; t < res.sequence.size(); ++t) {
      const PointCloud& cloud = res.sequence.frames[t].cloud;
      imgs.push_back(project(cloud, cfg.sensor));
      const std::string pc = "frames/" + frame_name("frame", t, "lcpc");
      const std::string rt = "frames/" + frame_name("frame", t, "lcrt");
      write_pointcloud(cloud, out / pc);
      write_range_tensor(encode_tensor(imgs.back(), cfg.sensor), out / rt);
      record(pc);
      record(rt);
    }
    return imgs;
  });

  const std::optional<double> cond_mae = stage("warp", [&]() -> std::optional<double> {
    const FrameDecomposition d0 = decompose_frame(res.sequence.frames[0].cloud, res.layout, 0);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 1; t < res.sequence.size(); ++t) {
      const FrameDecomposition prev = decompose_frame(res.sequence.frames[t - 1].cloud, res.layout, t - 1);
      const RangeImage cond = conditioning_map(d0, prev, res.layout, t, cfg.sensor);
      const std::string rel = "conditioning/" + frame_name("cond", t, "lcrt");
      write_range_tensor(encode_tensor(cond, cfg.sensor), out / rel);
      record(rel);
      if (const auto d = depth_discrepancy(cond, images[t])) {
        sum += d->first;
        n += d->second;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  });

  res.metrics = stage("metrics", [&] {
    std::vector<std::pair<std::string, Json>> m;
    std::vector<Box3D> boxes;
    std::vector<Trajectory> trajs;
    for (const auto& o : res.layout.objects) {
      boxes.push_back(o.box);
      trajs.push_back(o.trajectory);
    }
    const std::vector<Pose> poses = res.sequence.poses();
    m.emplace_back("scr", scr(res.layout, res.graph, cfg.relations, cfg.layout.ego_size));
    m.emplace_back("mscr", mscr(res.layout, res.graph, cfg.motion));
    m.emplace_back("bcr", bcr(propagate_boxes(boxes, trajs)));
    m.emplace_back("tcr", tcr(boxes, trajs));
    m.emplace_back("layout_collisions", sample.collisions);
    m.emplace_back("layout_rejections", sample.rejections);
    m.emplace_back("layout_score", sample.score);
    m.emplace_back("conditioning_depth_mae", optional_number(cond_mae));
    std::optional<double> ctc_value;
    if (res.sequence.size() > static_cast<std::size_t>(cfg.eval.ctc_interval)) {
      ctc_value = ctc(res.sequence, poses, static_cast<std::size_t>(cfg.eval.ctc_interval));
    }
    m.emplace_back("ctc", optional_number(ctc_value));
    TtceConfig tc;
    tc.icp = cfg.eval.icp;
    if (cfg.eval.ttce_ground_margin >= 0.0) tc.ground_cut = -cfg.sensor.sensor_height + cfg.eval.ttce_ground_margin;
    std::optional<PoseError> te;
    try {
      te = ttce(res.sequence, poses, tc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerate) throw;
    }
    m.emplace_back("ttce_translation", optional_number(te ? std::optional<double>(te->translation) : std::nullopt));
    m.emplace_back("ttce_rotation", optional_number(te ? std::optional<double>(te->rotation) : std::nullopt));
    const BevHistogram first = bev_histogram(res.sequence.frames.front().cloud, cfg.eval.bev);
    const BevHistogram last = bev_histogram(res.sequence.frames.back().cloud, cfg.eval.bev);
    m.emplace_back("bev_jsd_first_last", jsd(first, last));
    return metric_report(m);
  });
  save_json("metrics.json", res.metrics);

  Json manifest = document_header("manifest");
  manifest["seed"] = cfg.seed;
  manifest["stage_seeds"] = Json{{"layout", seeds.layout}, {"synth", seeds.synth}};
  manifest["inputs"] = Json{
      {"annotation", inputs.annotation ? Json(inputs.annotation->filename().string()) : Json(nullptr)},
      {"graph", inputs.graph ? Json(inputs.graph->filename().string()) : Json(nullptr)},
      {"box_model", inputs.box_model ? Json(inputs.box_model->filename().string()) : Json(nullptr)},
      {"trajectory_model", inputs.trajectory_model ? Json(inputs.trajectory_model->filename().string()) : Json(nullptr)},
      {"shape_model", inputs.shape_model ? Json(inputs.shape_model->filename().string()) : Json(nullptr)}};
  std::sort(res.artifacts.begin(), res.artifacts.end());
  manifest["artifacts"] = res.artifacts;  // everything except the manifest itself
  write_json_file((out / "manifest.json").string(), manifest);
  res.artifacts.push_back("manifest.json");
  std::sort(res.artifacts.begin(), res.artifacts.end());
  return res;
}

}  // namespace lidargen
