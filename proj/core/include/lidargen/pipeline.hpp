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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lidargen/config.hpp"
#include "lidargen/diffusion.hpp"
#include "lidargen/geometry.hpp"
#include "lidargen/json_schema.hpp"
#include "lidargen/layout.hpp"
#include "lidargen/scene_graph.hpp"
#include "lidargen/synth.hpp"

namespace lidargen {

/// Analytic Gaussian priors for the three layout branches. Box codes follow
/// per-category sizes resting on the ground; trajectories follow the motion
/// state and heading carried in the condition; shape points are isotropic.
class LayoutPriors {
 public:
  LayoutPriors(const RunConfig& cfg, const NoiseSchedule& schedule);
  LayoutModels models() const { return {box_.get(), trajectory_.get(), shape_.get()}; }

 private:
  std::unique_ptr<Denoiser> box_;
  std::unique_ptr<Denoiser> trajectory_;
  std::unique_ptr<Denoiser> shape_;
};

/// Typical (length, width, height) in meters.
Vec3 category_size(Category category);
/// Meters travelled per step by a moving object of this category.
double category_speed(Category category);

/// Stage seeds derived from the run seed.
struct StageSeeds {
  std::uint64_t layout = 0;
  std::uint64_t synth = 0;
};
StageSeeds derive_seeds(std::uint64_t seed);

struct PipelineInputs {
  std::optional<std::filesystem::path> annotation;  // FrameAnnotation JSON
  std::optional<std::filesystem::path> graph;       // SceneGraph JSON, used when no annotation is given
  std::optional<std::filesystem::path> box_model;
  std::optional<std::filesystem::path> trajectory_model;
  std::optional<std::filesystem::path> shape_model;
  std::filesystem::path output_dir;
};

struct PipelineResult {
  SceneGraph graph;
  Layout4D layout;
  SceneSpec spec;
  SceneSequence sequence;
  Json metrics;
  std::vector<std::string> artifacts;  // relative to output_dir, sorted
};

/// graph -> layout -> simulated sequence -> range tensors -> conditioning
/// maps -> metrics. Every intermediate is written under output_dir. Stage
/// failures are rethrown with the stage name prefixed.
PipelineResult run_pipeline(const RunConfig& cfg, const PipelineInputs& inputs);

}  // namespace lidargen
