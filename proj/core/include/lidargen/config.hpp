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
#include <optional>
#include <string>

#include "lidargen/diffusion.hpp"
#include "lidargen/json_schema.hpp"
#include "lidargen/layout.hpp"
#include "lidargen/metrics.hpp"
#include "lidargen/range_codec.hpp"
#include "lidargen/registration.hpp"
#include "lidargen/scene_graph.hpp"

namespace lidargen {

struct DiffusionSettings {
  int train_steps = 1024;
  int sample_steps = 256;
  double cosine_s = 0.008;
};

struct SynthSettings {
  double ground_intensity = 0.2;
  double noise_sigma = 0.0;
  double material = 0.5;
};

struct EvalSettings {
  BevGridSpec bev;
  KernelConfig mmd;
  double ap_iou = 0.5;
  int ctc_interval = 1;
  IcpConfig icp;
  /// Height above the ground plane below which points are left out of TTCE
  /// registration; negative disables the cut.
  double ttce_ground_margin = 0.2;
};

/// Every tunable of a run. JSON angles are in degrees.
struct RunConfig {
  std::uint64_t seed = 0;
  SensorConfig sensor;
  WorldBounds bounds;
  DiffusionSettings diffusion;
  TrainConfig training;
  LayoutSamplerConfig layout;
  RelationConfig relations;
  MotionConfig motion;
  FilterConfig filter;
  int edit_dilation = 2;
  SynthSettings synth;
  EvalSettings eval;

  /// Throws kInvalidInput naming the offending setting.
  void validate() const;
  GraphConfig graph_config() const;
};

/// Missing keys keep their defaults; unknown keys raise kSchema.
RunConfig config_from_json(const Json& doc);
Json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

}  // namespace lidargen
