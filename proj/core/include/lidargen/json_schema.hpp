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

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lidargen/edit.hpp"
#include "lidargen/layout.hpp"
#include "lidargen/metrics.hpp"
#include "lidargen/scene_graph.hpp"
#include "lidargen/synth.hpp"

namespace lidargen {

using Json = nlohmann::ordered_json;

// Every document carries "schema": "lidargen.<kind>" and "version": "M.m".
// Readers accept major version 1 and reject higher majors with
// kUnsupportedVersion. Malformed fields raise kSchema with a JSON path.
inline constexpr std::string_view kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

Json document_header(std::string_view kind);
/// Throws kSchema when the header is missing or names another kind.
void check_document(const Json& doc, std::string_view kind);

/// Parses text; syntax errors become kSchema naming `source`.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

Json box_to_json(const Box3D& box);
Box3D box_from_json(const Json& j, const std::string& path);
Json trajectory_to_json(const Trajectory& trajectory);
Trajectory trajectory_from_json(const Json& j, const std::string& path);

Json annotation_to_json(const FrameAnnotation& annotation);
FrameAnnotation annotation_from_json(const Json& doc);

Json graph_to_json(const SceneGraph& graph);
SceneGraph graph_from_json(const Json& doc);

Json layout_to_json(const Layout4D& layout);
Layout4D layout_from_json(const Json& doc);

Json scene_spec_to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const Json& doc);

Json edits_to_json(const std::vector<EditOp>& ops);
std::vector<EditOp> edits_from_json(const Json& doc);

struct DetectionSet {
  std::vector<DetectionRecord> detections;
  std::vector<GroundTruthRecord> ground_truth;
};
Json detections_to_json(const DetectionSet& set);
DetectionSet detections_from_json(const Json& doc);

struct ClassificationSet {
  std::vector<std::string> predicted;
  std::vector<std::string> truth;
};
Json classifications_to_json(const ClassificationSet& set);
ClassificationSet classifications_from_json(const Json& doc);

struct BoxSampleSet {
  std::vector<Box3D> truth;
  std::vector<std::vector<Box3D>> samples;
};
Json box_samples_to_json(const BoxSampleSet& set);
BoxSampleSet box_samples_from_json(const Json& doc);

/// Ego poses of a sequence as row-major 4x4 matrices (kind "poses").
Json poses_to_json(const std::vector<Pose>& poses);
std::vector<Pose> poses_from_json(const Json& doc);

/// Metric report: {"metrics": {name: value}} in insertion order.
Json metric_report(const std::vector<std::pair<std::string, Json>>& metrics);

Json train_log_to_json(const std::vector<TrainLogEntry>& log);

/// Training set document: {"x0": [[...]], "cond": [[...]]}.
Json training_set_to_json(const TrainingSet& set);
TrainingSet training_set_from_json(const Json& doc);

}  // namespace lidargen
