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

#include "lidargen/scene_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "lidargen/errors.hpp"

namespace lidargen {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "ego", "car", "truck", "construction_vehicle", "bus",
    "trailer", "motorcycle", "bicycle", "pedestrian"};

constexpr std::array<std::string_view, kMotionStateCount> kMotionNames = {
    "stationary", "straight", "left-turn", "right-turn"};

constexpr std::array<std::string_view, kRelationCount> kRelationNames = {
    "front", "behind", "left", "right", "close_by",
    "bigger_than", "smaller_than", "taller_than", "shorter_than"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view category_name(Category category) {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

std::optional<Category> parse_category(std::string_view name) {
  if (name == "construction vehicle") return Category::kConstructionVehicle;
  return lookup<Category>(kCategoryNames, name);
}

std::string_view motion_state_name(MotionState state) {
  return kMotionNames[static_cast<std::size_t>(state)];
}

std::optional<MotionState> parse_motion_state(std::string_view name) {
  return lookup<MotionState>(kMotionNames, name);
}

std::string_view relation_name(Relation relation) {
  return kRelationNames[static_cast<std::size_t>(relation)];
}

std::optional<Relation> parse_relation(std::string_view name) {
  if (name == "close by") return Relation::kCloseBy;
  return lookup<Relation>(kRelationNames, name);
}

std::size_t RelationSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Relation> RelationSet::to_vector() const {
  std::vector<Relation> out;
  for (std::size_t i = 0; i < kRelationCount; ++i) {
    const auto r = static_cast<Relation>(i);
    if (contains(r)) out.push_back(r);
  }
  return out;
}

void RelationConfig::validate() const {
  if (!(close_by_radius > 0.0 && height_margin > 0.0)) {
    fail(ErrorCode::kInvalidInput, "relation thresholds must be positive");
  }
  if (!(size_ratio >= 1.0)) fail(ErrorCode::kInvalidInput, "relation size_ratio must be at least 1");
}

const SceneNode& SceneGraph::node(int id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return n;
  }
  fail(ErrorCode::kLookup, "unknown scene-graph node " + std::to_string(id));
}

bool SceneGraph::has_node(int id) const {
  return std::any_of(nodes.begin(), nodes.end(), [id](const SceneNode& n) { return n.id == id; });
}

void SceneGraph::validate() const {
  if (nodes.empty() || nodes.front().id != 0 || nodes.front().category != Category::kEgo) {
    fail(ErrorCode::kInvalidInput, "scene graph must start with the ego node (id 0)");
  }
  std::set<int> ids;
  for (const auto& n : nodes) {
    if (!ids.insert(n.id).second) {
      fail(ErrorCode::kInvalidInput, "duplicate node id " + std::to_string(n.id));
    }
    if (n.id != 0 && n.category == Category::kEgo) {
      fail(ErrorCode::kInvalidInput, "only node 0 may be the ego");
    }
  }
  for (const auto& e : edges) {
    if (!ids.contains(e.subject) || !ids.contains(e.object)) {
      fail(ErrorCode::kInvalidInput, "edge references a missing node");
    }
    if (e.subject == e.object) fail(ErrorCode::kInvalidInput, "self-edges are not allowed");
  }
}

std::vector<FilteredObject> filter_objects(const FrameAnnotation& annotation,
                                           const FilterConfig& filter) {
  std::vector<FilteredObject> out;
  for (std::size_t i = 0; i < annotation.objects.size(); ++i) {
    const auto& obj = annotation.objects[i];
    if (obj.num_points < 0) {
      fail(ErrorCode::kSchema,
           "objects[" + std::to_string(i) + "].num_points must be non-negative");
    }
    const auto category = parse_category(obj.category);
    if (!category || *category == Category::kEgo) continue;
    if (obj.num_points < filter.min_points) continue;
    if (!filter.bounds.contains(obj.box.center())) continue;
    out.push_back(FilteredObject{obj.box, *category, obj.num_points, i});
  }
  return out;
}

RelationSet relate(const Box3D& subject, const Box3D& object, const RelationConfig& cfg) {
  RelationSet labels;
  const Vec3 delta = object.center() - subject.center();
  const double dx = delta.x();
  const double dy = delta.y();
  if (dx >= std::abs(dy)) {
    labels.insert(Relation::kFront);
  } else if (-dx >= std::abs(dy)) {
    labels.insert(Relation::kBehind);
  } else if (dy > 0.0) {
    labels.insert(Relation::kLeft);
  } else {
    labels.insert(Relation::kRight);
  }
  if (delta.norm() < cfg.close_by_radius) labels.insert(Relation::kCloseBy);

  const double ratio = object.volume() / subject.volume();
  if (ratio > cfg.size_ratio) {
    labels.insert(Relation::kBigger);
  } else if (1.0 / ratio > cfg.size_ratio) {
    labels.insert(Relation::kSmaller);
  }
  const double dh = object.size().z() - subject.size().z();
  if (dh > cfg.height_margin) {
    labels.insert(Relation::kTaller);
  } else if (-dh > cfg.height_margin) {
    labels.insert(Relation::kShorter);
  }
  return labels;
}

MotionState classify_motion(const Trajectory& trajectory, const MotionConfig& cfg) {
  if (trajectory.displacements.empty()) return MotionState::kStationary;
  const Vec2 net = trajectory.displacements.back();
  if (net.norm() < cfg.stationary_distance) return MotionState::kStationary;

  // Heading of the first and last non-degenerate steps.
  std::optional<double> first;
  double last = 0.0;
  for (std::size_t t = 1; t <= trajectory.steps(); ++t) {
    const Vec2 step = trajectory.at(t) - trajectory.at(t - 1);
    if (step.norm() <= 1e-9) continue;
    const double heading = std::atan2(step.y(), step.x());
    if (!first) first = heading;
    last = heading;
  }
  if (!first) return MotionState::kStationary;
  const double change = normalize_angle(last - *first);
  if (change > cfg.turn_angle) return MotionState::kLeftTurn;
  if (change < -cfg.turn_angle) return MotionState::kRightTurn;
  return MotionState::kStraight;
}

Box3D ego_box(const Vec3& ego_size) { return Box3D(Vec3::Zero(), ego_size, 0.0); }

SceneGraph build_graph(const FrameAnnotation& annotation, const GraphConfig& cfg) {
  cfg.relations.validate();
  const auto objects = filter_objects(annotation, cfg.filter);

  SceneGraph graph;
  SceneNode ego{0, Category::kEgo, MotionState::kStationary, ego_box(cfg.ego_size)};
  if (annotation.ego_motion_state) {
    ego.motion_state = *annotation.ego_motion_state;
  } else if (annotation.ego_trajectory) {
    ego.motion_state = classify_motion(*annotation.ego_trajectory, cfg.motion);
  }
  graph.nodes.push_back(ego);

  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& src = annotation.objects[objects[i].source_index];
    SceneNode node{static_cast<int>(i + 1), objects[i].category, MotionState::kStationary,
                   objects[i].box};
    if (src.motion_state) {
      node.motion_state = *src.motion_state;
    } else if (src.trajectory) {
      node.motion_state = classify_motion(*src.trajectory, cfg.motion);
    }
    graph.nodes.push_back(node);
  }

  for (std::size_t s = 0; s < objects.size(); ++s) {
    for (std::size_t o = 0; o < objects.size(); ++o) {
      if (s == o) continue;
      graph.edges.push_back(SceneEdge{static_cast<int>(s + 1), static_cast<int>(o + 1),
                                      relate(objects[s].box, objects[o].box, cfg.relations)});
    }
  }
  const Box3D ego_b = *ego.box;
  for (std::size_t s = 0; s < objects.size(); ++s) {
    graph.edges.push_back(
        SceneEdge{static_cast<int>(s + 1), 0, relate(objects[s].box, ego_b, cfg.relations)});
  }
  return graph;
}

}  // namespace lidargen
