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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lidargen/geometry.hpp"

namespace lidargen {

enum class Category : std::uint8_t {
  kEgo,
  kCar,
  kTruck,
  kConstructionVehicle,
  kBus,
  kTrailer,
  kMotorcycle,
  kBicycle,
  kPedestrian,
};
inline constexpr std::size_t kCategoryCount = 9;

std::string_view category_name(Category category);
/// Accepts the canonical snake_case names and "construction vehicle".
std::optional<Category> parse_category(std::string_view name);

enum class MotionState : std::uint8_t { kStationary, kStraight, kLeftTurn, kRightTurn };
inline constexpr std::size_t kMotionStateCount = 4;

std::string_view motion_state_name(MotionState state);
std::optional<MotionState> parse_motion_state(std::string_view name);

enum class Relation : std::uint8_t {
  kFront,
  kBehind,
  kLeft,
  kRight,
  kCloseBy,
  kBigger,
  kSmaller,
  kTaller,
  kShorter,
};
inline constexpr std::size_t kRelationCount = 9;

std::string_view relation_name(Relation relation);
std::optional<Relation> parse_relation(std::string_view name);

class RelationSet {
 public:
  RelationSet() = default;
  RelationSet(std::initializer_list<Relation> relations) {
    for (auto r : relations) insert(r);
  }

  void insert(Relation r) { bits_ |= bit(r); }
  bool contains(Relation r) const { return (bits_ & bit(r)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::vector<Relation> to_vector() const;

  bool operator==(const RelationSet&) const = default;

 private:
  static std::uint16_t bit(Relation r) {
    return static_cast<std::uint16_t>(1u << static_cast<unsigned>(r));
  }
  std::uint16_t bits_ = 0;
};

/// Thresholds for the relation predicates.
struct RelationConfig {
  double close_by_radius = 10.0;  // meters
  double size_ratio = 1.2;        // volume ratio
  double height_margin = 0.3;     // meters
  void validate() const;
};

/// Thresholds for classifying a trajectory into a MotionState.
struct MotionConfig {
  double stationary_distance = 0.5;           // meters of net displacement
  double turn_angle = 15.0 * 3.14159265358979323846 / 180.0;  // radians
};

struct SceneNode {
  int id = 0;
  Category category = Category::kCar;
  MotionState motion_state = MotionState::kStationary;
  std::optional<Box3D> box;
};

/// Directed edge; labels describe the object as seen from the subject.
struct SceneEdge {
  int subject = 0;
  int object = 0;
  RelationSet relations;
};

/// Ego-centric scene graph. Node 0 is the ego vehicle.
struct SceneGraph {
  std::vector<SceneNode> nodes;
  std::vector<SceneEdge> edges;

  /// Throws kLookup for unknown ids.
  const SceneNode& node(int id) const;
  bool has_node(int id) const;
  /// Throws kInvalidInput when node 0 is missing or not ego, ids repeat, an
  /// edge references a missing node, or an edge is a self-loop.
  void validate() const;
};

/// Parsed annotation record for one LiDAR frame.
struct AnnotatedObject {
  std::string category;
  int num_points = 0;
  Box3D box;
  std::optional<Trajectory> trajectory;
  std::optional<MotionState> motion_state;
};

struct FrameAnnotation {
  std::string frame_id;
  std::vector<AnnotatedObject> objects;
  std::optional<Trajectory> ego_trajectory;
  std::optional<MotionState> ego_motion_state;
};

struct FilterConfig {
  int min_points = 30;
  WorldBounds bounds;
};

struct FilteredObject {
  Box3D box;
  Category category = Category::kCar;
  int num_points = 0;
  std::size_t source_index = 0;
};

/// Keeps objects of the eight foreground categories with at least
/// `min_points` returns whose center lies inside `bounds`. Order preserved.
/// Throws kSchema naming the field for negative point counts.
std::vector<FilteredObject> filter_objects(const FrameAnnotation& annotation,
                                           const FilterConfig& filter = {});

/// Relation labels of `object` relative to `subject`, with
/// delta = object.center - subject.center:
///   front  if  dx >= |dy|;  behind if -dx >= |dy|;  else left (dy > 0) / right
///   close_by iff |delta| < close_by_radius
///   bigger / smaller iff the object/subject volume ratio exceeds size_ratio
///   (or its inverse does)
///   taller / shorter iff |h_object - h_subject| > height_margin
RelationSet relate(const Box3D& subject, const Box3D& object, const RelationConfig& cfg);

MotionState classify_motion(const Trajectory& trajectory, const MotionConfig& cfg = {});

struct GraphConfig {
  RelationConfig relations;
  FilterConfig filter;
  MotionConfig motion;
  Vec3 ego_size = Vec3(4.0, 1.8, 1.5);
};

Box3D ego_box(const Vec3& ego_size);

/// Ego node plus filtered objects (ids 1..M in filter order); one edge per
/// ordered object pair and one edge from every object to the ego.
SceneGraph build_graph(const FrameAnnotation& annotation, const GraphConfig& cfg = {});

}  // namespace lidargen
