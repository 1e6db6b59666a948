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

#include "lidargen/json_schema.hpp"

#include <charconv>
#include <cmath>

#include "lidargen/errors.hpp"
#include "lidargen/io.hpp"

namespace lidargen {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  fail(ErrorCode::kSchema, path + ": " + msg);
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "." + key, "missing");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected a finite number");
  return v;
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Vec3 vec3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) schema_error(path, "expected an array of 3 numbers");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1)), number(j[2], at(path, 2))};
}

Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Category category(const Json& j, const std::string& path) {
  const auto c = parse_category(text(j, path));
  if (!c) schema_error(path, "unknown category \"" + j.get<std::string>() + "\"");
  return *c;
}

MotionState motion(const Json& j, const std::string& path) {
  const auto m = parse_motion_state(text(j, path));
  if (!m) schema_error(path, "unknown motion state \"" + j.get<std::string>() + "\"");
  return *m;
}

Box3D checked_box(const Json& j, const std::string& path) {
  try {
    return box_from_json(j, path);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchema) throw;
    schema_error(path, e.what());
  }
}

}  // namespace

Json document_header(std::string_view kind) {
  Json j;
  j["schema"] = "lidargen." + std::string(kind);
  j["version"] = std::string(kSchemaVersion);
  return j;
}

void check_document(const Json& doc, std::string_view kind) {
  if (!doc.is_object()) schema_error("$", "expected a JSON object");
  const std::string expected = "lidargen." + std::string(kind);
  const std::string schema = text(field(doc, "schema", "$"), "$.schema");
  if (schema != expected) schema_error("$.schema", "expected \"" + expected + "\", got \"" + schema + "\"");
  const std::string version = text(field(doc, "version", "$"), "$.version");
  int major = 0;
  const auto dot = version.find('.');
  const auto res = std::from_chars(version.data(), version.data() + (dot == std::string::npos ? version.size() : dot), major);
  if (res.ec != std::errc() || dot == std::string::npos) schema_error("$.version", "expected \"major.minor\"");
  if (major > kSchemaMajor) {
    fail(ErrorCode::kUnsupportedVersion, expected + " version " + version + " is newer than supported " +
                                             std::string(kSchemaVersion));
  }
}

Json parse_json(const std::string& text_in, const std::string& source) {
  try {
    return Json::parse(text_in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kSchema, source + ": invalid JSON (" + e.what() + ")");
  }
}

Json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

void write_json_file(const std::string& path, const Json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

Json box_to_json(const Box3D& box) {
  Json j;
  j["center"] = vec3_json(box.center());
  j["size"] = vec3_json(box.size());
  j["yaw"] = box.yaw();
  return j;
}

Box3D box_from_json(const Json& j, const std::string& path) {
  const Vec3 c = vec3(field(j, "center", path), path + ".center");
  const Vec3 s = vec3(field(j, "size", path), path + ".size");
  const double yaw = number(field(j, "yaw", path), path + ".yaw");
  if (!(s.array() > 0.0).all()) schema_error(path + ".size", "sizes must be positive");
  return Box3D(c, s, yaw);
}

Json trajectory_to_json(const Trajectory& trajectory) {
  Json j = Json::array();
  for (const auto& d : trajectory.displacements) j.push_back(Json::array({d.x(), d.y()}));
  return j;
}

Trajectory trajectory_from_json(const Json& j, const std::string& path) {
  Trajectory tr;
  const Json& arr = array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& d = arr[i];
    if (!d.is_array() || d.size() != 2) schema_error(at(path, i), "expected [dx, dy]");
    tr.displacements.emplace_back(number(d[0], at(path, i) + "[0]"), number(d[1], at(path, i) + "[1]"));
  }
  return tr;
}

Json annotation_to_json(const FrameAnnotation& annotation) {
  Json doc = document_header("annotation");
  doc["frame_id"] = annotation.frame_id;
  Json objs = Json::array();
  for (const auto& o : annotation.objects) {
    Json j;
    j["category"] = o.category;
    j["num_points"] = o.num_points;
    j["box"] = box_to_json(o.box);
    if (o.trajectory) j["trajectory"] = trajectory_to_json(*o.trajectory);
    if (o.motion_state) j["motion_state"] = std::string(motion_state_name(*o.motion_state));
    objs.push_back(std::move(j));
  }
  doc["objects"] = std::move(objs);
  if (annotation.ego_trajectory) doc["ego_trajectory"] = trajectory_to_json(*annotation.ego_trajectory);
  if (annotation.ego_motion_state) doc["ego_motion_state"] = std::string(motion_state_name(*annotation.ego_motion_state));
  return doc;
}

FrameAnnotation annotation_from_json(const Json& doc) {
  check_document(doc, "annotation");
  FrameAnnotation a;
  a.frame_id = text(field(doc, "frame_id", "$"), "$.frame_id");
  const Json& objs = array(field(doc, "objects", "$"), "$.objects");
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const std::string p = at("$.objects", i);
    AnnotatedObject o;
    o.category = text(field(objs[i], "category", p), p + ".category");
    o.num_points = integer(field(objs[i], "num_points", p), p + ".num_points");
    if (o.num_points < 0) schema_error(p + ".num_points", "must be non-negative");
    o.box = checked_box(field(objs[i], "box", p), p + ".box");
    if (const Json* t = optional_field(objs[i], "trajectory")) o.trajectory = trajectory_from_json(*t, p + ".trajectory");
    if (const Json* m = optional_field(objs[i], "motion_state")) o.motion_state = motion(*m, p + ".motion_state");
    a.objects.push_back(std::move(o));
  }
  if (const Json* t = optional_field(doc, "ego_trajectory")) a.ego_trajectory = trajectory_from_json(*t, "$.ego_trajectory");
  if (const Json* m = optional_field(doc, "ego_motion_state")) a.ego_motion_state = motion(*m, "$.ego_motion_state");
  return a;
}

Json graph_to_json(const SceneGraph& graph) {
  Json doc = document_header("scene_graph");
  Json nodes = Json::array();
  for (const auto& n : graph.nodes) {
    Json j;
    j["id"] = n.id;
    j["category"] = std::string(category_name(n.category));
    j["motion_state"] = std::string(motion_state_name(n.motion_state));
    if (n.box) j["box"] = box_to_json(*n.box);
    nodes.push_back(std::move(j));
  }
  Json edges = Json::array();
  for (const auto& e : graph.edges) {
    Json rel = Json::array();
    for (Relation r : e.relations.to_vector()) rel.push_back(std::string(relation_name(r)));
    edges.push_back(Json{{"subject", e.subject}, {"object", e.object}, {"relations", std::move(rel)}});
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc;
}

SceneGraph graph_from_json(const Json& doc) {
  check_document(doc, "scene_graph");
  SceneGraph g;
  const Json& nodes = array(field(doc, "nodes", "$"), "$.nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string p = at("$.nodes", i);
    SceneNode n;
    n.id = integer(field(nodes[i], "id", p), p + ".id");
    n.category = category(field(nodes[i], "category", p), p + ".category");
    if (const Json* m = optional_field(nodes[i], "motion_state")) n.motion_state = motion(*m, p + ".motion_state");
    if (const Json* b = optional_field(nodes[i], "box")) n.box = checked_box(*b, p + ".box");
    g.nodes.push_back(n);
  }
  const Json& edges = array(field(doc, "edges", "$"), "$.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = at("$.edges", i);
    SceneEdge e;
    e.subject = integer(field(edges[i], "subject", p), p + ".subject");
    e.object = integer(field(edges[i], "object", p), p + ".object");
    const Json& rel = array(field(edges[i], "relations", p), p + ".relations");
    for (std::size_t k = 0; k < rel.size(); ++k) {
      const auto r = parse_relation(text(rel[k], at(p + ".relations", k)));
      if (!r) schema_error(at(p + ".relations", k), "unknown relation \"" + rel[k].get<std::string>() + "\"");
      e.relations.insert(*r);
    }
    g.edges.push_back(e);
  }
  try {
    g.validate();
  } catch (const Error& e) {
    schema_error("$", e.what());
  }
  return g;
}

namespace {

Json object_json(const LayoutObject& o) {
  Json j;
  j["node_id"] = o.node_id;
  j["category"] = std::string(category_name(o.category));
  j["motion_state"] = std::string(motion_state_name(o.motion_state));
  j["box"] = box_to_json(o.box);
  j["trajectory"] = trajectory_to_json(o.trajectory);
  Json shape = Json::array();
  for (const auto& p : o.shape) shape.push_back(Json::array({p.x, p.y, p.z, p.intensity}));
  j["shape"] = std::move(shape);
  return j;
}

LayoutObject object_from(const Json& j, const std::string& p) {
  LayoutObject o;
  o.node_id = integer(field(j, "node_id", p), p + ".node_id");
  o.category = category(field(j, "category", p), p + ".category");
  if (const Json* m = optional_field(j, "motion_state")) o.motion_state = motion(*m, p + ".motion_state");
  o.box = checked_box(field(j, "box", p), p + ".box");
  if (const Json* t = optional_field(j, "trajectory")) o.trajectory = trajectory_from_json(*t, p + ".trajectory");
  if (const Json* s = optional_field(j, "shape")) {
    const Json& arr = array(*s, p + ".shape");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const Json& q = arr[k];
      const std::string qp = at(p + ".shape", k);
      if (!q.is_array() || q.size() != 4) schema_error(qp, "expected [x, y, z, intensity]");
      o.shape.push_back({number(q[0], qp), number(q[1], qp), number(q[2], qp), number(q[3], qp)});
    }
  }
  return o;
}

}  // namespace

Json layout_to_json(const Layout4D& layout) {
  Json doc = document_header("layout");
  doc["ego_trajectory"] = trajectory_to_json(layout.ego_trajectory);
  Json objs = Json::array();
  for (const auto& o : layout.objects) objs.push_back(object_json(o));
  doc["objects"] = std::move(objs);
  return doc;
}

Layout4D layout_from_json(const Json& doc) {
  check_document(doc, "layout");
  Layout4D l;
  l.ego_trajectory = trajectory_from_json(field(doc, "ego_trajectory", "$"), "$.ego_trajectory");
  const Json& objs = array(field(doc, "objects", "$"), "$.objects");
  for (std::size_t i = 0; i < objs.size(); ++i) {
    LayoutObject o = object_from(objs[i], at("$.objects", i));
    if (o.trajectory.steps() == 0) o.trajectory = Trajectory::stationary(l.ego_trajectory.steps());
    l.objects.push_back(std::move(o));
  }
  try {
    validate_layout(l);
  } catch (const Error& e) {
    schema_error("$", e.what());
  }
  return l;
}

Json scene_spec_to_json(const SceneSpec& spec) {
  Json doc = document_header("scene_spec");
  doc["ground_z"] = spec.ground_z;
  doc["ground_intensity"] = spec.ground_intensity;
  doc["noise_sigma"] = spec.noise_sigma;
  doc["ego_trajectory"] = trajectory_to_json(spec.ego_trajectory);
  Json objs = Json::array();
  for (const auto& o : spec.objects) {
    Json j;
    j["node_id"] = o.node_id;
    j["category"] = std::string(category_name(o.category));
    j["box"] = box_to_json(o.box);
    j["trajectory"] = trajectory_to_json(o.trajectory);
    j["material"] = o.material;
    objs.push_back(std::move(j));
  }
  doc["objects"] = std::move(objs);
  return doc;
}

SceneSpec scene_spec_from_json(const Json& doc) {
  check_document(doc, "scene_spec");
  SceneSpec s;
  if (const Json* v = optional_field(doc, "ground_z")) s.ground_z = number(*v, "$.ground_z");
  if (const Json* v = optional_field(doc, "ground_intensity")) s.ground_intensity = number(*v, "$.ground_intensity");
  if (const Json* v = optional_field(doc, "noise_sigma")) s.noise_sigma = number(*v, "$.noise_sigma");
  s.ego_trajectory = trajectory_from_json(field(doc, "ego_trajectory", "$"), "$.ego_trajectory");
  const Json& objs = array(field(doc, "objects", "$"), "$.objects");
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const std::string p = at("$.objects", i);
    SceneObject o;
    o.node_id = integer(field(objs[i], "node_id", p), p + ".node_id");
    if (const Json* c = optional_field(objs[i], "category")) o.category = category(*c, p + ".category");
    o.box = checked_box(field(objs[i], "box", p), p + ".box");
    if (const Json* t = optional_field(objs[i], "trajectory")) {
      o.trajectory = trajectory_from_json(*t, p + ".trajectory");
    } else {
      o.trajectory = Trajectory::stationary(s.ego_trajectory.steps());
    }
    if (const Json* m = optional_field(objs[i], "material")) o.material = number(*m, p + ".material");
    s.objects.push_back(std::move(o));
  }
  try {
    s.validate();
  } catch (const Error& e) {
    schema_error("$", e.what());
  }
  return s;
}

Json edits_to_json(const std::vector<EditOp>& ops) {
  Json doc = document_header("edit_script");
  Json arr = Json::array();
  for (const auto& op : ops) {
    Json j;
    j["op"] = std::string(edit_kind_name(op.kind));
    switch (op.kind) {
      case EditKind::kInsert:
        if (op.node) j["node"] = object_json(*op.node);
        break;
      case EditKind::kDelete:
        j["target"] = op.target;
        break;
      case EditKind::kDrag:
        j["target"] = op.target;
        j["displacement"] = vec3_json(op.displacement);
        break;
      case EditKind::kRetrajectory:
        j["target"] = op.target;
        if (op.trajectory) j["trajectory"] = trajectory_to_json(*op.trajectory);
        break;
    }
    arr.push_back(std::move(j));
  }
  doc["edits"] = std::move(arr);
  return doc;
}

std::vector<EditOp> edits_from_json(const Json& doc) {
  check_document(doc, "edit_script");
  std::vector<EditOp> ops;
  const Json& arr = array(field(doc, "edits", "$"), "$.edits");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = at("$.edits", i);
    const std::string name = text(field(arr[i], "op", p), p + ".op");
    const auto kind = parse_edit_kind(name);
    if (!kind) schema_error(p + ".op", "unknown edit \"" + name + "\"");
    EditOp op;
    op.kind = *kind;
    if (*kind == EditKind::kInsert) {
      op.node = object_from(field(arr[i], "node", p), p + ".node");
    } else {
      op.target = integer(field(arr[i], "target", p), p + ".target");
    }
    if (*kind == EditKind::kDrag) op.displacement = vec3(field(arr[i], "displacement", p), p + ".displacement");
    if (*kind == EditKind::kRetrajectory) {
      op.trajectory = trajectory_from_json(field(arr[i], "trajectory", p), p + ".trajectory");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

Json detections_to_json(const DetectionSet& set) {
  Json doc = document_header("detections");
  Json dets = Json::array();
  for (const auto& d : set.detections) {
    dets.push_back(Json{{"frame_id", d.frame_id}, {"category", d.category}, {"confidence", d.confidence},
                        {"box", box_to_json(d.box)}});
  }
  Json gts = Json::array();
  for (const auto& g : set.ground_truth) {
    gts.push_back(Json{{"frame_id", g.frame_id}, {"category", g.category}, {"box", box_to_json(g.box)}});
  }
  doc["detections"] = std::move(dets);
  doc["ground_truth"] = std::move(gts);
  return doc;
}

DetectionSet detections_from_json(const Json& doc) {
  check_document(doc, "detections");
  DetectionSet set;
  const Json& dets = array(field(doc, "detections", "$"), "$.detections");
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const std::string p = at("$.detections", i);
    DetectionRecord d;
    d.frame_id = text(field(dets[i], "frame_id", p), p + ".frame_id");
    d.category = text(field(dets[i], "category", p), p + ".category");
    d.confidence = number(field(dets[i], "confidence", p), p + ".confidence");
    if (d.confidence < 0.0 || d.confidence > 1.0) schema_error(p + ".confidence", "must lie in [0, 1]");
    d.box = checked_box(field(dets[i], "box", p), p + ".box");
    set.detections.push_back(std::move(d));
  }
  if (const Json* g = optional_field(doc, "ground_truth")) {
    const Json& gts = array(*g, "$.ground_truth");
    for (std::size_t i = 0; i < gts.size(); ++i) {
      const std::string p = at("$.ground_truth", i);
      GroundTruthRecord r;
      r.frame_id = text(field(gts[i], "frame_id", p), p + ".frame_id");
      r.category = text(field(gts[i], "category", p), p + ".category");
      r.box = checked_box(field(gts[i], "box", p), p + ".box");
      set.ground_truth.push_back(std::move(r));
    }
  }
  return set;
}

Json classifications_to_json(const ClassificationSet& set) {
  Json doc = document_header("classifications");
  doc["predicted"] = set.predicted;
  doc["truth"] = set.truth;
  return doc;
}

ClassificationSet classifications_from_json(const Json& doc) {
  check_document(doc, "classifications");
  ClassificationSet set;
  const Json& pred = array(field(doc, "predicted", "$"), "$.predicted");
  const Json& truth = array(field(doc, "truth", "$"), "$.truth");
  for (std::size_t i = 0; i < pred.size(); ++i) set.predicted.push_back(text(pred[i], at("$.predicted", i)));
  for (std::size_t i = 0; i < truth.size(); ++i) set.truth.push_back(text(truth[i], at("$.truth", i)));
  return set;
}

Json box_samples_to_json(const BoxSampleSet& set) {
  Json doc = document_header("box_samples");
  Json objs = Json::array();
  for (std::size_t i = 0; i < set.truth.size(); ++i) {
    Json samples = Json::array();
    if (i < set.samples.size()) {
      for (const auto& b : set.samples[i]) samples.push_back(box_to_json(b));
    }
    objs.push_back(Json{{"truth", box_to_json(set.truth[i])}, {"samples", std::move(samples)}});
  }
  doc["objects"] = std::move(objs);
  return doc;
}

BoxSampleSet box_samples_from_json(const Json& doc) {
  check_document(doc, "box_samples");
  BoxSampleSet set;
  const Json& objs = array(field(doc, "objects", "$"), "$.objects");
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const std::string p = at("$.objects", i);
    set.truth.push_back(checked_box(field(objs[i], "truth", p), p + ".truth"));
    std::vector<Box3D> samples;
    const Json& arr = array(field(objs[i], "samples", p), p + ".samples");
    for (std::size_t k = 0; k < arr.size(); ++k) samples.push_back(checked_box(arr[k], at(p + ".samples", k)));
    set.samples.push_back(std::move(samples));
  }
  return set;
}

Json poses_to_json(const std::vector<Pose>& poses) {
  Json doc = document_header("poses");
  Json arr = Json::array();
  for (const auto& pose : poses) {
    const Eigen::Matrix4d m = pose.matrix();
    Json rows = Json::array();
    for (int r = 0; r < 4; ++r) rows.push_back(Json::array({m(r, 0), m(r, 1), m(r, 2), m(r, 3)}));
    arr.push_back(std::move(rows));
  }
  doc["poses"] = std::move(arr);
  return doc;
}

std::vector<Pose> poses_from_json(const Json& doc) {
  check_document(doc, "poses");
  const Json& arr = array(field(doc, "poses", "$"), "$.poses");
  std::vector<Pose> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = at("$.poses", i);
    const Json& rows = array(arr[i], p);
    if (rows.size() != 4) schema_error(p, "expected 4 rows");
    Mat3 rot;
    Vec3 trans;
    for (int r = 0; r < 3; ++r) {
      const std::string pr = at(p, static_cast<std::size_t>(r));
      const Json& row = array(rows[static_cast<std::size_t>(r)], pr);
      if (row.size() != 4) schema_error(pr, "expected 4 columns");
      for (int c = 0; c < 3; ++c) rot(r, c) = number(row[static_cast<std::size_t>(c)], at(pr, static_cast<std::size_t>(c)));
      trans[r] = number(row[3], at(pr, 3));
    }
    try {
      out.emplace_back(rot, trans);
    } catch (const Error& e) {
      schema_error(p, e.what());
    }
  }
  return out;
}

Json metric_report(const std::vector<std::pair<std::string, Json>>& metrics) {
  Json doc = document_header("metrics");
  Json m = Json::object();
  for (const auto& [name, value] : metrics) {
    if (m.contains(name)) fail(ErrorCode::kInvalidInput, "metric \"" + name + "\" reported twice");
    m[name] = value;
  }
  doc["metrics"] = std::move(m);
  return doc;
}

Json train_log_to_json(const std::vector<TrainLogEntry>& log) {
  Json doc = document_header("train_log");
  Json entries = Json::array();
  for (const auto& e : log) {
    entries.push_back(Json{{"step", e.step}, {"learning_rate", e.learning_rate}, {"batch_loss", e.batch_loss},
                           {"eval_loss", e.eval_loss}});
  }
  doc["entries"] = std::move(entries);
  return doc;
}

namespace {

Json matrix_json(const MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from(const Json& j, const std::string& path) {
  const Json& rows = array(j, path);
  if (rows.empty()) return MatrixXd(0, 0);
  const std::size_t cols = array(rows[0], at(path, 0)).size();
  MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Json& row = array(rows[r], at(path, r));
    if (row.size() != cols) schema_error(at(path, r), "rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(row[c], at(at(path, r), c));
    }
  }
  return m;
}

}  // namespace

Json training_set_to_json(const TrainingSet& set) {
  Json doc = document_header("training_set");
  doc["x0"] = matrix_json(set.x0);
  doc["cond"] = matrix_json(set.cond);
  return doc;
}

TrainingSet training_set_from_json(const Json& doc) {
  check_document(doc, "training_set");
  TrainingSet set;
  set.x0 = matrix_from(field(doc, "x0", "$"), "$.x0");
  if (const Json* c = optional_field(doc, "cond")) set.cond = matrix_from(*c, "$.cond");
  if (set.cond.size() == 0) set.cond = MatrixXd(set.x0.rows(), 0);
  if (set.cond.rows() != set.x0.rows()) schema_error("$.cond", "row count differs from $.x0");
  return set;
}

}  // namespace lidargen
