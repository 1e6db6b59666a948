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

#include "lidargen/config.hpp"

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <set>
#include <utility>

#include "lidargen/errors.hpp"

namespace lidargen {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void invalid(const std::string& what) { fail(ErrorCode::kInvalidInput, "config: " + what); }

}  // namespace

void RunConfig::validate() const {
  sensor.validate();
  if (!((bounds.max.array() > bounds.min.array()).all())) invalid("world_bounds.max must exceed min");
  if (diffusion.train_steps < 1) invalid("diffusion.train_steps must be >= 1");
  if (diffusion.sample_steps < 1 || diffusion.sample_steps > diffusion.train_steps) {
    invalid("diffusion.sample_steps must lie in [1, train_steps]");
  }
  if (!(diffusion.cosine_s > 0.0)) invalid("diffusion.cosine_s must be positive");
  if (training.batch_size < 1 || training.iterations < 0 || training.ema_every < 1 || training.warmup_steps < 0) {
    invalid("training counts out of range");
  }
  if (!(training.learning_rate >= 0.0) || !(training.ema_decay >= 0.0 && training.ema_decay <= 1.0)) {
    invalid("training rates out of range");
  }
  if (layout.horizon < 1 || layout.num_points < 0 || layout.reject_k < 0) invalid("layout counts out of range");
  if (!(layout.displacement_bound > 0.0)) invalid("layout.displacement_bound must be positive");
  relations.validate();
  if (!(motion.stationary_distance > 0.0 && motion.turn_angle > 0.0)) invalid("motion thresholds must be positive");
  if (filter.min_points < 0) invalid("filter.min_points must be non-negative");
  if (!(layout.ego_size.array() > 0.0).all()) invalid("ego_size must be positive");
  if (edit_dilation < 0) invalid("edit.dilation must be non-negative");
  if (!(synth.noise_sigma >= 0.0)) invalid("synth.noise_sigma must be non-negative");
  if (!(synth.material >= 0.0 && synth.material <= 1.0)) invalid("synth.material must lie in [0, 1]");
  if (!(synth.ground_intensity >= 0.0 && synth.ground_intensity <= 1.0)) invalid("synth.ground_intensity must lie in [0, 1]");
  if (eval.bev.bins < 1) invalid("eval.bev_bins must be >= 1");
  if (eval.ctc_interval < 1) invalid("eval.ctc_interval must be >= 1");
  if (!(eval.ap_iou > 0.0 && eval.ap_iou <= 1.0)) invalid("eval.ap_iou must lie in (0, 1]");
}

GraphConfig RunConfig::graph_config() const {
  GraphConfig g;
  g.relations = relations;
  g.filter = filter;
  g.filter.bounds = bounds;
  g.motion = motion;
  g.ego_size = layout.ego_size;
  return g;
}

namespace {

class Section {
 public:
  Section(const Json& j, std::string path, std::initializer_list<const char*> keys) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(ErrorCode::kSchema, path_ + ": expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
      if (!allowed.contains(k)) fail(ErrorCode::kSchema, path_ + "." + k + ": unknown key");
    }
  }

  const Json* get(const char* key) const {
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  std::string at(const char* key) const { return path_ + "." + key; }

  void num(const char* key, double& out) const {
    if (const Json* v = get(key)) {
      if (!v->is_number()) fail(ErrorCode::kSchema, at(key) + ": expected a number");
      out = v->get<double>();
    }
  }
  void deg(const char* key, double& out) const {
    double d = out / kDeg;
    num(key, d);
    out = d * kDeg;
  }
  template <typename Int>
  void integer(const char* key, Int& out) const {
    if (const Json* v = get(key)) {
      if (!v->is_number_integer()) fail(ErrorCode::kSchema, at(key) + ": expected an integer");
      const bool fits = v->is_number_unsigned() ? std::in_range<Int>(v->get<std::uint64_t>())
                                                : std::in_range<Int>(v->get<std::int64_t>());
      if (!fits) fail(ErrorCode::kSchema, at(key) + ": integer out of range");
      out = v->get<Int>();
    }
  }
  void vec3(const char* key, Vec3& out) const {
    if (const Json* v = get(key)) {
      if (!v->is_array() || v->size() != 3 || !(*v)[0].is_number() || !(*v)[1].is_number() || !(*v)[2].is_number()) {
        fail(ErrorCode::kSchema, at(key) + ": expected an array of 3 numbers");
      }
      out = Vec3((*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>());
    }
  }

 private:
  const Json& j_;
  std::string path_;
};

}  // namespace

RunConfig config_from_json(const Json& doc) {
  check_document(doc, "config");
  RunConfig c;
  const Section root(doc, "$",
                     {"schema", "version", "seed", "sensor", "world_bounds", "diffusion", "training", "layout",
                      "relations", "motion", "filter", "ego_size", "edit", "synth", "eval"});
  root.integer("seed", c.seed);
  root.vec3("ego_size", c.layout.ego_size);
  if (const Json* j = root.get("sensor")) {
    const Section s(*j, "$.sensor",
                    {"width", "height", "fov_up_deg", "fov_down_deg", "max_range", "sensor_height"});
    s.integer("width", c.sensor.width);
    s.integer("height", c.sensor.height);
    s.deg("fov_up_deg", c.sensor.fov_up);
    s.deg("fov_down_deg", c.sensor.fov_down);
    s.num("max_range", c.sensor.max_range);
    s.num("sensor_height", c.sensor.sensor_height);
  }
  if (const Json* j = root.get("world_bounds")) {
    const Section s(*j, "$.world_bounds", {"min", "max"});
    s.vec3("min", c.bounds.min);
    s.vec3("max", c.bounds.max);
  }
  if (const Json* j = root.get("diffusion")) {
    const Section s(*j, "$.diffusion", {"train_steps", "sample_steps", "cosine_s"});
    s.integer("train_steps", c.diffusion.train_steps);
    s.integer("sample_steps", c.diffusion.sample_steps);
    s.num("cosine_s", c.diffusion.cosine_s);
  }
  if (const Json* j = root.get("training")) {
    const Section s(*j, "$.training",
                    {"iterations", "batch_size", "learning_rate", "warmup_steps", "beta1", "beta2", "adam_eps",
                     "ema_decay", "ema_every", "log_every", "eval_batch_size", "time_embed_dim", "hidden",
                     "activation"});
    TrainConfig& t = c.training;
    s.integer("iterations", t.iterations);
    s.integer("batch_size", t.batch_size);
    s.num("learning_rate", t.learning_rate);
    s.integer("warmup_steps", t.warmup_steps);
    s.num("beta1", t.beta1);
    s.num("beta2", t.beta2);
    s.num("adam_eps", t.adam_eps);
    s.num("ema_decay", t.ema_decay);
    s.integer("ema_every", t.ema_every);
    s.integer("log_every", t.log_every);
    s.integer("eval_batch_size", t.eval_batch_size);
    s.integer("time_embed_dim", t.time_embed_dim);
    if (const Json* h = s.get("hidden")) {
      if (!h->is_array()) fail(ErrorCode::kSchema, "$.training.hidden: expected an array of integers");
      t.hidden.clear();
      for (const auto& w : *h) {
        if (!w.is_number_integer() || w.get<int>() < 1) {
          fail(ErrorCode::kSchema, "$.training.hidden: expected positive integers");
        }
        t.hidden.push_back(w.get<int>());
      }
    }
    if (const Json* a = s.get("activation")) {
      const std::string name = a->is_string() ? a->get<std::string>() : "";
      if (name == "silu") {
        t.activation = Activation::kSiLU;
      } else if (name == "tanh") {
        t.activation = Activation::kTanh;
      } else {
        fail(ErrorCode::kSchema, "$.training.activation: expected \"silu\" or \"tanh\"");
      }
    }
  }
  if (const Json* j = root.get("layout")) {
    const Section s(*j, "$.layout",
                    {"horizon", "num_points", "reject_k", "penalty_weight", "penalty_tau", "displacement_bound"});
    s.integer("horizon", c.layout.horizon);
    s.integer("num_points", c.layout.num_points);
    s.integer("reject_k", c.layout.reject_k);
    s.num("penalty_weight", c.layout.penalty_weight);
    s.num("penalty_tau", c.layout.penalty_tau);
    s.num("displacement_bound", c.layout.displacement_bound);
  }
  if (const Json* j = root.get("relations")) {
    const Section s(*j, "$.relations", {"close_by_radius", "size_ratio", "height_margin"});
    s.num("close_by_radius", c.relations.close_by_radius);
    s.num("size_ratio", c.relations.size_ratio);
    s.num("height_margin", c.relations.height_margin);
  }
  if (const Json* j = root.get("motion")) {
    const Section s(*j, "$.motion", {"stationary_distance", "turn_angle_deg"});
    s.num("stationary_distance", c.motion.stationary_distance);
    s.deg("turn_angle_deg", c.motion.turn_angle);
  }
  if (const Json* j = root.get("filter")) {
    const Section s(*j, "$.filter", {"min_points"});
    s.integer("min_points", c.filter.min_points);
  }
  if (const Json* j = root.get("edit")) {
    const Section s(*j, "$.edit", {"dilation"});
    s.integer("dilation", c.edit_dilation);
  }
  if (const Json* j = root.get("synth")) {
    const Section s(*j, "$.synth", {"ground_intensity", "noise_sigma", "material"});
    s.num("ground_intensity", c.synth.ground_intensity);
    s.num("noise_sigma", c.synth.noise_sigma);
    s.num("material", c.synth.material);
  }
  if (const Json* j = root.get("eval")) {
    const Section s(*j, "$.eval",
                    {"bev_bins", "bev_extent", "mmd_kernel", "mmd_sigma", "ap_iou", "ctc_interval",
                     "icp_max_iterations", "icp_tolerance", "ttce_ground_margin"});
    s.integer("bev_bins", c.eval.bev.bins);
    double extent = c.eval.bev.max_x;
    s.num("bev_extent", extent);
    c.eval.bev = BevGridSpec{-extent, extent, -extent, extent, c.eval.bev.bins};
    if (const Json* k = s.get("mmd_kernel")) {
      const std::string name = k->is_string() ? k->get<std::string>() : "";
      if (name == "gaussian") {
        c.eval.mmd.kind = KernelKind::kGaussian;
      } else if (name == "linear") {
        c.eval.mmd.kind = KernelKind::kLinear;
      } else {
        fail(ErrorCode::kSchema, "$.eval.mmd_kernel: expected \"gaussian\" or \"linear\"");
      }
    }
    s.num("mmd_sigma", c.eval.mmd.sigma);
    s.num("ap_iou", c.eval.ap_iou);
    s.integer("ctc_interval", c.eval.ctc_interval);
    s.integer("icp_max_iterations", c.eval.icp.max_iterations);
    s.num("icp_tolerance", c.eval.icp.tolerance);
    s.num("ttce_ground_margin", c.eval.ttce_ground_margin);
  }
  c.layout.bounds = c.bounds;
  c.layout.sample_steps = c.diffusion.sample_steps;
  c.training.diffusion_steps = c.diffusion.train_steps;
  c.training.seed = c.seed;
  c.filter.bounds = c.bounds;
  c.validate();
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json doc = document_header("config");
  doc["seed"] = c.seed;
  doc["sensor"] = Json{{"width", c.sensor.width},
                       {"height", c.sensor.height},
                       {"fov_up_deg", c.sensor.fov_up / kDeg},
                       {"fov_down_deg", c.sensor.fov_down / kDeg},
                       {"max_range", c.sensor.max_range},
                       {"sensor_height", c.sensor.sensor_height}};
  doc["world_bounds"] = Json{{"min", {c.bounds.min.x(), c.bounds.min.y(), c.bounds.min.z()}},
                             {"max", {c.bounds.max.x(), c.bounds.max.y(), c.bounds.max.z()}}};
  doc["diffusion"] = Json{{"train_steps", c.diffusion.train_steps},
                          {"sample_steps", c.diffusion.sample_steps},
                          {"cosine_s", c.diffusion.cosine_s}};
  const TrainConfig& t = c.training;
  doc["training"] = Json{{"iterations", t.iterations},       {"batch_size", t.batch_size},
                         {"learning_rate", t.learning_rate}, {"warmup_steps", t.warmup_steps},
                         {"beta1", t.beta1},                 {"beta2", t.beta2},
                         {"adam_eps", t.adam_eps},           {"ema_decay", t.ema_decay},
                         {"ema_every", t.ema_every},         {"log_every", t.log_every},
                         {"eval_batch_size", t.eval_batch_size}, {"time_embed_dim", t.time_embed_dim},
                         {"hidden", t.hidden},               {"activation", std::string(activation_name(t.activation))}};
  doc["layout"] = Json{{"horizon", c.layout.horizon},
                       {"num_points", c.layout.num_points},
                       {"reject_k", c.layout.reject_k},
                       {"penalty_weight", c.layout.penalty_weight},
                       {"penalty_tau", c.layout.penalty_tau},
                       {"displacement_bound", c.layout.displacement_bound}};
  doc["relations"] = Json{{"close_by_radius", c.relations.close_by_radius},
                          {"size_ratio", c.relations.size_ratio},
                          {"height_margin", c.relations.height_margin}};
  doc["motion"] = Json{{"stationary_distance", c.motion.stationary_distance},
                       {"turn_angle_deg", c.motion.turn_angle / kDeg}};
  doc["filter"] = Json{{"min_points", c.filter.min_points}};
  doc["ego_size"] = Json::array({c.layout.ego_size.x(), c.layout.ego_size.y(), c.layout.ego_size.z()});
  doc["edit"] = Json{{"dilation", c.edit_dilation}};
  doc["synth"] = Json{{"ground_intensity", c.synth.ground_intensity},
                      {"noise_sigma", c.synth.noise_sigma},
                      {"material", c.synth.material}};
  doc["eval"] = Json{{"bev_bins", c.eval.bev.bins},
                     {"bev_extent", c.eval.bev.max_x},
                     {"mmd_kernel", c.eval.mmd.kind == KernelKind::kLinear ? "linear" : "gaussian"},
                     {"mmd_sigma", c.eval.mmd.sigma},
                     {"ap_iou", c.eval.ap_iou},
                     {"ctc_interval", c.eval.ctc_interval},
                     {"icp_max_iterations", c.eval.icp.max_iterations},
                     {"icp_tolerance", c.eval.icp.tolerance},
                     {"ttce_ground_margin", c.eval.ttce_ground_margin}};
  return doc;
}

RunConfig load_config(const std::string& path) {
  try {
    return config_from_json(read_json_file(path));
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

}  // namespace lidargen
