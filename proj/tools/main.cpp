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

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "export.hpp"
#include "lidargen/config.hpp"
#include "lidargen/edit.hpp"
#include "lidargen/errors.hpp"
#include "lidargen/io.hpp"
#include "lidargen/json_schema.hpp"
#include "lidargen/metrics.hpp"
#include "lidargen/pipeline.hpp"
#include "lidargen/registration.hpp"
#include "lidargen/synth.hpp"
#include "lidargen/warp.hpp"

namespace fs = std::filesystem;
using namespace lidargen;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;

  RunConfig load() const {
    RunConfig cfg = config.empty() ? config_from_json(document_header("config")) : load_config(config);
    if (seed) {
      cfg.seed = *seed;
      cfg.training.seed = *seed;
    }
    return cfg;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("-c,--config", common.config, "Run configuration JSON")->check(CLI::ExistingFile);
  cmd->add_option("-s,--seed", common.seed, "Override the configured seed");
}

void emit(const Json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json_file(out, doc);
  }
}

std::string lower_ext(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return e;
}

SceneSpec scene_input(const std::string& layout_path, const std::string& spec_path, const RunConfig& cfg) {
  if (!spec_path.empty()) return scene_spec_from_json(read_json_file(spec_path));
  if (layout_path.empty()) fail(ErrorCode::kInvalidInput, "either --layout or --spec is required");
  SceneSpec spec = spec_from_layout(layout_from_json(read_json_file(layout_path)), cfg.synth.material,
                                    -cfg.sensor.sensor_height);
  spec.ground_intensity = cfg.synth.ground_intensity;
  spec.noise_sigma = cfg.synth.noise_sigma;
  return spec;
}

// Frames written by simulate-seq or pipeline: frames/frame_NNN.lcpc.
std::vector<PointCloud> read_frames(const fs::path& dir) {
  const fs::path frames = dir / "frames";
  if (!fs::is_directory(frames)) fail(ErrorCode::kIo, frames.string() + ": no such directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(frames)) {
    if (e.path().extension() == ".lcpc") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PointCloud> out;
  for (const auto& f : files) out.push_back(read_pointcloud(f));
  return out;
}

std::vector<PointCloud> read_clouds(const std::vector<std::string>& paths) {
  std::vector<PointCloud> out;
  for (const auto& p : paths) out.push_back(read_pointcloud(p));
  return out;
}

// Model flags shared by sample-layout and pipeline.
struct ModelPaths {
  std::string box;
  std::string trajectory;
  std::string shape;
};

void add_models(CLI::App* cmd, ModelPaths& m) {
  cmd->add_option("--box-model", m.box, "Trained box denoiser (.lcdn)")->check(CLI::ExistingFile);
  cmd->add_option("--trajectory-model", m.trajectory, "Trained trajectory denoiser (.lcdn)")->check(CLI::ExistingFile);
  cmd->add_option("--shape-model", m.shape, "Trained shape denoiser (.lcdn)")->check(CLI::ExistingFile);
}

int run_build_graph(const Common& common, const std::string& annotation, const std::string& out) {
  const RunConfig cfg = common.load();
  emit(graph_to_json(build_graph(annotation_from_json(read_json_file(annotation)), cfg.graph_config())), out);
  return 0;
}

int run_sample_layout(const Common& common, const std::string& graph_path, const ModelPaths& paths,
                      const std::string& out) {
  const RunConfig cfg = common.load();
  const SceneGraph graph = graph_from_json(read_json_file(graph_path));
  const NoiseSchedule schedule = cosine_schedule(cfg.diffusion.train_steps, cfg.diffusion.cosine_s);
  const LayoutPriors priors(cfg, schedule);
  LayoutModels models = priors.models();
  std::optional<MlpDenoiser> box;
  std::optional<MlpDenoiser> traj;
  std::optional<MlpDenoiser> shape;
  if (!paths.box.empty()) models.box = &box.emplace(read_denoiser(paths.box));
  if (!paths.trajectory.empty()) models.trajectory = &traj.emplace(read_denoiser(paths.trajectory));
  if (!paths.shape.empty()) models.shape = &shape.emplace(read_denoiser(paths.shape));
  const LayoutSample s = sample_layout(graph, models, schedule, cfg.layout, derive_seeds(cfg.seed).layout);
  write_json_file(out, layout_to_json(s.layout));
  std::cout << Json{{"rejections", s.rejections}, {"collisions", s.collisions}, {"score", s.score}}.dump() << '\n';
  return 0;
}

int run_synth(const Common& common, const std::string& layout, const std::string& spec_path,
              const std::string& out_spec, std::size_t frame, const std::string& out) {
  const RunConfig cfg = common.load();
  const SceneSpec spec = scene_input(layout, spec_path, cfg);
  Rng rng(derive_seeds(cfg.seed).synth);
  const PointCloud cloud = raycast_frame(spec, cfg.sensor, frame, rng);
  if (!out_spec.empty()) write_json_file(out_spec, scene_spec_to_json(spec));
  write_pointcloud(cloud, out);
  return 0;
}

int run_project(const Common& common, const std::string& in, const std::string& out) {
  const RunConfig cfg = common.load();
  write_range_tensor(encode_tensor(project(read_pointcloud(in), cfg.sensor), cfg.sensor), out);
  return 0;
}

int run_unproject(const Common& common, const std::string& in, const std::string& out) {
  const RunConfig cfg = common.load();
  write_pointcloud(unproject(decode_tensor(read_range_tensor(in), cfg.sensor), cfg.sensor), out);
  return 0;
}

int run_warp_next(const Common& common, const std::string& frame0, const std::string& prev, const std::string& layout_path,
                  std::size_t t, const std::string& out, const std::string& out_cloud) {
  const RunConfig cfg = common.load();
  if (t < 1) fail(ErrorCode::kInvalidInput, "--t must be at least 1");
  const Layout4D layout = layout_from_json(read_json_file(layout_path));
  const FrameDecomposition d0 = decompose_frame(read_pointcloud(frame0), layout, 0);
  const FrameDecomposition dp = decompose_frame(read_pointcloud(prev), layout, t - 1);
  write_range_tensor(encode_tensor(conditioning_map(d0, dp, layout, t, cfg.sensor), cfg.sensor), out);
  if (!out_cloud.empty()) write_pointcloud(conditioning_cloud(d0, dp, layout, t), out_cloud);
  return 0;
}

int run_edit(const std::string& layout_path, const std::string& script, const std::string& out) {
  const Layout4D before = layout_from_json(read_json_file(layout_path));
  const EditResult r = apply_edits(before, edits_from_json(read_json_file(script)));
  write_json_file(out, layout_to_json(r.layout));
  Json collisions = Json::array();
  for (const auto& [a, b] : r.collisions) collisions.push_back(Json::array({a, b}));
  std::cout << Json{{"changed", changed_nodes(before, r.layout)}, {"collisions", collisions}}.dump() << '\n';
  return 0;
}

int run_inpaint(const Common& common, const std::string& before_path, const std::string& after_path,
                const std::string& out, const std::string& mask_out) {
  const RunConfig cfg = common.load();
  const Layout4D before = layout_from_json(read_json_file(before_path));
  const Layout4D after = layout_from_json(read_json_file(after_path));
  auto frame0 = [&](const Layout4D& l) {
    SceneSpec spec = spec_from_layout(l, cfg.synth.material, -cfg.sensor.sensor_height);
    spec.ground_intensity = cfg.synth.ground_intensity;
    spec.noise_sigma = cfg.synth.noise_sigma;
    Rng rng(derive_seeds(cfg.seed).synth);
    return project(raycast_frame(spec, cfg.sensor, 0, rng), cfg.sensor);
  };
  const RangeImage original = frame0(before);
  const RangeImage target = frame0(after);
  const EditMask mask = edit_mask(before, after, cfg.sensor, cfg.edit_dilation, 0);
  const NoiseSchedule schedule = cosine_schedule(cfg.diffusion.train_steps, cfg.diffusion.cosine_s);
  Rng rng(cfg.seed);
  const InpaintResult r = resynthesize(original, target, mask, cfg.sensor, schedule, cfg.diffusion.sample_steps, rng);
  write_range_tensor(encode_tensor(r.image, cfg.sensor), out);
  if (!mask_out.empty()) {
    RangeTensor m(mask.height, mask.width, 1);
    for (int row = 0; row < mask.height; ++row) {
      for (int col = 0; col < mask.width; ++col) m.at(row, col, 0) = static_cast<float>(mask.at(row, col));
    }
    write_range_tensor(m, mask_out);
  }
  std::cout << Json{{"masked_pixels", mask.count()}}.dump() << '\n';
  return 0;
}

int run_simulate_seq(const Common& common, const std::string& layout, const std::string& spec_path,
                     std::optional<std::size_t> frames, const std::string& out_dir) {
  const RunConfig cfg = common.load();
  const SceneSpec spec = scene_input(layout, spec_path, cfg);
  Rng rng(derive_seeds(cfg.seed).synth);
  const SceneSequence seq = simulate_sequence(spec, cfg.sensor, frames.value_or(spec.horizon() + 1), rng);
  const fs::path dir(out_dir);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03zu.lcpc", t);
    write_pointcloud(seq.frames[t].cloud, dir / "frames" / name);
  }
  write_json_file((dir / "poses.json").string(), poses_to_json(seq.poses()));
  write_json_file((dir / "scene_spec.json").string(), scene_spec_to_json(spec));
  return 0;
}

struct EvalInputs {
  std::string layout;
  std::string graph;
  std::string detections;
  std::string classifications;
  std::string box_samples;
  std::string sequence_dir;
  std::vector<std::string> generated;
  std::vector<std::string> reference;
  std::string out;
};

int run_eval(const Common& common, const EvalInputs& in) {
  const RunConfig cfg = common.load();
  std::vector<std::pair<std::string, Json>> m;
  bool any = false;
  if (!in.layout.empty() || !in.graph.empty()) {
    if (in.layout.empty() || in.graph.empty()) fail(ErrorCode::kInvalidInput, "--layout and --graph go together");
    any = true;
    const Layout4D layout = layout_from_json(read_json_file(in.layout));
    const SceneGraph graph = graph_from_json(read_json_file(in.graph));
    std::vector<Box3D> boxes;
    std::vector<Trajectory> trajs;
    for (const auto& o : layout.objects) {
      boxes.push_back(o.box);
      trajs.push_back(o.trajectory);
    }
    m.emplace_back("scr", scr(layout, graph, cfg.relations, cfg.layout.ego_size));
    m.emplace_back("mscr", mscr(layout, graph, cfg.motion));
    m.emplace_back("bcr", bcr(propagate_boxes(boxes, trajs)));
    m.emplace_back("tcr", tcr(boxes, trajs));
  }
  if (!in.detections.empty()) {
    any = true;
    const DetectionSet d = detections_from_json(read_json_file(in.detections));
    m.emplace_back("ap_r11_bev", average_precision(d.detections, d.ground_truth, cfg.eval.ap_iou, ApMode::kR11, MatchSpace::kBev));
    m.emplace_back("ap_r40_bev", average_precision(d.detections, d.ground_truth, cfg.eval.ap_iou, ApMode::kR40, MatchSpace::kBev));
    m.emplace_back("ap_r11_3d", average_precision(d.detections, d.ground_truth, cfg.eval.ap_iou, ApMode::kR11, MatchSpace::k3D));
    m.emplace_back("ap_r40_3d", average_precision(d.detections, d.ground_truth, cfg.eval.ap_iou, ApMode::kR40, MatchSpace::k3D));
    std::set<std::string> classes;
    for (const auto& r : d.detections) classes.insert(r.category);
    for (const auto& r : d.ground_truth) classes.insert(r.category);
    Json f = Json::object();
    for (const auto& e : fdc(d.detections, {classes.begin(), classes.end()})) {
      f[e.category] = Json{{"mean_confidence", e.mean_confidence ? Json(*e.mean_confidence) : Json(nullptr)},
                           {"count", e.count}};
    }
    m.emplace_back("fdc", f);
  }
  if (!in.classifications.empty()) {
    any = true;
    const ClassificationSet c = classifications_from_json(read_json_file(in.classifications));
    m.emplace_back("cfca", cfca(c.predicted, c.truth));
  }
  if (!in.box_samples.empty()) {
    any = true;
    const BoxSampleSet b = box_samples_from_json(read_json_file(in.box_samples));
    m.emplace_back("cfsc", cfsc(b.samples, b.truth));
  }
  if (!in.sequence_dir.empty()) {
    any = true;
    const fs::path dir(in.sequence_dir);
    const std::vector<PointCloud> clouds = read_frames(dir);
    const std::vector<Pose> poses = poses_from_json(read_json_file((dir / "poses.json").string()));
    if (poses.size() != clouds.size()) fail(ErrorCode::kCountMismatch, "poses.json and frames/ disagree on frame count");
    SceneSequence seq;
    for (std::size_t i = 0; i < clouds.size(); ++i) seq.frames.push_back({clouds[i], poses[i]});
    m.emplace_back("ctc", ctc(seq, poses, static_cast<std::size_t>(cfg.eval.ctc_interval)));
    TtceConfig tc;
    tc.icp = cfg.eval.icp;
    if (cfg.eval.ttce_ground_margin >= 0.0) tc.ground_cut = -cfg.sensor.sensor_height + cfg.eval.ttce_ground_margin;
    const PoseError e = ttce(seq, poses, tc);
    m.emplace_back("ttce_translation", e.translation);
    m.emplace_back("ttce_rotation", e.rotation);
  }
  if (!in.generated.empty() || !in.reference.empty()) {
    if (in.generated.empty() || in.reference.empty()) {
      fail(ErrorCode::kInvalidInput, "--generated and --reference go together");
    }
    any = true;
    const std::vector<PointCloud> gen = read_clouds(in.generated);
    const std::vector<PointCloud> ref = read_clouds(in.reference);
    PointCloud gen_all;
    PointCloud ref_all;
    for (const auto& c : gen) gen_all.points.insert(gen_all.points.end(), c.begin(), c.end());
    for (const auto& c : ref) ref_all.points.insert(ref_all.points.end(), c.begin(), c.end());
    m.emplace_back("bev_jsd", jsd(bev_histogram(gen_all, cfg.eval.bev), bev_histogram(ref_all, cfg.eval.bev)));
    if (gen.size() == ref.size()) {
      double sum = 0.0;
      for (std::size_t i = 0; i < gen.size(); ++i) sum += chamfer(gen[i], ref[i]);
      m.emplace_back("chamfer", sum / static_cast<double>(gen.size()));
    } else {
      m.emplace_back("chamfer", nullptr);
    }
    auto stack = [&](const std::vector<PointCloud>& clouds, bool range) {
      std::vector<VectorXd> rows;
      for (const auto& c : clouds) {
        rows.push_back(range ? range_patch_features(project(c, cfg.sensor), cfg.sensor) : point_features(c));
      }
      MatrixXd f(static_cast<Eigen::Index>(rows.size()), rows.front().size());
      for (std::size_t i = 0; i < rows.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
      return f;
    };
    const MatrixXd pg = stack(gen, false);
    const MatrixXd pr = stack(ref, false);
    m.emplace_back("mmd", mmd(pg, pr, cfg.eval.mmd));
    if (gen.size() >= 2 && ref.size() >= 2) {
      m.emplace_back("fpd", frechet(FeatureSet{pg}, FeatureSet{pr}));
      m.emplace_back("frd", frechet(FeatureSet{stack(gen, true)}, FeatureSet{stack(ref, true)}));
    } else {
      m.emplace_back("fpd", nullptr);
      m.emplace_back("frd", nullptr);
    }
  }
  if (!any) fail(ErrorCode::kInvalidInput, "eval: no inputs given");
  emit(metric_report(m), in.out);
  return 0;
}

int run_train(const Common& common, const std::string& data, const std::string& out, const std::string& log,
              std::optional<int> iterations) {
  RunConfig cfg = common.load();
  if (iterations) cfg.training.iterations = *iterations;
  cfg.validate();
  const TrainResult r = train_denoiser(training_set_from_json(read_json_file(data)), cfg.training);
  write_denoiser(r.denoiser(), out);
  if (!log.empty()) write_json_file(log, train_log_to_json(r.log));
  const TrainLogEntry& last = r.log.back();
  std::cout << Json{{"step", last.step}, {"eval_loss", last.eval_loss}, {"batch_loss", last.batch_loss}}.dump() << '\n';
  return 0;
}

int run_plot_export(const Common& common, const std::string& in, const std::string& kind, const std::string& out) {
  const RunConfig cfg = common.load();
  PointCloud cloud;
  RangeImage image;
  if (lower_ext(in) == ".lcrt") {
    image = decode_tensor(read_range_tensor(in), cfg.sensor);
    if (kind == "bev") cloud = unproject(image, cfg.sensor);
  } else {
    cloud = read_pointcloud(in);
    if (kind == "range") image = project(cloud, cfg.sensor);
  }
  const std::string ext = lower_ext(out);
  if (ext != ".png" && ext != ".csv") fail(ErrorCode::kInvalidInput, "--out must end in .png or .csv");
  if (kind == "bev") {
    const BevHistogram h = bev_histogram(cloud, cfg.eval.bev);
    ext == ".png" ? tools::write_png(tools::bev_image(h), out) : tools::write_bev_csv(h, out);
  } else {
    ext == ".png" ? tools::write_png(tools::range_image(image, cfg.sensor), out) : tools::write_range_csv(image, out);
  }
  return 0;
}

int run_pipeline_cmd(const Common& common, const std::string& annotation, const std::string& graph,
                     const ModelPaths& paths, const std::string& out_dir) {
  const RunConfig cfg = common.load();
  PipelineInputs in;
  if (!annotation.empty()) in.annotation = annotation;
  if (!graph.empty()) in.graph = graph;
  if (!paths.box.empty()) in.box_model = paths.box;
  if (!paths.trajectory.empty()) in.trajectory_model = paths.trajectory;
  if (!paths.shape.empty()) in.shape_model = paths.shape;
  in.output_dir = out_dir;
  const PipelineResult r = run_pipeline(cfg, in);
  std::cout << r.metrics.dump(2) << '\n';
  return 0;
}

void print_error(std::string_view code, const std::string& message) {
  std::cerr << Json{{"error", Json{{"code", code}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR scene generation toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;
  Common common;

  std::string annotation, graph, out, layout, spec, out_spec, in, frame0, prev, out_cloud, script, edited, mask_out,
      out_dir, data, log, kind = "bev";
  std::size_t frame = 0;
  std::size_t t = 1;
  std::optional<std::size_t> frames;
  std::optional<int> iterations;
  ModelPaths models;
  EvalInputs eval;

  auto* c = app.add_subcommand("build-graph", "Build a scene graph from an annotation");
  add_common(c, common);
  c->add_option("-a,--annotation", annotation, "Annotation JSON")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", out, "Output graph JSON (stdout if omitted)");
  c->callback([&] { action = [&] { return run_build_graph(common, annotation, out); }; });

  c = app.add_subcommand("sample-layout", "Sample a 4D layout from a scene graph");
  add_common(c, common);
  c->add_option("-g,--graph", graph, "Scene graph JSON")->required()->check(CLI::ExistingFile);
  add_models(c, models);
  c->add_option("-o,--out", out, "Output layout JSON")->required();
  c->callback([&] { action = [&] { return run_sample_layout(common, graph, models, out); }; });

  c = app.add_subcommand("synth", "Ray-cast one frame of a layout or scene spec");
  add_common(c, common);
  c->add_option("-l,--layout", layout, "Layout JSON")->check(CLI::ExistingFile);
  c->add_option("--spec", spec, "Scene spec JSON")->check(CLI::ExistingFile);
  c->add_option("--frame", frame, "Frame index");
  c->add_option("--out-spec", out_spec, "Also write the scene spec");
  c->add_option("-o,--out", out, "Output point cloud (.lcpc)")->required();
  c->callback([&] { action = [&] { return run_synth(common, layout, spec, out_spec, frame, out); }; });

  c = app.add_subcommand("project", "Point cloud to range tensor");
  add_common(c, common);
  c->add_option("-i,--in", in, "Point cloud (.lcpc)")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", out, "Range tensor (.lcrt)")->required();
  c->callback([&] { action = [&] { return run_project(common, in, out); }; });

  c = app.add_subcommand("unproject", "Range tensor to point cloud");
  add_common(c, common);
  c->add_option("-i,--in", in, "Range tensor (.lcrt)")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", out, "Point cloud (.lcpc)")->required();
  c->callback([&] { action = [&] { return run_unproject(common, in, out); }; });

  c = app.add_subcommand("warp-next", "Conditioning map for frame t from frame 0 and frame t-1");
  add_common(c, common);
  c->add_option("--frame0", frame0, "Frame 0 point cloud")->required()->check(CLI::ExistingFile);
  c->add_option("--prev", prev, "Frame t-1 point cloud")->required()->check(CLI::ExistingFile);
  c->add_option("-l,--layout", layout, "Layout JSON")->required()->check(CLI::ExistingFile);
  c->add_option("-t,--t", t, "Target frame index (>= 1)");
  c->add_option("-o,--out", out, "Conditioning range tensor (.lcrt)")->required();
  c->add_option("--out-cloud", out_cloud, "Also write the warped cloud");
  c->callback([&] { action = [&] { return run_warp_next(common, frame0, prev, layout, t, out, out_cloud); }; });

  c = app.add_subcommand("edit", "Apply an edit script to a layout");
  c->add_option("-l,--layout", layout, "Layout JSON")->required()->check(CLI::ExistingFile);
  c->add_option("--script", script, "Edit script JSON")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", out, "Edited layout JSON")->required();
  c->callback([&] { action = [&] { return run_edit(layout, script, out); }; });

  c = app.add_subcommand("inpaint", "Resynthesize the region changed between two layouts");
  add_common(c, common);
  c->add_option("-l,--layout", layout, "Layout before the edit")->required()->check(CLI::ExistingFile);
  c->add_option("--edited", edited, "Layout after the edit")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", out, "Inpainted range tensor (.lcrt)")->required();
  c->add_option("--mask-out", mask_out, "Also write the edit mask as a 1-channel tensor");
  c->callback([&] { action = [&] { return run_inpaint(common, layout, edited, out, mask_out); }; });

  c = app.add_subcommand("simulate-seq", "Ray-cast a sequence with ground-truth poses");
  add_common(c, common);
  c->add_option("-l,--layout", layout, "Layout JSON")->check(CLI::ExistingFile);
  c->add_option("--spec", spec, "Scene spec JSON")->check(CLI::ExistingFile);
  c->add_option("--frames", frames, "Number of frames (default horizon + 1)");
  c->add_option("-o,--out-dir", out_dir, "Output directory")->required();
  c->callback([&] { action = [&] { return run_simulate_seq(common, layout, spec, frames, out_dir); }; });

  c = app.add_subcommand("eval", "Compute metrics for the given inputs");
  add_common(c, common);
  c->add_option("-l,--layout", eval.layout, "Layout JSON (with --graph)")->check(CLI::ExistingFile);
  c->add_option("-g,--graph", eval.graph, "Scene graph JSON (with --layout)")->check(CLI::ExistingFile);
  c->add_option("--detections", eval.detections, "Detections JSON")->check(CLI::ExistingFile);
  c->add_option("--classifications", eval.classifications, "Classifications JSON")->check(CLI::ExistingFile);
  c->add_option("--box-samples", eval.box_samples, "Box samples JSON")->check(CLI::ExistingFile);
  c->add_option("--sequence-dir", eval.sequence_dir, "Directory written by simulate-seq")->check(CLI::ExistingDirectory);
  c->add_option("--generated", eval.generated, "Generated point clouds")->check(CLI::ExistingFile);
  c->add_option("--reference", eval.reference, "Reference point clouds")->check(CLI::ExistingFile);
  c->add_option("-o,--out", eval.out, "Metric report JSON (stdout if omitted)");
  c->callback([&] { action = [&] { return run_eval(common, eval); }; });

  c = app.add_subcommand("train-denoiser", "Train an MLP denoiser on a training set");
  add_common(c, common);
  c->add_option("-d,--data", data, "Training set JSON")->required()->check(CLI::ExistingFile);
  c->add_option("--iterations", iterations, "Override the configured iteration count");
  c->add_option("-o,--out", out, "Model file (.lcdn)")->required();
  c->add_option("--log", log, "Training log JSON");
  c->callback([&] { action = [&] { return run_train(common, data, out, log, iterations); }; });

  c = app.add_subcommand("plot-export", "Export a BEV or range view as PNG or CSV");
  add_common(c, common);
  c->add_option("-i,--in", in, "Point cloud (.lcpc) or range tensor (.lcrt)")->required()->check(CLI::ExistingFile);
  c->add_option("-k,--kind", kind, "bev or range")->check(CLI::IsMember({"bev", "range"}));
  c->add_option("-o,--out", out, "Output .png or .csv")->required();
  c->callback([&] { action = [&] { return run_plot_export(common, in, kind, out); }; });

  c = app.add_subcommand("pipeline", "Run graph, layout, synthesis, warping and metrics end to end");
  add_common(c, common);
  auto* a_opt = c->add_option("-a,--annotation", annotation, "Annotation JSON");
  auto* g_opt = c->add_option("-g,--graph", graph, "Scene graph JSON");
  a_opt->excludes(g_opt);
  add_models(c, models);
  c->add_option("-o,--out-dir", out_dir, "Output directory")->required();
  c->callback([&] { action = [&] { return run_pipeline_cmd(common, annotation, graph, models, out_dir); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }
  try {
    return action();
  } catch (const Error& e) {
    print_error(to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
