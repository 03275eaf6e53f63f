#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "ogn/decoding.hpp"
#include "ogn/encoding.hpp"
#include "ogn/error.hpp"
#include "ogn/eval.hpp"
#include "ogn/gbg.hpp"
#include "ogn/io.hpp"
#include "ogn/nms.hpp"
#include "ogn/pipeline.hpp"
#include "ogn/synth.hpp"
#include "ogn/tracking.hpp"

namespace ogn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct MapOptions {
  int stride = 8;
  double radius = 0.0;  // 0: one stride
  int map_w = 0;        // 0: derived from the image size
  int map_h = 0;
  double image_w = 640.0;
  double image_h = 480.0;

  EncodingConfig config(int num_keypoints) const {
    EncodingConfig c;
    c.stride = stride;
    c.radius = radius > 0.0 ? radius : stride;
    c.map_w = map_w > 0 ? map_w : static_cast<int>(std::ceil(image_w / stride)) + 1;
    c.map_h = map_h > 0 ? map_h : static_cast<int>(std::ceil(image_h / stride)) + 1;
    c.num_keypoints = num_keypoints;
    c.validate();
    return c;
  }
};

void add_map_options(CLI::App* app, MapOptions& m) {
  app->add_option("--stride", m.stride, "Feature stride in pixels (1,2,4,8,16,32)")->capture_default_str();
  app->add_option("--radius", m.radius, "Disk radius in pixels; 0 uses one stride")->capture_default_str();
  app->add_option("--map-w", m.map_w, "Map width in cells; 0 covers the image")->capture_default_str();
  app->add_option("--map-h", m.map_h, "Map height in cells; 0 covers the image")->capture_default_str();
  app->add_option("--image-w", m.image_w, "Image width in pixels")->capture_default_str();
  app->add_option("--image-h", m.image_h, "Image height in pixels")->capture_default_str();
}

void add_gbg_options(CLI::App* app, GbgConfig& g) {
  app->add_option("--min-side", g.min_side, "Drop boxes whose shorter side is below this (px)")
      ->capture_default_str();
  app->add_option("--egt-score", g.egt_score, "Score above which a box is equivalent ground truth")
      ->capture_default_str();
  app->add_option("--egt-iou", g.egt_iou, "Minimum IoU with some EGT box for a non-EGT box to survive")
      ->capture_default_str();
  app->add_option("--group-iou", g.group_iou, "IoU with the group seed needed to join its group")
      ->capture_default_str();
  app->add_option("--top-n", g.top_n, "Boxes kept per group")->capture_default_str();
}

struct KappaOptions {
  double kappa = 0.1;
  bool coco = false;

  OksParams params(std::size_t k) const { return coco ? OksParams::coco() : OksParams::uniform(k, kappa); }
};

void add_kappa_options(CLI::App* app, KappaOptions& k) {
  app->add_option("--kappa", k.kappa, "Uniform per-keypoint OKS falloff")->capture_default_str();
  app->add_flag("--coco-kappa", k.coco, "Use the 17 COCO keypoint constants instead");
}

void add_nms_options(CLI::App* app, NmsConfig& n) {
  app->add_option("--nms-iou", n.iou_thresh, "Suppress when box IoU exceeds this")->capture_default_str();
  app->add_option("--nms-oks", n.oks_thresh, "Suppress when OKS exceeds this")->capture_default_str();
}

void add_track_options(CLI::App* app, TrackConfig& t) {
  app->add_option("--lambda", t.lambda_spatial, "Weight of box IoU against appearance similarity")
      ->capture_default_str();
  app->add_option("--tau", t.appearance_scale, "Appearance distance scale")->capture_default_str();
  app->add_option("--match-thresh", t.match_thresh, "Minimum similarity for a match")->capture_default_str();
  app->add_option("--max-age", t.max_age, "Frames a track may go unmatched before it is lost")
      ->capture_default_str();
}

json with_metadata(json doc, const std::string& command) {
  doc["metadata"] = {{"tool", "ogn"}, {"version", kVersion}, {"command", command}};
  return doc;
}

void emit(const json& doc, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    io::write_json(doc, out);
  }
}

std::size_t keypoint_count(const std::vector<io::InstanceFrame>& frames, std::size_t fallback = 17) {
  for (const auto& f : frames) {
    if (!f.instances.empty()) return f.instances.front().instance.pose.size();
  }
  return fallback;
}

// ---- synth ----------------------------------------------------------------

struct SynthOptions {
  synth::ScenarioConfig scenario;
  MapOptions maps;
  std::string out_dir;
  int map_frames = 1;
  double noise = 0.0;
};

int run_synth(const SynthOptions& o) {
  synth::ScenarioConfig sc = o.scenario;
  sc.image_w = o.maps.image_w;
  sc.image_h = o.maps.image_h;
  sc.heatmap_noise = sc.offset_noise = o.noise;
  const auto frames = synth::generate_sequence(sc);
  fs::create_directories(o.out_dir);

  std::vector<io::InstanceFrame> scene;
  std::vector<io::BoxFrame> candidates;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    io::InstanceFrame inst{static_cast<int>(f), {}};
    std::vector<Box> gt_boxes;
    for (const synth::SynthPerson& p : frames[f]) {
      inst.instances.push_back({make_instance(p.box, p.pose), p.id, p.embedding});
      gt_boxes.push_back(p.box);
    }
    scene.push_back(std::move(inst));
    synth::Rng rng(sc.rng_seed, synth::Stream::kCandidates, {f});
    candidates.push_back({static_cast<int>(f), synth::generate_candidates(gt_boxes, sc, rng)});
  }
  io::write_json(io::instances_to_json(scene), fs::path(o.out_dir) / "scene.json");
  io::write_json(io::boxes_to_json(candidates), fs::path(o.out_dir) / "candidates.json");

  const int map_frames = std::min<int>(o.map_frames, static_cast<int>(frames.size()));
  if (map_frames > 0) fs::create_directories(fs::path(o.out_dir) / "maps");
  for (int f = 0; f < map_frames; ++f) {
    for (const synth::SynthPerson& p : frames[f]) {
      const EncodingConfig enc = o.maps.config(static_cast<int>(p.pose.size()));
      synth::Rng rng(sc.rng_seed, synth::Stream::kMaps,
                     {static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(p.id)});
      const auto [h, off] = synth::render_maps(p.pose, enc, o.noise, rng);
      const std::string stem = "f" + std::to_string(f) + "_p" + std::to_string(p.id);
      io::write_tensor(io::to_tensor(h.scores), fs::path(o.out_dir) / "maps" / (stem + "_heatmap.ognt"));
      io::write_tensor(io::offsets_to_tensor(off), fs::path(o.out_dir) / "maps" / (stem + "_offsets.ognt"));
    }
  }
  std::cout << "wrote " << frames.size() << " frame(s) to " << o.out_dir << '\n';
  return kOk;
}

// ---- encode / decode -------------------------------------------------------

struct SelectOptions {
  int frame = 0;
  int instance = 0;
};

const ScoredInstance& pick(const std::vector<io::InstanceFrame>& frames, const SelectOptions& s) {
  for (const auto& f : frames) {
    if (f.frame_id != s.frame) continue;
    if (s.instance < 0 || s.instance >= static_cast<int>(f.instances.size())) break;
    return f.instances[static_cast<std::size_t>(s.instance)].instance;
  }
  throw Error(ErrorCode::kInvalidInput,
              "no instance " + std::to_string(s.instance) + " in frame " + std::to_string(s.frame));
}

struct EncodeOptions {
  std::string pose_json;
  SelectOptions select;
  MapOptions maps;
  std::string heatmap_out = "heatmap.ognt";
  std::string offsets_out = "offsets.ognt";
};

int run_encode(const EncodeOptions& o) {
  const auto frames = io::instances_from_json(io::read_json(o.pose_json));
  const Pose& pose = pick(frames, o.select).pose;
  const auto [h, off] = encode_targets(pose, o.maps.config(static_cast<int>(pose.size())));
  io::write_tensor(io::to_tensor(h.scores), o.heatmap_out);
  io::write_tensor(io::offsets_to_tensor(off), o.offsets_out);
  return kOk;
}

struct DecodeOptions {
  std::string heatmap;
  std::string offsets;
  MapOptions maps;
  double sigma = kDefaultPredictedSigma;
  bool no_offset = false;
  std::string gt_json;
  SelectOptions select;
  std::string out;
};

int run_decode(const DecodeOptions& o) {
  HeatmapSet h{io::grid_from_tensor(io::read_tensor(o.heatmap))};
  MapOptions m = o.maps;
  m.map_w = h.scores.cols();
  m.map_h = h.scores.rows();
  const EncodingConfig enc = m.config(h.scores.channels());
  DecodedPose decoded;
  if (o.no_offset) {
    decoded = decode_heatmap_only(h, enc, o.sigma);
  } else {
    if (o.offsets.empty()) throw CLI::ValidationError("--offsets", "required unless --no-offset is given");
    decoded = decode(h, io::offsets_from_tensor(io::read_tensor(o.offsets)), enc, o.sigma);
  }

  json doc;
  Box extent;
  if (decoded.pose.labeled_count() > 0) extent = keypoint_bounds(decoded.pose, 0.0);
  if (!o.gt_json.empty()) {
    const auto frames = io::instances_from_json(io::read_json(o.gt_json));
    const ScoredInstance& gt = pick(frames, o.select);
    if (gt.pose.size() != decoded.pose.size()) {
      throw Error(ErrorCode::kInvalidInput, "ground truth and maps disagree on keypoint count");
    }
    double sum = 0.0;
    double worst = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < gt.pose.size(); ++k) {
      if (!is_labeled(gt.pose.keypoints[k].visibility)) continue;
      const double e = std::hypot(decoded.pose.keypoints[k].x - gt.pose.keypoints[k].x,
                                  decoded.pose.keypoints[k].y - gt.pose.keypoints[k].y);
      sum += e;
      worst = std::max(worst, e);
      ++n;
    }
    if (n == 0) throw Error(ErrorCode::kUndefinedMetric, "ground truth has no labeled keypoints");
    doc["mean_error_px"] = sum / static_cast<double>(n);
    doc["max_error_px"] = worst;
    extent = gt.box;
  }
  doc["mode"] = o.no_offset ? "heatmap-only" : "heatmap+offset";
  doc["stride"] = enc.stride;
  doc["pose_score"] = decoded.pose.pose_score;
  doc["low_confidence_keypoints"] =
      static_cast<int>(std::count(decoded.low_confidence.begin(), decoded.low_confidence.end(), true));
  extent.score = 1.0;
  const io::InstanceFrame frame{o.select.frame, {{make_instance(extent, decoded.pose), std::nullopt, std::nullopt}}};
  if (!o.out.empty()) io::write_json(io::instances_to_json({frame}), o.out);
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

// ---- gbg / nms / track -----------------------------------------------------

int run_gbg(const std::string& in, const std::string& out, const GbgConfig& cfg) {
  auto frames = io::boxes_from_json(io::read_json(in));
  for (auto& f : frames) f.boxes = gbg_select(f.boxes, cfg).kept;
  emit(io::boxes_to_json(frames), out);
  return kOk;
}

int run_nms(const std::string& in, const std::string& out, NmsConfig cfg, const KappaOptions& k) {
  auto frames = io::instances_from_json(io::read_json(in));
  cfg.oks_params = k.params(keypoint_count(frames));
  for (auto& f : frames) {
    std::vector<ScoredInstance> instances;
    for (const auto& r : f.instances) instances.push_back(r.instance);
    std::vector<io::InstanceRecord> kept;
    for (ScoredInstance& s : oks_iou_nms(instances, cfg)) {
      // Carry track ids and embeddings of the surviving instances through.
      const auto src = std::find_if(f.instances.begin(), f.instances.end(), [&](const io::InstanceRecord& r) {
        return r.instance.box == s.box && r.instance.final_score == s.final_score;
      });
      kept.push_back({std::move(s), src->track_id, src->embedding});
    }
    f.instances = std::move(kept);
  }
  emit(io::instances_to_json(frames), out);
  return kOk;
}

int run_track(const std::string& in, const std::string& out, const TrackConfig& cfg) {
  auto frames = io::instances_from_json(io::read_json(in));
  std::stable_sort(frames.begin(), frames.end(),
                   [](const io::InstanceFrame& a, const io::InstanceFrame& b) { return a.frame_id < b.frame_id; });
  TrackSet tracks;
  for (auto& f : frames) {
    std::vector<Detection> dets;
    for (const auto& r : f.instances) dets.push_back({r.instance, r.embedding.value_or(Embedding{})});
    const std::vector<int> ids = step(tracks, dets, cfg);
    for (std::size_t i = 0; i < ids.size(); ++i) f.instances[i].track_id = ids[i];
  }
  emit(io::instances_to_json(frames), out);
  return kOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalOptions {
  std::string pred;
  std::string gt;
  std::string metric = "all";
  double dist_thresh = 10.0;
  KappaOptions kappa;
  std::string out;
};

int run_eval(const EvalOptions& o) {
  const auto pred = io::instances_from_json(io::read_json(o.pred));
  const auto gt = io::instances_from_json(io::read_json(o.gt));
  std::map<int, std::size_t> pred_index;
  for (std::size_t i = 0; i < pred.size(); ++i) pred_index[pred[i].frame_id] = i;

  std::vector<std::vector<ScoredInstance>> ap_pred;
  std::vector<std::vector<GroundTruth>> ap_gt;
  std::vector<TrackedFrame> mota_pred;
  std::vector<TrackedFrame> mota_gt;
  for (const auto& g : gt) {
    std::vector<ScoredInstance> p;
    TrackedFrame tp;
    if (const auto it = pred_index.find(g.frame_id); it != pred_index.end()) {
      for (const auto& r : pred[it->second].instances) {
        p.push_back(r.instance);
        tp.push_back({r.track_id.value_or(-1), r.instance.pose});
      }
    }
    std::vector<GroundTruth> gts;
    TrackedFrame tg;
    for (const auto& r : g.instances) {
      gts.push_back({r.instance.pose, r.instance.box});
      tg.push_back({r.track_id.value_or(-1), r.instance.pose});
    }
    ap_pred.push_back(std::move(p));
    ap_gt.push_back(std::move(gts));
    mota_pred.push_back(std::move(tp));
    mota_gt.push_back(std::move(tg));
  }

  json metrics;
  if (o.metric == "ap" || o.metric == "all") {
    metrics["ap"] = ap_to_json(evaluate_ap(ap_pred, ap_gt, o.kappa.params(keypoint_count(gt))));
  }
  if (o.metric == "mota" || o.metric == "all") {
    metrics["mota"] = mota_to_json(evaluate_mota(mota_pred, mota_gt, o.dist_thresh));
  }
  emit(with_metadata({{"schema_version", 1}, {"metrics", metrics}}, "eval"), o.out);
  return kOk;
}

// ---- pipeline --------------------------------------------------------------

struct PipelineOptions {
  PipelineConfig cfg;
  KappaOptions kappa;
  double noise = 0.0;
  double ratio_w = 3.0;
  double ratio_h = 4.0;
  bool no_offset = false;
  std::string out;
};

int run_pipeline_cmd(PipelineOptions o) {
  PipelineConfig& cfg = o.cfg;
  cfg.scenario.heatmap_noise = cfg.scenario.offset_noise = o.noise;
  if (!(o.ratio_w > 0.0) || !(o.ratio_h > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "ratio sides must be positive");
  }
  cfg.roi.roi_ratio = o.ratio_w / o.ratio_h;
  cfg.roi.use_offsets = !o.no_offset;
  cfg.oks = o.kappa.params(synth::stick_figure_template().size());
  cfg.nms.oks_params = cfg.oks;
  const PipelineReport report = run_pipeline(cfg);
  const json doc = with_metadata(report_to_json(report), "pipeline");
  if (!o.out.empty()) io::write_json(doc, o.out);
  std::cout << doc.dump(2) << '\n';
  return report.mota ? kOk : kMetricUndefined;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Offset-guided pose post-processing: target encoding, heatmap+offset decoding, "
               "greedy box generation, OKS+IoU NMS, tracking and evaluation."};
  app.name(args.empty() ? "ogn" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SynthOptions synth_o;
  synth_o.maps.stride = 8;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene, candidates and rendered maps");
  synth_cmd->add_option("--seed", synth_o.scenario.rng_seed, "PRNG seed")->capture_default_str();
  synth_cmd->add_option("--people", synth_o.scenario.n_people, "People per frame")->capture_default_str();
  synth_cmd->add_option("--frames", synth_o.scenario.n_frames, "Frames in the sequence")->capture_default_str();
  synth_cmd->add_option("--candidates", synth_o.scenario.candidates_per_gt, "Candidate boxes per person")
      ->capture_default_str();
  synth_cmd->add_option("--box-jitter", synth_o.scenario.box_jitter, "Candidate jitter (fraction of box size)")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth_o.noise, "Additive map noise sigma")->capture_default_str();
  synth_cmd->add_option("--map-frames", synth_o.map_frames, "Frames whose maps are rendered")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_o.out_dir, "Output directory")->required();
  add_map_options(synth_cmd, synth_o.maps);

  EncodeOptions enc_o;
  auto* enc_cmd = app.add_subcommand("encode", "Encode heatmap and offset targets for one pose");
  enc_cmd->add_option("--in", enc_o.pose_json, "Instance JSON holding the pose")->required();
  enc_cmd->add_option("--frame", enc_o.select.frame, "Frame id")->capture_default_str();
  enc_cmd->add_option("--instance", enc_o.select.instance, "Instance index in the frame")->capture_default_str();
  enc_cmd->add_option("--heatmap-out", enc_o.heatmap_out, "Heatmap tensor path")->capture_default_str();
  enc_cmd->add_option("--offsets-out", enc_o.offsets_out, "Offset tensor path")->capture_default_str();
  add_map_options(enc_cmd, enc_o.maps);

  DecodeOptions dec_o;
  auto* dec_cmd = app.add_subcommand("decode", "Decode keypoints from heatmap (and offset) tensors");
  dec_cmd->add_option("--heatmap", dec_o.heatmap, "Heatmap tensor [K,H,W]")->required();
  dec_cmd->add_option("--offsets", dec_o.offsets, "Offset tensor [2,K,H,W]");
  dec_cmd->add_option("--sigma", dec_o.sigma, "Gaussian smoothing sigma in cells")->capture_default_str();
  auto* no_off = dec_cmd->add_flag("--no-offset", dec_o.no_offset, "Heatmap-only baseline (lattice positions)");
  dec_cmd->add_flag("--offset{false}", dec_o.no_offset, "Fuse offsets (default)")->excludes(no_off);
  dec_cmd->add_option("--gt", dec_o.gt_json, "Ground-truth instance JSON for error reporting");
  dec_cmd->add_option("--frame", dec_o.select.frame, "Ground-truth frame id")->capture_default_str();
  dec_cmd->add_option("--instance", dec_o.select.instance, "Ground-truth instance index")->capture_default_str();
  dec_cmd->add_option("--out", dec_o.out, "Write the decoded pose as instance JSON");
  add_map_options(dec_cmd, dec_o.maps);

  std::string gbg_in, gbg_out;
  GbgConfig gbg_cfg;
  auto* gbg_cmd = app.add_subcommand("gbg", "Greedy box generation over candidate boxes");
  gbg_cmd->add_option("--in", gbg_in, "Box JSON")->required();
  gbg_cmd->add_option("--out", gbg_out, "Output box JSON (stdout when omitted)");
  add_gbg_options(gbg_cmd, gbg_cfg);

  std::string nms_in, nms_out;
  NmsConfig nms_cfg;
  KappaOptions nms_kappa;
  auto* nms_cmd = app.add_subcommand("nms", "OKS+IoU pose NMS over instances");
  nms_cmd->add_option("--in", nms_in, "Instance JSON")->required();
  nms_cmd->add_option("--out", nms_out, "Output instance JSON (stdout when omitted)");
  add_nms_options(nms_cmd, nms_cfg);
  add_kappa_options(nms_cmd, nms_kappa);

  std::string track_in, track_out;
  TrackConfig track_cfg;
  auto* track_cmd = app.add_subcommand("track", "Assign track ids across frames");
  track_cmd->add_option("--in", track_in, "Instance JSON with embeddings")->required();
  track_cmd->add_option("--out", track_out, "Output instance JSON (stdout when omitted)");
  add_track_options(track_cmd, track_cfg);

  EvalOptions eval_o;
  auto* eval_cmd = app.add_subcommand("eval", "Keypoint AP and MOTA report");
  eval_cmd->add_option("--pred", eval_o.pred, "Predicted instance JSON")->required();
  eval_cmd->add_option("--gt", eval_o.gt, "Ground-truth instance JSON")->required();
  eval_cmd->add_option("--metric", eval_o.metric, "ap, mota or all")
      ->check(CLI::IsMember({"ap", "mota", "all"}))
      ->capture_default_str();
  eval_cmd->add_option("--dist-thresh", eval_o.dist_thresh, "MOTA keypoint match distance (px)")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_o.out, "Report path (stdout when omitted)");
  add_kappa_options(eval_cmd, eval_o.kappa);

  PipelineOptions pipe_o;
  auto* pipe_cmd = app.add_subcommand("pipeline", "synth -> gbg -> decode -> nms -> track -> eval");
  pipe_cmd->add_option("--seed", pipe_o.cfg.scenario.rng_seed, "PRNG seed")->capture_default_str();
  pipe_cmd->add_option("--people", pipe_o.cfg.scenario.n_people, "People per frame")->capture_default_str();
  pipe_cmd->add_option("--frames", pipe_o.cfg.scenario.n_frames, "Frames")->capture_default_str();
  pipe_cmd->add_option("--noise", pipe_o.noise, "Additive map noise sigma")->capture_default_str();
  pipe_cmd->add_option("--box-jitter", pipe_o.cfg.scenario.box_jitter, "Candidate jitter (fraction of box size)")
      ->capture_default_str();
  pipe_cmd->add_option("--candidates", pipe_o.cfg.scenario.candidates_per_gt, "Candidate boxes per person")
      ->capture_default_str();
  pipe_cmd->add_option("--sigma", pipe_o.cfg.roi.sigma, "Heatmap smoothing sigma in cells")->capture_default_str();
  pipe_cmd->add_option("--stride", pipe_o.cfg.roi.stride, "Estimator feature stride")->capture_default_str();
  pipe_cmd->add_option("--ratio-w", pipe_o.ratio_w, "ROI width part of the fixed ratio")->capture_default_str();
  pipe_cmd->add_option("--ratio-h", pipe_o.ratio_h, "ROI height part of the fixed ratio")->capture_default_str();
  pipe_cmd->add_flag("--no-offset", pipe_o.no_offset, "Decode heatmaps only");
  pipe_cmd->add_option("--dist-thresh", pipe_o.cfg.mota_dist_thresh, "MOTA keypoint match distance (px)")
      ->capture_default_str();
  pipe_cmd->add_option("--out", pipe_o.out, "Also write the report here");
  add_gbg_options(pipe_cmd, pipe_o.cfg.gbg);
  add_nms_options(pipe_cmd, pipe_o.cfg.nms);
  add_track_options(pipe_cmd, pipe_o.cfg.track);
  add_kappa_options(pipe_cmd, pipe_o.kappa);

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth_o);
    if (*enc_cmd) return run_encode(enc_o);
    if (*dec_cmd) return run_decode(dec_o);
    if (*gbg_cmd) return run_gbg(gbg_in, gbg_out, gbg_cfg);
    if (*nms_cmd) return run_nms(nms_in, nms_out, nms_cfg, nms_kappa);
    if (*track_cmd) return run_track(track_in, track_out, track_cfg);
    if (*eval_cmd) return run_eval(eval_o);
    if (*pipe_cmd) return run_pipeline_cmd(pipe_o);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool metric = e.code() == ErrorCode::kUndefinedMetric || e.code() == ErrorCode::kUndefinedSimilarity;
    return metric ? kMetricUndefined : kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace ogn::cli
