#include "ogn/pipeline.hpp"

#include <algorithm>
#include <cstdio>

#include "ogn/error.hpp"

namespace ogn {

using nlohmann::json;

EncodingConfig RoiConfig::encoding(int num_keypoints) const {
  EncodingConfig e;
  e.stride = stride;
  e.radius = radius > 0.0 ? radius : static_cast<double>(stride);
  e.map_w = input_w / stride;
  e.map_h = input_h / stride;
  e.num_keypoints = num_keypoints;
  e.validate();
  return e;
}

ScoredInstance estimate_pose(const synth::SynthPerson& person, const Box& detection,
                             const PipelineConfig& cfg, synth::Rng& rng) {
  const Box roi = extend_to_ratio(detection, cfg.roi.roi_ratio);
  const double sx = cfg.roi.input_w / roi.width();
  const double sy = cfg.roi.input_h / roi.height();

  Pose seen = synth::pose_from_box(person.pose, person.box, detection);
  for (Keypoint& k : seen.keypoints) {
    k.x = (k.x - roi.x_min) * sx;
    k.y = (k.y - roi.y_min) * sy;
  }
  const EncodingConfig enc = cfg.roi.encoding(static_cast<int>(seen.size()));
  const auto [heat, offsets] =
      synth::render_maps(seen, enc, cfg.scenario.heatmap_noise, cfg.scenario.offset_noise, rng);
  DecodedPose decoded = cfg.roi.use_offsets ? decode(heat, offsets, enc, cfg.roi.sigma)
                                            : decode_heatmap_only(heat, enc, cfg.roi.sigma);
  for (Keypoint& k : decoded.pose.keypoints) {
    k.x = roi.x_min + k.x / sx;
    k.y = roi.y_min + k.y / sy;
  }
  return make_instance(detection, decoded.pose);
}

namespace {

// The person a detection was generated from: highest IoU, lowest id on ties.
const synth::SynthPerson* source_person(const synth::SynthFrame& frame, const Box& b) {
  const synth::SynthPerson* best = nullptr;
  double best_iou = 0.0;
  for (const synth::SynthPerson& p : frame) {
    const double v = iou(p.box, b);
    if (v > best_iou) {
      best_iou = v;
      best = &p;
    }
  }
  return best;
}

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& cfg) {
  const std::vector<synth::SynthFrame> frames = synth::generate_sequence(cfg.scenario);
  const std::uint64_t seed = cfg.scenario.rng_seed;
  PipelineReport report;
  TrackSet tracks;
  std::vector<std::vector<ScoredInstance>> predictions;
  std::vector<std::vector<GroundTruth>> gts;
  std::vector<TrackedFrame> tracked_pred;
  std::vector<TrackedFrame> tracked_gt;

  for (std::size_t f = 0; f < frames.size(); ++f) {
    const synth::SynthFrame& frame = frames[f];
    FrameOutput out;
    std::vector<Box> gt_boxes;
    for (const synth::SynthPerson& p : frame) gt_boxes.push_back(p.box);

    synth::Rng cand_rng(seed, synth::Stream::kCandidates, {f});
    out.candidates = synth::generate_candidates(gt_boxes, cfg.scenario, cand_rng);
    const GbgResult selected = gbg_select(out.candidates, cfg.gbg);
    report.gbg_fallbacks += selected.fallback ? 1 : 0;
    out.gbg_kept = selected.kept;

    std::vector<ScoredInstance> estimated;
    for (std::size_t i = 0; i < out.gbg_kept.size(); ++i) {
      const Box& b = out.gbg_kept[i];
      const synth::SynthPerson* person = source_person(frame, b);
      if (!person || !(b.width() > 0.0) || !(b.height() > 0.0)) continue;
      synth::Rng map_rng(seed, synth::Stream::kMaps, {f, i});
      estimated.push_back(estimate_pose(*person, b, cfg, map_rng));
    }
    out.nms_kept = oks_iou_nms(estimated, cfg.nms);

    std::vector<Detection> detections;
    for (std::size_t i = 0; i < out.nms_kept.size(); ++i) {
      const ScoredInstance& s = out.nms_kept[i];
      const synth::SynthPerson* person = source_person(frame, s.box);
      synth::Rng emb_rng(seed, synth::Stream::kDetectionEmbedding, {f, i});
      Embedding e = person ? person->embedding
                           : Embedding(static_cast<std::size_t>(cfg.scenario.embedding_dim), 0.0f);
      for (float& v : e) v = static_cast<float>(v + emb_rng.normal(0.0, cfg.scenario.embedding_noise));
      detections.push_back({s, e});
      out.embeddings.push_back(std::move(e));
    }
    out.track_ids = step(tracks, detections, cfg.track);

    predictions.push_back(out.nms_kept);
    gts.push_back(synth::ground_truth(frame));
    TrackedFrame tp;
    for (std::size_t i = 0; i < out.nms_kept.size(); ++i) tp.push_back({out.track_ids[i], out.nms_kept[i].pose});
    tracked_pred.push_back(std::move(tp));
    tracked_gt.push_back(synth::tracked_ground_truth(frame));
    report.frames.push_back(std::move(out));
  }

  report.ap = evaluate_ap(predictions, gts, cfg.oks);
  try {
    report.mota = evaluate_mota(tracked_pred, tracked_gt, cfg.mota_dist_thresh);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefinedMetric) throw;
  }
  report.tracks_issued = static_cast<std::size_t>(tracks.next_id);
  return report;
}

json ap_to_json(const ApResult& ap) {
  json per = json::object();
  const auto thr = oks_thresholds();
  for (std::size_t i = 0; i < thr.size(); ++i) {
    char key[8];
    std::snprintf(key, sizeof key, "%.2f", thr[i]);
    per[key] = ap.per_threshold[i];
  }
  return {{"ap", ap.ap},          {"ap50", ap.ap50},
          {"ap75", ap.ap75},      {"per_threshold", per},
          {"num_gt", ap.num_gt},  {"num_predictions", ap.num_predictions},
          {"vacuous", ap.vacuous}};
}

json mota_to_json(const MotaResult& m) {
  json per = json::array();
  for (const KeypointMota& k : m.per_keypoint) {
    per.push_back({{"gt", k.gt},
                   {"fp", k.fp},
                   {"fn", k.fn},
                   {"ids", k.ids},
                   {"mota", k.mota ? json(*k.mota) : json(nullptr)}});
  }
  return {{"mota", m.mota}, {"gt", m.gt}, {"fp", m.fp}, {"fn", m.fn}, {"ids", m.ids}, {"per_keypoint", per}};
}

json report_to_json(const PipelineReport& r) {
  std::size_t candidates = 0;
  std::size_t kept = 0;
  std::size_t after_nms = 0;
  for (const FrameOutput& f : r.frames) {
    candidates += f.candidates.size();
    kept += f.gbg_kept.size();
    after_nms += f.nms_kept.size();
  }
  json metrics;
  metrics["ap"] = ap_to_json(r.ap);
  metrics["mota"] = r.mota ? mota_to_json(*r.mota) : json(nullptr);
  return {{"schema_version", 1},
          {"metrics", metrics},
          {"counts",
           {{"frames", r.frames.size()},
            {"candidates", candidates},
            {"gbg_kept", kept},
            {"gbg_fallbacks", r.gbg_fallbacks},
            {"nms_kept", after_nms},
            {"tracks_issued", r.tracks_issued}}}};
}

}  // namespace ogn
