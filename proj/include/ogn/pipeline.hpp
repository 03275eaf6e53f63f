#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "ogn/decoding.hpp"
#include "ogn/encoding.hpp"
#include "ogn/eval.hpp"
#include "ogn/gbg.hpp"
#include "ogn/nms.hpp"
#include "ogn/synth.hpp"
#include "ogn/tracking.hpp"

namespace ogn {

/// Crop geometry of the single-person estimator: ROIs are extended to
/// roi_ratio and resampled to input_w x input_h before encoding.
struct RoiConfig {
  double roi_ratio = kRoiAspectRatio;
  int input_w = 192;
  int input_h = 256;
  int stride = 4;
  /// Disk radius in input pixels; 0 means one stride.
  double radius = 0.0;
  double sigma = kDefaultPredictedSigma;
  bool use_offsets = true;

  EncodingConfig encoding(int num_keypoints) const;
};

struct PipelineConfig {
  synth::ScenarioConfig scenario;
  GbgConfig gbg;
  NmsConfig nms;
  TrackConfig track;
  RoiConfig roi;
  OksParams oks = OksParams::uniform(17);
  double mota_dist_thresh = 10.0;
};

struct FrameOutput {
  std::vector<Box> candidates;
  std::vector<Box> gbg_kept;
  std::vector<ScoredInstance> nms_kept;
  std::vector<Embedding> embeddings;
  std::vector<int> track_ids;
};

struct PipelineReport {
  ApResult ap;
  std::optional<MotaResult> mota;
  std::vector<FrameOutput> frames;
  std::size_t tracks_issued = 0;
  std::size_t gbg_fallbacks = 0;
};

/// Runs one top-down pass on a single ROI: the synthetic estimator looks at
/// the ground-truth person through `detection`, emits noisy maps in crop
/// space and the result is decoded back to image coordinates.
ScoredInstance estimate_pose(const synth::SynthPerson& person, const Box& detection,
                             const PipelineConfig& cfg, synth::Rng& rng);

/// synth -> candidates -> GBG -> ratio extension -> estimation/decoding ->
/// OKS+IoU NMS -> tracking -> AP and MOTA.
PipelineReport run_pipeline(const PipelineConfig& cfg);

/// Metric report, versioned. Everything except the "metadata" block is a
/// deterministic function of the inputs.
nlohmann::json report_to_json(const PipelineReport& r);
nlohmann::json ap_to_json(const ApResult& ap);
nlohmann::json mota_to_json(const MotaResult& m);

}  // namespace ogn
