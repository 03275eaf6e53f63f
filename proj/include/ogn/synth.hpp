#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ogn/encoding.hpp"
#include "ogn/eval.hpp"
#include "ogn/geometry.hpp"
#include "ogn/tracking.hpp"

namespace ogn::synth {

/// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z);

/// Seed for an independent stream: h = mix64(seed), then
/// h = mix64(h ^ mix64(v + 0x9E3779B97F4A7C15)) for each v in `path`.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Stream tags used as the first element of a derive_seed path.
enum class Stream : std::uint64_t {
  kPlacement = 1,
  kJitter = 2,
  kEmbedding = 3,
  kCandidates = 4,
  kMaps = 5,
  kDetectionEmbedding = 6,
};

/// std::mt19937_64 with distributions defined here rather than by the
/// standard library, so draws are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> rest = {});

  std::uint64_t next_u64() { return engine_(); }
  /// 53-bit uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Box-Muller, one variate per pair of uniforms.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
};

/// Explicit linear motion for one person: top-center anchor and velocity in
/// pixels per frame.
struct PersonMotion {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double height = 160.0;
};

struct ScenarioConfig {
  std::uint64_t rng_seed = 42;
  int n_people = 3;
  int n_frames = 1;
  double image_w = 640.0;
  double image_h = 480.0;
  double min_height = 120.0;
  double max_height = 200.0;
  /// Per-joint jitter as a fraction of person height.
  double joint_jitter = 0.01;
  double max_speed = 6.0;
  /// Random placement keeps pairwise box IoU at or below this in every frame.
  double max_overlap_iou = 0.0;
  int max_retries = 1000;
  /// When non-empty, overrides random placement (size must equal n_people).
  std::vector<PersonMotion> motions;

  int embedding_dim = 8;
  double embedding_noise = 0.05;

  double heatmap_noise = 0.0;
  double offset_noise = 0.0;

  int candidates_per_gt = 5;
  /// Candidate corner jitter as a fraction of box width/height.
  double box_jitter = 0.0;
  double score_iou_corr = 1.0;
  double score_noise = 0.0;
  /// Plant a well-localized but low-scoring candidate per ground truth.
  bool rig_rescue = true;
};

/// 17-joint stick figure in COCO order, x relative to the body axis and y
/// from the top, both in units of person height.
const std::vector<ImagePoint>& stick_figure_template();

/// Dilation applied to the tight keypoint box of each person.
inline constexpr double kBoxDilation = 0.1;

struct SynthPerson {
  int id = 0;
  Pose pose;
  Box box;
  Embedding embedding;
};

using SynthFrame = std::vector<SynthPerson>;

/// Single-frame scene: n_people poses inside the image. Throws kGeneration
/// when placement does not succeed within max_retries.
SynthFrame generate_scene(const ScenarioConfig& cfg);

/// n_frames of linear motion with fresh per-frame joint jitter.
std::vector<SynthFrame> generate_sequence(const ScenarioConfig& cfg);

/// Two people crossing head-on and a third walking across their path,
/// 30 frames. Used to exercise identity maintenance.
ScenarioConfig crossing_scenario(std::uint64_t seed);

/// Target maps plus i.i.d. Gaussian noise; zero sigmas return the exact
/// encoded targets.
std::pair<HeatmapSet, OffsetSet> render_maps(const Pose& gt, const EncodingConfig& cfg,
                                             double heatmap_sigma, double offset_sigma, Rng& rng);
std::pair<HeatmapSet, OffsetSet> render_maps(const Pose& gt, const EncodingConfig& cfg, double sigma,
                                             Rng& rng);

/// candidates_per_gt jittered boxes per ground-truth box, scored around
/// their IoU with it. With rig_rescue, box_jitter > 0 and at least two
/// candidates, the first is a confident (score > 0.85) box with IoU in
/// [0.7, 0.85] and the second is the best-localized box (IoU >= 0.9) with a
/// score in [0.5, 0.75).
std::vector<Box> generate_candidates(const std::vector<Box>& gt_boxes, const ScenarioConfig& cfg,
                                     Rng& rng);

/// Pose a crop-driven estimator would produce from `crop`: ground-truth
/// keypoints carried from gt_box-relative to crop-relative coordinates.
Pose pose_from_box(const Pose& gt, const Box& gt_box, const Box& crop);

/// Ground-truth view of a frame for the evaluators.
std::vector<GroundTruth> ground_truth(const SynthFrame& frame);
TrackedFrame tracked_ground_truth(const SynthFrame& frame);

}  // namespace ogn::synth
