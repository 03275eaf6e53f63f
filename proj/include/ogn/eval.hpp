#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "ogn/geometry.hpp"
#include "ogn/nms.hpp"

namespace ogn {

/// Annotated person. The box area is the OKS scale.
struct GroundTruth {
  Pose pose;
  Box box;
};

inline constexpr std::size_t kNumOksThresholds = 10;

/// OKS thresholds 0.50, 0.55, ..., 0.95.
std::array<double, kNumOksThresholds> oks_thresholds();

struct ApResult {
  double ap = 0.0;
  double ap50 = 0.0;
  double ap75 = 0.0;
  /// Average precision at each entry of oks_thresholds().
  std::array<double, kNumOksThresholds> per_threshold{};
  std::size_t num_gt = 0;
  std::size_t num_predictions = 0;
  /// No ground truth and no predictions; ap is reported as 1.
  bool vacuous = false;
};

/// COCO-style keypoint AP with 101-point interpolated precision.
///
/// Per threshold, each image's predictions are matched in descending
/// final-score order to the unmatched ground truth of highest OKS (at least
/// the threshold). Predictions with equal scores enter the precision/recall
/// curve together, so the result does not depend on image order.
/// Ground truths without labeled keypoints or with an empty box are ignored.
ApResult evaluate_ap(const std::vector<std::vector<ScoredInstance>>& predictions,
                     const std::vector<std::vector<GroundTruth>>& ground_truth,
                     const OksParams& params);

/// A pose carrying a track identity, one entry per person per frame.
struct TrackedPose {
  int track_id = -1;
  Pose pose;
};

using TrackedFrame = std::vector<TrackedPose>;

struct KeypointMota {
  std::size_t gt = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t ids = 0;
  /// Unset when this joint has no labeled ground truth.
  std::optional<double> mota;
};

struct MotaResult {
  double mota = 0.0;
  std::size_t gt = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t ids = 0;
  std::vector<KeypointMota> per_keypoint;
};

/// Keypoint-level MOTA, 1 - (FN + FP + IDS) / GT over all joints and frames.
///
/// For every joint and frame, a ground-truth track first keeps its previous
/// prediction if that prediction is still within dist_thresh; the rest are
/// matched greedily by ascending distance. An identity switch is counted
/// whenever a ground-truth track is matched to a different prediction id
/// than at its previous match. Only labeled keypoints take part on both
/// sides.
///
/// Throws kInvalidInput for unaligned frame lists or inconsistent keypoint
/// counts and kUndefinedMetric when no ground-truth keypoint is labeled.
MotaResult evaluate_mota(const std::vector<TrackedFrame>& predictions,
                         const std::vector<TrackedFrame>& ground_truth, double dist_thresh);

}  // namespace ogn
