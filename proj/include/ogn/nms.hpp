#pragma once

#include <vector>

#include "ogn/geometry.hpp"

namespace ogn {

/// A person hypothesis after pose estimation. final_score is always
/// box_score * pose_score; build through make_instance to keep it so.
struct ScoredInstance {
  Box box;
  Pose pose;
  double box_score = 0.0;
  double pose_score = 0.0;
  double final_score = 0.0;
};

/// Throws kInvalidInput unless both inputs lie in [0,1].
double final_score(double box_score, double pose_score);

/// Box score is taken from box.score, pose score from pose.pose_score.
ScoredInstance make_instance(const Box& box, const Pose& pose);

struct NmsConfig {
  double iou_thresh = 0.6;
  double oks_thresh = 0.75;
  OksParams oks_params = OksParams::uniform(17);
};

/// OKS similarity used for deduplication: `ref` acts as ground truth with
/// every keypoint treated as labeled and its box area as the scale.
/// Returns 0 when the reference box has no area.
double instance_oks(const ScoredInstance& candidate, const ScoredInstance& ref,
                    const OksParams& params);

/// Greedy pose NMS. Instances are visited by descending final score (box
/// coordinates break ties); a remaining instance is suppressed when its IoU
/// with a kept one exceeds iou_thresh or its OKS against it exceeds
/// oks_thresh. Output is in selection order.
std::vector<ScoredInstance> oks_iou_nms(const std::vector<ScoredInstance>& instances,
                                        const NmsConfig& cfg);

/// Strict weak order: final score descending, then box coordinates.
bool instance_order(const ScoredInstance& a, const ScoredInstance& b);

}  // namespace ogn
