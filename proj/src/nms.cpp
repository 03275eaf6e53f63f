#include "ogn/nms.hpp"

#include <algorithm>
#include <tuple>

#include "ogn/error.hpp"

namespace ogn {

double final_score(double box_score, double pose_score) {
  if (!(box_score >= 0.0 && box_score <= 1.0) || !(pose_score >= 0.0 && pose_score <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "box and pose scores must lie in [0,1]");
  }
  return box_score * pose_score;
}

ScoredInstance make_instance(const Box& box, const Pose& pose) {
  ScoredInstance s;
  s.box = box;
  s.pose = pose;
  s.box_score = box.score;
  s.pose_score = pose.pose_score;
  s.final_score = final_score(box.score, pose.pose_score);
  return s;
}

double instance_oks(const ScoredInstance& candidate, const ScoredInstance& ref,
                    const OksParams& params) {
  const double area = ref.box.area();
  if (!(area > 0.0) || ref.pose.size() == 0) return 0.0;
  Pose reference = ref.pose;
  for (Keypoint& k : reference.keypoints) k.visibility = Visibility::kLabeledVisible;
  return oks(candidate.pose, reference, area, params);
}

bool instance_order(const ScoredInstance& a, const ScoredInstance& b) {
  if (a.final_score != b.final_score) return a.final_score > b.final_score;
  return std::tie(a.box.x_min, a.box.y_min, a.box.x_max, a.box.y_max) <
         std::tie(b.box.x_min, b.box.y_min, b.box.x_max, b.box.y_max);
}

std::vector<ScoredInstance> oks_iou_nms(const std::vector<ScoredInstance>& instances,
                                        const NmsConfig& cfg) {
  std::vector<const ScoredInstance*> order;
  order.reserve(instances.size());
  for (const ScoredInstance& s : instances) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const ScoredInstance* a, const ScoredInstance* b) { return instance_order(*a, *b); });

  std::vector<ScoredInstance> kept;
  std::vector<bool> suppressed(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (suppressed[i]) continue;
    const ScoredInstance& best = *order[i];
    kept.push_back(best);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (suppressed[j]) continue;
      if (iou(order[j]->box, best.box) > cfg.iou_thresh ||
          instance_oks(*order[j], best, cfg.oks_params) > cfg.oks_thresh) {
        suppressed[j] = true;
      }
    }
  }
  return kept;
}

}  // namespace ogn
