#pragma once

#include <vector>

#include "ogn/geometry.hpp"

namespace ogn {

/// Greedy box generation thresholds. Defaults follow the person-detector
/// setup: EGT above 0.8, EGT overlap 0.5, group overlap 0.7, four per group.
struct GbgConfig {
  double min_side = 0.0;
  double egt_score = 0.8;
  double egt_iou = 0.5;
  double group_iou = 0.7;
  int top_n = 4;

  void validate() const;
};

struct GbgResult {
  /// EGT boxes by descending score, then each group's survivors
  /// (groups in seed order, members by descending score).
  std::vector<Box> kept;
  std::vector<Box> egt;
  /// Set when no box qualified as EGT and the single best stage-1 survivor
  /// was kept instead.
  bool fallback = false;
};

/// Greedy box generation, an NMS replacement that keeps low-score boxes
/// sitting on a confident detection:
///   1. drop boxes whose shorter side is below min_side;
///   2. boxes scoring above egt_score become equivalent ground truth (EGT);
///   3. drop other boxes whose IoU with every EGT is below egt_iou;
///   4. group the rest greedily around the highest-scoring ungrouped box
///      (IoU >= group_iou with the seed) and keep top_n of each group.
GbgResult gbg_select(const std::vector<Box>& candidates, const GbgConfig& cfg);

}  // namespace ogn
