#include "ogn/gbg.hpp"

#include <algorithm>

#include "ogn/error.hpp"

namespace ogn {

void GbgConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!(min_side >= 0.0)) throw Error(ErrorCode::kInvalidInput, "min_side must be >= 0");
  if (!unit(egt_score) || !unit(egt_iou) || !unit(group_iou)) {
    throw Error(ErrorCode::kInvalidInput, "gbg thresholds must lie in [0,1]");
  }
  if (top_n < 1) throw Error(ErrorCode::kInvalidInput, "top_n must be >= 1");
}

GbgResult gbg_select(const std::vector<Box>& candidates, const GbgConfig& cfg) {
  cfg.validate();
  std::vector<Box> boxes;
  boxes.reserve(candidates.size());
  for (const Box& b : candidates) {
    if (std::min(b.width(), b.height()) >= cfg.min_side) boxes.push_back(b);
  }
  std::sort(boxes.begin(), boxes.end(), score_desc_then_coords);

  GbgResult out;
  std::vector<Box> rest;
  for (const Box& b : boxes) {
    (b.score > cfg.egt_score ? out.egt : rest).push_back(b);
  }
  if (out.egt.empty()) {
    if (!boxes.empty()) {
      out.kept.push_back(boxes.front());
      out.fallback = true;
    }
    return out;
  }

  std::erase_if(rest, [&](const Box& b) {
    return std::none_of(out.egt.begin(), out.egt.end(),
                        [&](const Box& e) { return iou(b, e) >= cfg.egt_iou; });
  });

  out.kept = out.egt;
  std::vector<bool> grouped(rest.size(), false);
  for (std::size_t seed = 0; seed < rest.size(); ++seed) {
    if (grouped[seed]) continue;
    int taken = 0;
    for (std::size_t j = seed; j < rest.size(); ++j) {
      // The seed always joins its own group, even when degenerate.
      if (grouped[j] || (j != seed && iou(rest[seed], rest[j]) < cfg.group_iou)) continue;
      grouped[j] = true;
      if (taken < cfg.top_n) {
        out.kept.push_back(rest[j]);
        ++taken;
      }
    }
  }
  return out;
}

}  // namespace ogn
