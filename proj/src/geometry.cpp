#include "ogn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "ogn/error.hpp"

namespace ogn {

void validate(const Box& b) {
  if (!(b.x_min <= b.x_max) || !(b.y_min <= b.y_max)) {
    throw Error(ErrorCode::kInvalidInput, "box corners out of order");
  }
  if (!(b.score >= 0.0 && b.score <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "box score outside [0,1]: " + std::to_string(b.score));
  }
}

std::size_t Pose::labeled_count() const {
  return static_cast<std::size_t>(std::count_if(
      keypoints.begin(), keypoints.end(), [](const Keypoint& k) { return is_labeled(k.visibility); }));
}

OksParams OksParams::uniform(std::size_t num_keypoints, double kappa) {
  return OksParams{std::vector<double>(num_keypoints, kappa)};
}

OksParams OksParams::coco() {
  // COCO sigmas; the kernel here takes kappa = 2 * sigma.
  static constexpr double kSigmas[17] = {.026, .025, .025, .035, .035, .079, .079, .072, .072,
                                         .062, .062, .107, .107, .087, .087, .089, .089};
  OksParams p;
  p.kappa.reserve(17);
  for (double s : kSigmas) p.kappa.push_back(2.0 * s);
  return p;
}

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double oks(const Pose& pred, const Pose& gt, double gt_area, const OksParams& params) {
  if (!(gt_area > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "oks scale area must be positive");
  }
  if (pred.size() != gt.size() || params.kappa.size() != gt.size()) {
    throw Error(ErrorCode::kInvalidInput, "keypoint count mismatch between poses and oks params");
  }
  double sum = 0.0;
  std::size_t labeled = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const Keypoint& g = gt.keypoints[i];
    if (!is_labeled(g.visibility)) continue;
    const double dx = pred.keypoints[i].x - g.x;
    const double dy = pred.keypoints[i].y - g.y;
    const double k = params.kappa[i];
    sum += std::exp(-(dx * dx + dy * dy) / (2.0 * gt_area * k * k));
    ++labeled;
  }
  if (labeled == 0) {
    throw Error(ErrorCode::kUndefinedSimilarity, "reference pose has no labeled keypoints");
  }
  return sum / static_cast<double>(labeled);
}

Box extend_to_ratio(const Box& b, double target_w_over_h) {
  if (!(target_w_over_h > 0.0) || !std::isfinite(target_w_over_h)) {
    throw Error(ErrorCode::kInvalidInput, "target ratio must be positive");
  }
  const double w = b.width();
  const double h = b.height();
  if (!(w > 0.0) || !(h > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "cannot extend a degenerate box");
  }
  Box out = b;
  if (w < h * target_w_over_h) {
    const double half = 0.5 * h * target_w_over_h;
    const double cx = b.center_x();
    out.x_min = cx - half;
    out.x_max = cx + half;
  } else if (w > h * target_w_over_h) {
    const double half = 0.5 * w / target_w_over_h;
    const double cy = b.center_y();
    out.y_min = cy - half;
    out.y_max = cy + half;
  }
  // Rounding in center +/- half can land a hair inside the input.
  out.x_min = std::min(out.x_min, b.x_min);
  out.y_min = std::min(out.y_min, b.y_min);
  out.x_max = std::max(out.x_max, b.x_max);
  out.y_max = std::max(out.y_max, b.y_max);
  return out;
}

Box keypoint_bounds(const Pose& pose, double dilation) {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  for (const Keypoint& k : pose.keypoints) {
    if (!is_labeled(k.visibility)) continue;
    x0 = std::min(x0, k.x);
    y0 = std::min(y0, k.y);
    x1 = std::max(x1, k.x);
    y1 = std::max(y1, k.y);
  }
  if (x0 > x1) {
    throw Error(ErrorCode::kInvalidInput, "pose has no labeled keypoints");
  }
  const double mx = 0.5 * dilation * (x1 - x0);
  const double my = 0.5 * dilation * (y1 - y0);
  return Box{x0 - mx, y0 - my, x1 + mx, y1 + my, 1.0};
}

bool score_desc_then_coords(const Box& a, const Box& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.x_min, a.y_min, a.x_max, a.y_max) < std::tie(b.x_min, b.y_min, b.x_max, b.y_max);
}

}  // namespace ogn
