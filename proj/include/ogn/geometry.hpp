#pragma once

#include <cstdint>
#include <vector>

namespace ogn {

/// Axis-aligned box in continuous image pixels. Area is
/// (x_max - x_min) * (y_max - y_min); there is no +1 pixel convention.
struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  double score = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  bool operator==(const Box&) const = default;
};

/// Checks the corner-ordering and score invariants. Throws kInvalidInput.
void validate(const Box& b);

/// COCO labeling convention: 0 = not labeled, 1 = labeled but occluded,
/// 2 = labeled and visible.
enum class Visibility : std::uint8_t {
  kNotLabeled = 0,
  kLabeledInvisible = 1,
  kLabeledVisible = 2,
};

inline bool is_labeled(Visibility v) { return v != Visibility::kNotLabeled; }

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  Visibility visibility = Visibility::kNotLabeled;
  double score = 0.0;

  bool operator==(const Keypoint&) const = default;
};

struct Pose {
  std::vector<Keypoint> keypoints;
  double pose_score = 0.0;

  std::size_t size() const { return keypoints.size(); }
  std::size_t labeled_count() const;

  bool operator==(const Pose&) const = default;
};

/// Per-keypoint falloff constants for the keypoint similarity kernel.
struct OksParams {
  std::vector<double> kappa;

  /// Uniform kappa, used by synthetic scenes.
  static OksParams uniform(std::size_t num_keypoints, double kappa = 0.1);
  /// The 17 COCO person keypoint constants.
  static OksParams coco();
};

/// Intersection over union; 0 when the union is empty.
double iou(const Box& a, const Box& b);

/// Object keypoint similarity: mean over labeled gt keypoints of
/// exp(-d^2 / (2 * gt_area * kappa^2)). gt_area plays the role of s^2.
///
/// Throws kUndefinedSimilarity when gt has no labeled keypoint and
/// kInvalidInput when gt_area <= 0 or the keypoint counts disagree.
double oks(const Pose& pred, const Pose& gt, double gt_area, const OksParams& params);

/// Grows exactly one side of `b` about its center so that
/// width / height == target_w_over_h. The box is never shrunk and may leave
/// the image; clip separately if needed.
Box extend_to_ratio(const Box& b, double target_w_over_h);

/// Ratio of the ROI shape used at test time (width:height = 3:4).
inline constexpr double kRoiAspectRatio = 3.0 / 4.0;

/// Tight bounding box of the labeled keypoints, dilated by `dilation` of its
/// width/height in total (split evenly between both sides).
Box keypoint_bounds(const Pose& pose, double dilation);

/// Strict weak order used wherever equal scores need a deterministic
/// tie-break: score descending, then (x_min, y_min, x_max, y_max) ascending.
bool score_desc_then_coords(const Box& a, const Box& b);

}  // namespace ogn
