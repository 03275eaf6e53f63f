#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ogn/geometry.hpp"

namespace ogn {

/// Dense channels x rows x cols float32 volume, row-major.
class Grid3 {
 public:
  Grid3() = default;
  Grid3(int channels, int rows, int cols, float fill = 0.0f);

  int channels() const { return channels_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const Grid3& o) const {
    return channels_ == o.channels_ && rows_ == o.rows_ && cols_ == o.cols_;
  }

  float& at(int c, int r, int x) { return data_[index(c, r, x)]; }
  float at(int c, int r, int x) const { return data_[index(c, r, x)]; }

  std::span<float> channel(int c);
  std::span<const float> channel(int c) const;

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  bool operator==(const Grid3&) const = default;

 private:
  std::size_t index(int c, int r, int x) const {
    return (static_cast<std::size_t>(c) * rows_ + r) * cols_ + x;
  }

  int channels_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<float> data_;
};

/// Lattice and disk parameters shared by target encoding and decoding.
/// Grid cell (col, row) sits at image position (col * stride, row * stride);
/// radius is in image pixels.
struct EncodingConfig {
  int stride = 8;
  double radius = 8.0;
  int map_w = 1;
  int map_h = 1;
  int num_keypoints = 17;

  /// Throws kInvalidInput when any field is out of range.
  void validate() const;
};

/// Per-keypoint classification maps, shape K x map_h x map_w.
struct HeatmapSet {
  Grid3 scores;
  bool operator==(const HeatmapSet&) const = default;
};

/// Per-keypoint offsets in units of the disk radius.
struct OffsetSet {
  Grid3 dx;
  Grid3 dy;
  bool operator==(const OffsetSet&) const = default;
};

struct ImagePoint {
  double x = 0.0;
  double y = 0.0;
};

ImagePoint grid_to_image(int col, int row, const EncodingConfig& cfg);

/// Binary disk classification targets and radius-normalized offset targets
/// for a single pose. Unlabeled keypoints produce all-zero channels.
std::pair<HeatmapSet, OffsetSet> encode_targets(const Pose& gt, const EncodingConfig& cfg);

/// Disk membership mask for offset supervision (1 inside, 0 outside); equal
/// to the encoded heatmap but kept separate so predicted heatmaps can be
/// paired with ground-truth masks.
Grid3 offset_mask(const Pose& gt, const EncodingConfig& cfg);

struct LossResult {
  double loss = 0.0;
  std::size_t count = 0;
  /// Set when the mask selected no element; loss is then 0.
  bool empty_mask = false;
};

/// Mean Smooth-L1 over the elements where mask != 0 (all when no mask).
LossResult smooth_l1_loss(std::span<const float> pred, std::span<const float> target,
                          std::optional<std::span<const float>> mask = std::nullopt);
LossResult smooth_l1_loss(const Grid3& pred, const Grid3& target, const Grid3* mask = nullptr);

/// Elementwise Smooth-L1 with unit transition point.
double smooth_l1(double e);

}  // namespace ogn
