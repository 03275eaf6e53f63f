#include "ogn/encoding.hpp"

#include <cmath>
#include <string>

#include "ogn/error.hpp"

namespace ogn {

Grid3::Grid3(int channels, int rows, int cols, float fill)
    : channels_(channels), rows_(rows), cols_(cols) {
  if (channels < 0 || rows < 0 || cols < 0) {
    throw Error(ErrorCode::kInvalidInput, "negative grid dimension");
  }
  data_.assign(static_cast<std::size_t>(channels) * rows * cols, fill);
}

std::span<float> Grid3::channel(int c) {
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  return std::span<float>(data_).subspan(static_cast<std::size_t>(c) * n, n);
}

std::span<const float> Grid3::channel(int c) const {
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  return std::span<const float>(data_).subspan(static_cast<std::size_t>(c) * n, n);
}

void EncodingConfig::validate() const {
  switch (stride) {
    case 1: case 2: case 4: case 8: case 16: case 32: break;
    default: throw Error(ErrorCode::kInvalidInput, "stride must be a power of two in [1,32]");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidInput, "disk radius must be positive");
  }
  if (map_w < 1 || map_h < 1) throw Error(ErrorCode::kInvalidInput, "map dimensions must be >= 1");
  if (num_keypoints < 1) throw Error(ErrorCode::kInvalidInput, "keypoint count must be >= 1");
}

ImagePoint grid_to_image(int col, int row, const EncodingConfig& cfg) {
  if (col < 0 || col >= cfg.map_w || row < 0 || row >= cfg.map_h) {
    throw Error(ErrorCode::kInvalidInput,
                "grid cell (" + std::to_string(col) + "," + std::to_string(row) + ") out of range");
  }
  return {static_cast<double>(col) * cfg.stride, static_cast<double>(row) * cfg.stride};
}

namespace {

void check_pose(const Pose& gt, const EncodingConfig& cfg) {
  cfg.validate();
  if (gt.size() != static_cast<std::size_t>(cfg.num_keypoints)) {
    throw Error(ErrorCode::kInvalidInput, "pose has " + std::to_string(gt.size()) +
                                              " keypoints, config expects " +
                                              std::to_string(cfg.num_keypoints));
  }
}

// Visits every lattice cell inside the closed disk around each labeled
// keypoint. Only the bounding square of the disk is scanned.
template <typename Fn>
void for_each_disk_cell(const Pose& gt, const EncodingConfig& cfg, Fn&& fn) {
  const double s = cfg.stride;
  const double r2 = cfg.radius * cfg.radius;
  for (int k = 0; k < cfg.num_keypoints; ++k) {
    const Keypoint& g = gt.keypoints[k];
    if (!is_labeled(g.visibility)) continue;
    const int c0 = std::max(0, static_cast<int>(std::floor((g.x - cfg.radius) / s)));
    const int c1 = std::min(cfg.map_w - 1, static_cast<int>(std::ceil((g.x + cfg.radius) / s)));
    const int r0 = std::max(0, static_cast<int>(std::floor((g.y - cfg.radius) / s)));
    const int r1 = std::min(cfg.map_h - 1, static_cast<int>(std::ceil((g.y + cfg.radius) / s)));
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        const double ex = g.x - col * s;
        const double ey = g.y - row * s;
        if (ex * ex + ey * ey <= r2) fn(k, row, col, ex, ey);
      }
    }
  }
}

}  // namespace

std::pair<HeatmapSet, OffsetSet> encode_targets(const Pose& gt, const EncodingConfig& cfg) {
  check_pose(gt, cfg);
  HeatmapSet h{Grid3(cfg.num_keypoints, cfg.map_h, cfg.map_w)};
  OffsetSet o{Grid3(cfg.num_keypoints, cfg.map_h, cfg.map_w),
              Grid3(cfg.num_keypoints, cfg.map_h, cfg.map_w)};
  for_each_disk_cell(gt, cfg, [&](int k, int row, int col, double ex, double ey) {
    h.scores.at(k, row, col) = 1.0f;
    o.dx.at(k, row, col) = static_cast<float>(ex / cfg.radius);
    o.dy.at(k, row, col) = static_cast<float>(ey / cfg.radius);
  });
  return {std::move(h), std::move(o)};
}

Grid3 offset_mask(const Pose& gt, const EncodingConfig& cfg) {
  check_pose(gt, cfg);
  Grid3 mask(cfg.num_keypoints, cfg.map_h, cfg.map_w);
  for_each_disk_cell(gt, cfg, [&](int k, int row, int col, double, double) {
    mask.at(k, row, col) = 1.0f;
  });
  return mask;
}

double smooth_l1(double e) {
  const double a = std::abs(e);
  return a < 1.0 ? 0.5 * e * e : a - 0.5;
}

LossResult smooth_l1_loss(std::span<const float> pred, std::span<const float> target,
                          std::optional<std::span<const float>> mask) {
  if (pred.size() != target.size() || (mask && mask->size() != pred.size())) {
    throw Error(ErrorCode::kInvalidInput, "smooth-l1 operands differ in size");
  }
  LossResult out;
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (mask && (*mask)[i] == 0.0f) continue;
    sum += smooth_l1(static_cast<double>(pred[i]) - static_cast<double>(target[i]));
    ++out.count;
  }
  if (out.count == 0) {
    out.empty_mask = true;
    return out;
  }
  out.loss = sum / static_cast<double>(out.count);
  return out;
}

LossResult smooth_l1_loss(const Grid3& pred, const Grid3& target, const Grid3* mask) {
  if (!pred.same_shape(target) || (mask && !mask->same_shape(pred))) {
    throw Error(ErrorCode::kInvalidInput, "smooth-l1 operands differ in shape");
  }
  if (mask) return smooth_l1_loss(pred.data(), target.data(), mask->data());
  return smooth_l1_loss(pred.data(), target.data());
}

}  // namespace ogn
