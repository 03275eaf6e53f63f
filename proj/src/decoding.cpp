#include "ogn/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "ogn/error.hpp"

namespace ogn {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidInput, "sigma must be finite and >= 0");
  }
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  }
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= sum;
  return k;
}

HeatmapSet gaussian_smooth(const HeatmapSet& h, double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  if (k.size() == 1) return h;
  const int radius = static_cast<int>(k.size() / 2);
  const Grid3& in = h.scores;
  const int rows = in.rows();
  const int cols = in.cols();
  HeatmapSet out{Grid3(in.channels(), rows, cols)};
  std::vector<double> tmp(static_cast<std::size_t>(rows) * cols);
  for (int c = 0; c < in.channels(); ++c) {
    // Horizontal pass into tmp, vertical pass into the output.
    for (int r = 0; r < rows; ++r) {
      for (int x = 0; x < cols; ++x) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          acc += k[t + radius] * in.at(c, r, std::clamp(x + t, 0, cols - 1));
        }
        tmp[static_cast<std::size_t>(r) * cols + x] = acc;
      }
    }
    for (int r = 0; r < rows; ++r) {
      for (int x = 0; x < cols; ++x) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          acc += k[t + radius] * tmp[static_cast<std::size_t>(std::clamp(r + t, 0, rows - 1)) * cols + x];
        }
        out.scores.at(c, r, x) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

GridCell argmax_cell(const Grid3& g, int channel) {
  const auto data = g.channel(channel);
  // max_element returns the first maximum in row-major order, which is the
  // lowest row and then the lowest column.
  const auto it = std::max_element(data.begin(), data.end());
  const auto idx = static_cast<int>(std::distance(data.begin(), it));
  return {idx % g.cols(), idx / g.cols()};
}

namespace {

void check_shape(const Grid3& g, const EncodingConfig& cfg, const char* what) {
  if (g.channels() != cfg.num_keypoints || g.rows() != cfg.map_h || g.cols() != cfg.map_w) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " shape does not match the encoding config");
  }
}

bool is_flat(std::span<const float> ch) {
  const auto [lo, hi] = std::minmax_element(ch.begin(), ch.end());
  return *lo == *hi;
}

DecodedPose decode_impl(const HeatmapSet& h, const OffsetSet* o, const EncodingConfig& cfg,
                        double sigma) {
  cfg.validate();
  check_shape(h.scores, cfg, "heatmap");
  if (o) {
    check_shape(o->dx, cfg, "x-offset");
    check_shape(o->dy, cfg, "y-offset");
  }
  const HeatmapSet smoothed = gaussian_smooth(h, sigma);
  DecodedPose out;
  out.pose.keypoints.resize(cfg.num_keypoints);
  out.coarse_cells.resize(cfg.num_keypoints);
  out.low_confidence.resize(cfg.num_keypoints);
  double score_sum = 0.0;
  for (int k = 0; k < cfg.num_keypoints; ++k) {
    const GridCell cell = argmax_cell(smoothed.scores, k);
    const ImagePoint base = grid_to_image(cell.col, cell.row, cfg);
    Keypoint& kp = out.pose.keypoints[k];
    kp.x = base.x;
    kp.y = base.y;
    if (o) {
      kp.x += static_cast<double>(o->dx.at(k, cell.row, cell.col)) * cfg.radius;
      kp.y += static_cast<double>(o->dy.at(k, cell.row, cell.col)) * cfg.radius;
    }
    kp.score = std::clamp(static_cast<double>(smoothed.scores.at(k, cell.row, cell.col)), 0.0, 1.0);
    out.coarse_cells[k] = cell;
    out.low_confidence[k] = is_flat(smoothed.scores.channel(k));
    kp.visibility = out.low_confidence[k] ? Visibility::kNotLabeled : Visibility::kLabeledVisible;
    score_sum += kp.score;
  }
  out.pose.pose_score = score_sum / cfg.num_keypoints;
  return out;
}

}  // namespace

DecodedPose decode(const HeatmapSet& h, const OffsetSet& o, const EncodingConfig& cfg, double sigma) {
  return decode_impl(h, &o, cfg, sigma);
}

DecodedPose decode_heatmap_only(const HeatmapSet& h, const EncodingConfig& cfg, double sigma) {
  return decode_impl(h, nullptr, cfg, sigma);
}

}  // namespace ogn
