#pragma once

#include <vector>

#include "ogn/encoding.hpp"
#include "ogn/geometry.hpp"

namespace ogn {

/// Smoothing applied to predicted heatmaps; oracle maps are decoded with 0.
inline constexpr double kDefaultPredictedSigma = 1.0;

struct GridCell {
  int col = 0;
  int row = 0;
  bool operator==(const GridCell&) const = default;
};

struct DecodedPose {
  Pose pose;
  /// Argmax cell of each smoothed heatmap channel.
  std::vector<GridCell> coarse_cells;
  /// True for channels with no strict maximum (every cell equal). Such
  /// keypoints are still placed by the tie-break but marked not-labeled.
  std::vector<bool> low_confidence;
};

/// Normalized 1-D Gaussian taps over [-ceil(3 sigma), ceil(3 sigma)].
/// sigma == 0 gives the single tap {1}.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian smoothing of each channel with replicate padding.
HeatmapSet gaussian_smooth(const HeatmapSet& h, double sigma);

/// Argmax of one channel; ties resolve to the lowest row, then lowest col.
GridCell argmax_cell(const Grid3& g, int channel);

/// Heatmap-offset fusion: coarse argmax of the smoothed heatmap refined by
/// the raw offsets read at that single cell,
///   F = (col * stride + dx * R, row * stride + dy * R).
DecodedPose decode(const HeatmapSet& h, const OffsetSet& o, const EncodingConfig& cfg,
                   double sigma);

/// Baseline that snaps each keypoint to its argmax lattice position.
DecodedPose decode_heatmap_only(const HeatmapSet& h, const EncodingConfig& cfg, double sigma);

}  // namespace ogn
