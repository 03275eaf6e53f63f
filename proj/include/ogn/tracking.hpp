#pragma once

#include <cstddef>
#include <vector>

#include "ogn/geometry.hpp"
#include "ogn/nms.hpp"

namespace ogn {

/// Appearance descriptor from an external re-identification model.
using Embedding = std::vector<float>;

struct Detection {
  ScoredInstance instance;
  Embedding embedding;
};

enum class TrackState { kActive, kLost };

struct Track {
  int id = 0;
  Box last_box;
  Pose last_pose;
  Embedding embedding;
  int age = 0;  // frames since the last match
  TrackState state = TrackState::kActive;
};

struct TrackConfig {
  double lambda_spatial = 0.5;
  double appearance_scale = 1.0;
  double match_thresh = 0.5;
  int max_age = 10;

  void validate() const;
};

/// lambda * IoU(boxes) + (1 - lambda) * exp(-|e_t - e_d|^2 / tau).
/// Throws kInvalidInput on embedding dimension mismatch.
double similarity(const Track& t, const Detection& d, const TrackConfig& cfg);

struct Match {
  std::size_t track = 0;
  std::size_t detection = 0;
  double similarity = 0.0;
};

struct Association {
  std::vector<Match> matches;
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_detections;
};

/// Greedy one-to-one matching by descending similarity; ties go to the
/// lower track index, then the lower detection index. Pairs below
/// match_thresh never match. Lost tracks take no part and are not reported.
Association associate(const std::vector<Track>& tracks, const std::vector<Detection>& detections,
                      const TrackConfig& cfg);

/// Sequence-scoped tracking state. Ids are issued in detection order and
/// never reused.
struct TrackSet {
  std::vector<Track> tracks;
  int next_id = 0;

  std::size_t active_count() const;
};

/// Advances one frame and returns the track id assigned to each detection.
/// Matched tracks take the detection's box, pose and embedding; unmatched
/// tracks age and turn lost (permanently) once age exceeds max_age.
std::vector<int> step(TrackSet& set, const std::vector<Detection>& detections,
                      const TrackConfig& cfg);

}  // namespace ogn
