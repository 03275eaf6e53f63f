#include "ogn/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ogn/error.hpp"

namespace ogn {

void TrackConfig::validate() const {
  if (!(lambda_spatial >= 0.0 && lambda_spatial <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "lambda_spatial must lie in [0,1]");
  }
  if (!(appearance_scale > 0.0)) throw Error(ErrorCode::kInvalidInput, "appearance scale must be > 0");
  if (!(match_thresh >= 0.0 && match_thresh <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "match threshold must lie in [0,1]");
  }
  if (max_age < 0) throw Error(ErrorCode::kInvalidInput, "max_age must be >= 0");
}

double similarity(const Track& t, const Detection& d, const TrackConfig& cfg) {
  if (t.embedding.size() != d.embedding.size()) {
    throw Error(ErrorCode::kInvalidInput, "embedding dimensions differ");
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < t.embedding.size(); ++i) {
    const double e = static_cast<double>(t.embedding[i]) - d.embedding[i];
    dist2 += e * e;
  }
  const double spatial = iou(t.last_box, d.instance.box);
  const double appearance = std::exp(-dist2 / cfg.appearance_scale);
  return cfg.lambda_spatial * spatial + (1.0 - cfg.lambda_spatial) * appearance;
}

Association associate(const std::vector<Track>& tracks, const std::vector<Detection>& detections,
                      const TrackConfig& cfg) {
  cfg.validate();
  std::vector<Match> pairs;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (tracks[t].state != TrackState::kActive) continue;
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double s = similarity(tracks[t], detections[d], cfg);
      if (s >= cfg.match_thresh) pairs.push_back({t, d, s});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Match& a, const Match& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return std::tie(a.track, a.detection) < std::tie(b.track, b.detection);
  });

  Association out;
  std::vector<bool> track_used(tracks.size(), false);
  std::vector<bool> det_used(detections.size(), false);
  for (const Match& m : pairs) {
    if (track_used[m.track] || det_used[m.detection]) continue;
    track_used[m.track] = true;
    det_used[m.detection] = true;
    out.matches.push_back(m);
  }
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (tracks[t].state == TrackState::kActive && !track_used[t]) out.unmatched_tracks.push_back(t);
  }
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (!det_used[d]) out.unmatched_detections.push_back(d);
  }
  return out;
}

std::size_t TrackSet::active_count() const {
  return static_cast<std::size_t>(std::count_if(
      tracks.begin(), tracks.end(), [](const Track& t) { return t.state == TrackState::kActive; }));
}

std::vector<int> step(TrackSet& set, const std::vector<Detection>& detections,
                      const TrackConfig& cfg) {
  const Association a = associate(set.tracks, detections, cfg);
  std::vector<int> ids(detections.size(), -1);
  for (const Match& m : a.matches) {
    Track& t = set.tracks[m.track];
    const Detection& d = detections[m.detection];
    t.last_box = d.instance.box;
    t.last_pose = d.instance.pose;
    t.embedding = d.embedding;
    t.age = 0;
    ids[m.detection] = t.id;
  }
  for (std::size_t ti : a.unmatched_tracks) {
    Track& t = set.tracks[ti];
    if (++t.age > cfg.max_age) t.state = TrackState::kLost;
  }
  for (std::size_t di : a.unmatched_detections) {
    const Detection& d = detections[di];
    Track t;
    t.id = set.next_id++;
    t.last_box = d.instance.box;
    t.last_pose = d.instance.pose;
    t.embedding = d.embedding;
    set.tracks.push_back(std::move(t));
    ids[di] = set.tracks.back().id;
  }
  return ids;
}

}  // namespace ogn
