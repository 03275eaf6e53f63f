#include "ogn/tracking.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ogn/error.hpp"
#include "ogn/synth.hpp"
#include "oracles/reference.hpp"
#include "scenarios.hpp"
#include "test_util.hpp"

namespace ogn {
namespace {

Track track_at(const Box& b, Embedding e, int id = 0) {
  Track t;
  t.id = id;
  t.last_box = b;
  t.embedding = std::move(e);
  return t;
}

Detection detection_at(const Box& b, Embedding e) {
  Box box = b;
  box.score = 1.0;
  Pose p = testing::make_pose({{b.center_x(), b.center_y()}});
  return {make_instance(box, p), std::move(e)};
}

TEST(SimilarityTest, Examples) {
  const Box b{0, 0, 10, 10, 1};
  TrackConfig cfg;
  EXPECT_DOUBLE_EQ(similarity(track_at(b, {1, 2}), detection_at(b, {1, 2}), cfg), 1.0);

  cfg.lambda_spatial = 1.0;
  EXPECT_DOUBLE_EQ(similarity(track_at(b, {0}), detection_at({20, 20, 30, 30, 1}, {0}), cfg), 0.0);

  cfg.lambda_spatial = 0.0;
  cfg.appearance_scale = 2.0;
  // Squared distance 1 + 1 = tau.
  EXPECT_NEAR(similarity(track_at(b, {0, 0}), detection_at(b, {1, 1}), cfg), std::exp(-1.0), 1e-12);
}

TEST(SimilarityTest, DimensionMismatch) {
  const Box b{0, 0, 10, 10, 1};
  try {
    similarity(track_at(b, {0, 0}), detection_at(b, {0}), TrackConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(SimilarityTest, RangeAndUnityCondition) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    TrackConfig cfg;
    cfg.lambda_spatial = u(rng);
    cfg.appearance_scale = 0.1 + u(rng);
    const Box a = testing::random_box(rng);
    const Box b = i % 3 == 0 ? a : testing::random_box(rng);
    Embedding ea{static_cast<float>(u(rng)), static_cast<float>(u(rng))};
    Embedding eb = i % 2 == 0 ? ea : Embedding{static_cast<float>(u(rng)), static_cast<float>(u(rng))};
    const double s = similarity(track_at(a, ea), detection_at(b, eb), cfg);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    if (a == b && ea == eb) EXPECT_DOUBLE_EQ(s, 1.0);
  }
}

TEST(AssociateTest, SingleMatch) {
  const Box b{0, 0, 10, 10, 1};
  TrackConfig cfg;
  const Association a = associate({track_at(b, {0})}, {detection_at({1, 0, 11, 10, 1}, {0})}, cfg);
  ASSERT_EQ(a.matches.size(), 1u);
  EXPECT_TRUE(a.unmatched_tracks.empty());
  EXPECT_TRUE(a.unmatched_detections.empty());
}

TEST(AssociateTest, NoDetections) {
  const Association a = associate({track_at({0, 0, 1, 1, 1}, {0})}, {}, TrackConfig{});
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_tracks, std::vector<std::size_t>{0});
}

TEST(AssociateTest, BelowThresholdNeverMatches) {
  TrackConfig cfg;
  cfg.lambda_spatial = 1.0;
  cfg.match_thresh = 0.5;
  const Association a = associate({track_at({0, 0, 10, 10, 1}, {0})}, {detection_at({6, 0, 16, 10, 1}, {0})}, cfg);
  EXPECT_TRUE(a.matches.empty());
}

TEST(AssociateTest, EmbeddingsResolveSwappedBoxes) {
  // Tracks sit where the other target's detection now is; appearance decides.
  const Box left{0, 0, 10, 20, 1};
  const Box right{4, 0, 14, 20, 1};
  TrackConfig cfg;
  cfg.lambda_spatial = 0.3;
  cfg.match_thresh = 0.3;
  const std::vector<Track> tracks{track_at(left, {0, 0}, 0), track_at(right, {3, 3}, 1)};
  const std::vector<Detection> dets{detection_at(left, {3, 3}), detection_at(right, {0, 0})};
  // Hand-computed matrix: own-embedding pairs score 0.3*IoU + 0.7, swapped ones 0.3 + 0.7*exp(-18).
  const double cross_iou = iou(left, right);
  EXPECT_NEAR(similarity(tracks[0], dets[1], cfg), 0.3 * cross_iou + 0.7, 1e-12);
  EXPECT_NEAR(similarity(tracks[0], dets[0], cfg), 0.3 + 0.7 * std::exp(-18.0), 1e-12);
  const Association a = associate(tracks, dets, cfg);
  ASSERT_EQ(a.matches.size(), 2u);
  for (const Match& m : a.matches) EXPECT_NE(m.track, m.detection);
}

TEST(AssociateTest, MatchesGreedyReference) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(0, 8);
  std::normal_distribution<double> noise(0.0, 0.7);
  for (int trial = 0; trial < 500; ++trial) {
    TrackConfig cfg;
    cfg.match_thresh = 0.3;
    const int nt = dim(rng);
    const int nd = dim(rng);
    std::vector<Track> tracks;
    std::vector<Detection> dets;
    for (int i = 0; i < nt; ++i) tracks.push_back(track_at(testing::random_box(rng, 60), {float(noise(rng)), float(noise(rng))}));
    for (int i = 0; i < nd; ++i) dets.push_back(detection_at(testing::random_box(rng, 60), {float(noise(rng)), float(noise(rng))}));
    std::vector<std::vector<double>> m(static_cast<std::size_t>(nt), std::vector<double>(static_cast<std::size_t>(nd)));
    for (int t = 0; t < nt; ++t) {
      for (int d = 0; d < nd; ++d) m[t][d] = similarity(tracks[t], dets[d], cfg);
    }
    const auto want = oracle::greedy_assignment_reference(m, cfg.match_thresh);
    const Association got = associate(tracks, dets, cfg);
    ASSERT_EQ(got.matches.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(got.matches[i].track, want[i].row);
      EXPECT_EQ(got.matches[i].detection, want[i].col);
      EXPECT_GE(got.matches[i].similarity, cfg.match_thresh);
    }
    EXPECT_EQ(got.matches.size() + got.unmatched_tracks.size(), tracks.size());
    EXPECT_EQ(got.matches.size() + got.unmatched_detections.size(), dets.size());
  }
}

TEST(StepTest, NewTracksGetSequentialIds) {
  TrackSet set;
  const std::vector<Detection> dets{detection_at({0, 0, 10, 10, 1}, {0}), detection_at({50, 0, 60, 10, 1}, {1}),
                                    detection_at({100, 0, 110, 10, 1}, {2})};
  EXPECT_EQ(step(set, dets, TrackConfig{}), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(set.next_id, 3);
  EXPECT_EQ(set.active_count(), 3u);
}

TEST(StepTest, MatchedTrackTakesLatestEmbedding) {
  TrackSet set;
  step(set, {detection_at({0, 0, 10, 10, 1}, {0.0f})}, TrackConfig{});
  const auto ids = step(set, {detection_at({1, 0, 11, 10, 1}, {0.1f})}, TrackConfig{});
  EXPECT_EQ(ids, std::vector<int>{0});
  EXPECT_FLOAT_EQ(set.tracks[0].embedding[0], 0.1f);
  EXPECT_EQ(set.tracks[0].last_box.x_min, 1.0);
}

TEST(StepTest, TrackIsLostAfterMaxAgeAndNeverRevived) {
  TrackConfig cfg;
  cfg.max_age = 3;
  TrackSet set;
  const Detection d = detection_at({0, 0, 10, 10, 1}, {0});
  step(set, {d}, cfg);
  for (int i = 0; i < cfg.max_age; ++i) {
    step(set, {}, cfg);
    EXPECT_EQ(set.tracks[0].state, TrackState::kActive);
  }
  step(set, {}, cfg);
  EXPECT_EQ(set.tracks[0].state, TrackState::kLost);
  const auto ids = step(set, {d}, cfg);
  EXPECT_EQ(ids, std::vector<int>{1});
  EXPECT_EQ(set.tracks[0].state, TrackState::kLost);
}

TEST(StepTest, ThreePersonSequenceIssuesThreeIds) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    synth::ScenarioConfig cfg;
    cfg.rng_seed = seed;
    cfg.n_frames = 30;
    const auto frames = synth::generate_sequence(cfg);
    const auto run = testing::track_ground_truth(frames, TrackConfig{}, seed, cfg.embedding_noise);
    EXPECT_EQ(run.ids_issued, 3);
    std::set<int> seen;
    for (const auto& f : run.predicted) {
      std::set<int> in_frame;
      for (const auto& p : f) {
        EXPECT_TRUE(in_frame.insert(p.track_id).second);
        seen.insert(p.track_id);
      }
    }
    EXPECT_EQ(seen, (std::set<int>{0, 1, 2}));
  }
}

TEST(StepTest, CrossingNeedsAppearance) {
  const auto cfg = synth::crossing_scenario(7);
  const auto frames = synth::generate_sequence(cfg);
  TrackConfig with;
  const auto good = testing::track_ground_truth(frames, with, 7, cfg.embedding_noise);
  EXPECT_EQ(good.ids_issued, 3);
  EXPECT_EQ(evaluate_mota(good.predicted, good.truth, 10.0).ids, 0u);

  TrackConfig spatial = with;
  spatial.lambda_spatial = 1.0;
  const auto bad = testing::track_ground_truth(frames, spatial, 7, cfg.embedding_noise);
  EXPECT_GE(evaluate_mota(bad.predicted, bad.truth, 10.0).ids, 1u);
}

}  // namespace
}  // namespace ogn
