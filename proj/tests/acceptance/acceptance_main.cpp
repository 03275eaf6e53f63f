// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "malformed_corpus.hpp"
#include "ogn/decoding.hpp"
#include "ogn/encoding.hpp"
#include "ogn/error.hpp"
#include "ogn/eval.hpp"
#include "ogn/gbg.hpp"
#include "ogn/geometry.hpp"
#include "ogn/io.hpp"
#include "ogn/nms.hpp"
#include "ogn/pipeline.hpp"
#include "ogn/synth.hpp"
#include "ogn/tracking.hpp"
#include "oracles/reference.hpp"
#include "scenarios.hpp"

namespace {

using namespace ogn;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EncodingConfig map_config(int stride, double radius, int w, int h, int k) {
  EncodingConfig c;
  c.stride = stride;
  c.radius = radius;
  c.map_w = w;
  c.map_h = h;
  c.num_keypoints = k;
  return c;
}

Pose uniform_pose(std::mt19937_64& rng, int k, double lo_x, double hi_x, double lo_y, double hi_y) {
  std::uniform_real_distribution<double> ux(lo_x, hi_x);
  std::uniform_real_distribution<double> uy(lo_y, hi_y);
  Pose p;
  for (int i = 0; i < k; ++i) p.keypoints.push_back({ux(rng), uy(rng), Visibility::kLabeledVisible, 1.0});
  return p;
}

Outcome quantization() {
  struct Stats {
    double mean_axis = 0.0;
    double max_fused = 0.0;
  };
  auto run = [](int stride, std::uint64_t seed) {
    constexpr int kSamples = 10000;
    constexpr int kPerPose = 17;
    const EncodingConfig c = map_config(stride, 2.0 * stride, 12, 12, kPerPose);
    std::mt19937_64 rng(seed);
    Stats s;
    double sum = 0.0;
    int n = 0;
    while (n < kSamples) {
      const Pose g = uniform_pose(rng, kPerPose, 3.0 * stride, 8.0 * stride, 3.0 * stride, 8.0 * stride);
      const auto [h, o] = encode_targets(g, c);
      const DecodedPose base = decode_heatmap_only(h, c, 1.0);
      const DecodedPose fused = decode(h, o, c, 1.0);
      for (int k = 0; k < kPerPose && n < kSamples; ++k, ++n) {
        const Keypoint& t = g.keypoints[k];
        sum += std::abs(base.pose.keypoints[k].x - t.x) + std::abs(base.pose.keypoints[k].y - t.y);
        s.max_fused = std::max({s.max_fused, std::abs(fused.pose.keypoints[k].x - t.x),
                                std::abs(fused.pose.keypoints[k].y - t.y)});
      }
    }
    s.mean_axis = sum / (2.0 * n);
    return s;
  };
  const Stats s8 = run(8, 101);
  const Stats s16 = run(16, 102);
  const double ratio = s16.mean_axis / s8.mean_axis;
  const bool ok = std::abs(s8.mean_axis - 2.0) <= 0.2 && std::abs(s16.mean_axis - 4.0) <= 0.4 &&
                  std::abs(ratio - 2.0) <= 0.1 && s8.max_fused < 1e-4 && s16.max_fused < 1e-4;
  return {ok, fmt("mean axis error s8=%.4f s16=%.4f ratio=%.4f, fused max error %.2e/%.2e", s8.mean_axis,
                  s16.mean_axis, ratio, s8.max_fused, s16.max_fused)};
}

Outcome round_trip() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  int cases = 0;
  for (int stride : {8, 16}) {
    for (double rmul : {1.0, 2.0}) {
      const int w = 192 / stride;
      const int h = 256 / stride;
      const EncodingConfig c = map_config(stride, rmul * stride, w, h, 17);
      for (int i = 0; i < 1000; ++i) {
        const Pose g = uniform_pose(rng, 17, 0.0, (w - 1) * stride, 0.0, (h - 1) * stride);
        const auto [hm, off] = encode_targets(g, c);
        const DecodedPose d = decode(hm, off, c, kDefaultPredictedSigma);
        for (std::size_t k = 0; k < g.size(); ++k) {
          worst = std::max({worst, std::abs(d.pose.keypoints[k].x - g.keypoints[k].x),
                            std::abs(d.pose.keypoints[k].y - g.keypoints[k].y)});
        }
        ++cases;
      }
    }
  }
  return {worst < 1e-4, fmt("%d poses, max error %.2e px", cases, worst)};
}

std::vector<Box> candidate_set(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 20);
  std::uniform_real_distribution<double> center(20.0, 200.0);
  std::normal_distribution<double> jitter(0.0, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> centers;
  for (int i = 0; i < 3; ++i) centers.emplace_back(center(rng), center(rng));
  std::vector<Box> out;
  const int m = count(rng);
  for (int i = 0; i < m; ++i) {
    const auto& [cx, cy] = centers[static_cast<std::size_t>(i) % centers.size()];
    const double w = 20.0 + 40.0 * unit(rng);
    const double h = 20.0 + 40.0 * unit(rng);
    const double x = cx + jitter(rng);
    const double y = cy + jitter(rng);
    // Coarse score levels force ties onto the coordinate tie-break.
    const double s = std::round(unit(rng) * 20.0) / 20.0;
    out.push_back({x - w / 2, y - h / 2, x + w / 2, y + h / 2, s});
  }
  return out;
}

bool same_bytes(std::vector<Box> a, std::vector<Box> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end(), score_desc_then_coords);
  std::sort(b.begin(), b.end(), score_desc_then_coords);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x[5] = {a[i].x_min, a[i].y_min, a[i].x_max, a[i].y_max, a[i].score};
    const double y[5] = {b[i].x_min, b[i].y_min, b[i].x_max, b[i].y_max, b[i].score};
    if (std::memcmp(x, y, sizeof x) != 0) return false;
  }
  return true;
}

Outcome gbg_equivalence() {
  std::mt19937_64 rng(303);
  int agree = 0;
  int nonempty = 0;
  for (int trial = 0; trial < 500; ++trial) {
    GbgConfig cfg;
    cfg.min_side = trial % 2 == 0 ? 0.0 : 25.0;
    const std::vector<Box> in = candidate_set(rng);
    const GbgResult got = gbg_select(in, cfg);
    const oracle::GbgOutput want =
        oracle::gbg_reference(in, cfg.min_side, cfg.egt_score, cfg.egt_iou, cfg.group_iou, cfg.top_n);
    nonempty += got.kept.empty() ? 0 : 1;
    agree += same_bytes(got.kept, want.kept) && got.fallback == want.fallback ? 1 : 0;
  }
  return {agree == 500, fmt("%d/500 sets identical (%d non-empty)", agree, nonempty)};
}

Outcome gbg_rescue() {
  int gbg_kept_all = 0;
  int nms_dropped = 0;
  int boxes = 0;
  int boxes_dropped = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    synth::ScenarioConfig sc;
    sc.rng_seed = seed;
    sc.box_jitter = 0.1;
    sc.candidates_per_gt = 5;
    const synth::SynthFrame frame = synth::generate_scene(sc);
    std::vector<Box> gt;
    for (const auto& p : frame) gt.push_back(p.box);
    synth::Rng rng(seed, synth::Stream::kCandidates, {0});
    const std::vector<Box> cands = synth::generate_candidates(gt, sc, rng);
    const std::vector<Box> kept = gbg_select(cands, GbgConfig{}).kept;
    const std::vector<Box> nms = oracle::score_nms_reference(cands, 0.5);
    bool all = true;
    bool dropped = false;
    for (std::size_t p = 0; p < gt.size(); ++p) {
      const auto first = cands.begin() + static_cast<std::ptrdiff_t>(p * 5);
      const Box best = *std::max_element(
          first, first + 5, [&](const Box& a, const Box& b) { return iou(a, gt[p]) < iou(b, gt[p]); });
      all = all && std::find(kept.begin(), kept.end(), best) != kept.end();
      const bool gone = std::find(nms.begin(), nms.end(), best) == nms.end();
      dropped = dropped || gone;
      ++boxes;
      boxes_dropped += gone ? 1 : 0;
    }
    gbg_kept_all += all ? 1 : 0;
    nms_dropped += dropped ? 1 : 0;
  }
  return {gbg_kept_all == 200 && nms_dropped > 100,
          fmt("GBG kept best box in %d/200 trials; score-NMS@0.5 dropped it in %d/200 (%d/%d boxes)", gbg_kept_all,
              nms_dropped, boxes_dropped, boxes)};
}

ScoredInstance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.0, 120.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 3.0);
  const double x = pos(rng);
  const double y = pos(rng);
  Box b{x, y, x + 40.0 + 10.0 * unit(rng), y + 80.0 + 10.0 * unit(rng), unit(rng)};
  Pose p;
  for (int j = 0; j < 17; ++j) {
    p.keypoints.push_back({x + 2.0 * j + jitter(rng), y + 5.0 * j + jitter(rng), Visibility::kLabeledVisible, 1.0});
  }
  p.pose_score = unit(rng);
  return make_instance(b, p);
}

Outcome nms_equivalence() {
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<int> count(0, 15);
  const NmsConfig cfg;
  int agree = 0;
  int collapsed = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ScoredInstance> in;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) in.push_back(random_instance(rng));
    const auto got = oks_iou_nms(in, cfg);
    const auto want = oracle::nms_reference(in, cfg.iou_thresh, cfg.oks_thresh, 0.1);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].box == want[i].box && got[i].final_score == want[i].final_score;
    }
    agree += same ? 1 : 0;
    const ScoredInstance one = random_instance(rng);
    collapsed += oks_iou_nms({one, one}, cfg).size() == 1 ? 1 : 0;
  }
  return {agree == 500 && collapsed == 500,
          fmt("%d/500 sets identical; %d/500 identical pairs collapsed", agree, collapsed)};
}

Outcome ratio_extension() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> pos(-100.0, 600.0);
  std::uniform_real_distribution<double> size(0.5, 400.0);
  double worst_ratio = 0.0;
  double worst_center = 0.0;
  int contains = 0;
  int idempotent = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = pos(rng);
    const double y = pos(rng);
    const Box b{x, y, x + size(rng), y + size(rng), 0.5};
    const Box e = extend_to_ratio(b, kRoiAspectRatio);
    worst_ratio = std::max(worst_ratio, std::abs(e.width() / e.height() - kRoiAspectRatio));
    worst_center = std::max({worst_center, std::abs(e.center_x() - b.center_x()), std::abs(e.center_y() - b.center_y())});
    contains += e.x_min <= b.x_min && e.y_min <= b.y_min && e.x_max >= b.x_max && e.y_max >= b.y_max ? 1 : 0;
    const Box twice = extend_to_ratio(e, kRoiAspectRatio);
    idempotent += std::abs(twice.x_min - e.x_min) <= 1e-9 && std::abs(twice.x_max - e.x_max) <= 1e-9 &&
                          std::abs(twice.y_min - e.y_min) <= 1e-9 && std::abs(twice.y_max - e.y_max) <= 1e-9
                      ? 1
                      : 0;
  }
  return {worst_ratio <= 1e-9 && worst_center <= 1e-9 && contains == 1000 && idempotent == 1000,
          fmt("max ratio deviation %.2e, max center shift %.2e, contains %d/1000, idempotent %d/1000", worst_ratio,
              worst_center, contains, idempotent)};
}

TrackedPose tracked_point(int id, double x, double y) {
  Pose p;
  p.keypoints.push_back({x, y, Visibility::kLabeledVisible, 1.0});
  return {id, p};
}

Outcome metrics_sanity() {
  PipelineConfig cfg;
  cfg.scenario.n_frames = 10;
  const PipelineReport r = run_pipeline(cfg);
  const bool pipeline_ok = r.ap.ap == 1.0 && r.mota && r.mota->mota == 1.0 && r.mota->fp == 0 && r.mota->fn == 0 &&
                           r.mota->ids == 0;

  std::vector<TrackedFrame> gt(10), pred(10);
  for (int f = 0; f < 10; ++f) {
    gt[f].push_back(tracked_point(0, 0, 0));
    if (f < 4) pred[f].push_back(tracked_point(5, 0, 0));
    if ((f >= 4 && f <= 6) || f == 9) pred[f].push_back(tracked_point(6, 0.5, 0));
  }
  pred[9].push_back(tracked_point(7, 100, 100));
  const MotaResult m = evaluate_mota(pred, gt, 2.0);
  const bool hand_ok = m.gt == 10 && m.fp == 1 && m.fn == 2 && m.ids == 1 && m.mota == 0.6;
  return {pipeline_ok && hand_ok,
          fmt("pipeline ap=%.6f mota=%.6f fp=%zu fn=%zu ids=%zu; hand example mota=%.6f (gt=%zu fp=%zu fn=%zu ids=%zu)",
              r.ap.ap, r.mota ? r.mota->mota : -1.0, r.mota ? r.mota->fp : 0, r.mota ? r.mota->fn : 0,
              r.mota ? r.mota->ids : 0, m.mota, m.gt, m.fp, m.fn, m.ids)};
}

Outcome tracking() {
  int clean = 0;
  int switched = 0;
  constexpr int kSeeds = 10;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const synth::ScenarioConfig sc = synth::crossing_scenario(seed);
    const auto frames = synth::generate_sequence(sc);
    const TrackConfig with;
    const auto good = testing::track_ground_truth(frames, with, seed, sc.embedding_noise);
    const MotaResult mg = evaluate_mota(good.predicted, good.truth, 10.0);
    clean += good.ids_issued == 3 && mg.ids == 0 ? 1 : 0;

    TrackConfig spatial;
    spatial.lambda_spatial = 1.0;
    const auto bad = testing::track_ground_truth(frames, spatial, seed, sc.embedding_noise);
    switched += evaluate_mota(bad.predicted, bad.truth, 10.0).ids >= 1 ? 1 : 0;
  }
  return {clean == kSeeds && switched == kSeeds,
          fmt("with appearance: 3 ids and 0 switches in %d/%d seeds; IoU only: switches in %d/%d seeds", clean, kSeeds,
              switched, kSeeds)};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(-1);
}

Outcome serialization() {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> nd(0, 4);
  std::uniform_int_distribution<std::uint32_t> dim(0, 6);
  std::uniform_int_distribution<std::uint32_t> bits;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int tensor_ok = 0;
  int json_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    io::FloatTensor t;
    const int n = nd(rng);
    for (int d = 0; d < n; ++d) t.dims.push_back(dim(rng));
    t.data.resize(t.element_count());
    for (float& v : t.data) v = std::bit_cast<float>(bits(rng));
    const io::FloatTensor back = io::decode_tensor(io::encode_tensor(t));
    tensor_ok += back.dims == t.dims && back.data.size() == t.data.size() &&
                         std::memcmp(back.data.data(), t.data.data(), t.data.size() * sizeof(float)) == 0
                     ? 1
                     : 0;

    std::vector<io::InstanceFrame> frames(1 + rng() % 3);
    for (std::size_t f = 0; f < frames.size(); ++f) {
      frames[f].frame_id = static_cast<int>(f);
      for (int k = 0; k < static_cast<int>(rng() % 4); ++k) {
        ScoredInstance s = random_instance(rng);
        s.pose.keypoints[rng() % 17].visibility = Visibility::kNotLabeled;
        for (Keypoint& kp : s.pose.keypoints) {
          if (!is_labeled(kp.visibility)) kp.x = kp.y = 0.0;
        }
        io::InstanceRecord r{s, std::nullopt, std::nullopt};
        if (i % 2) {
          r.track_id = static_cast<int>(rng() % 100);
          r.embedding = Embedding{static_cast<float>(unit(rng)), static_cast<float>(unit(rng))};
        }
        frames[f].instances.push_back(r);
      }
    }
    const auto jback = io::instances_from_json(nlohmann::json::parse(io::instances_to_json(frames).dump()));
    bool same = jback.size() == frames.size();
    for (std::size_t f = 0; same && f < frames.size(); ++f) {
      same = jback[f].frame_id == frames[f].frame_id && jback[f].instances.size() == frames[f].instances.size();
      for (std::size_t k = 0; same && k < frames[f].instances.size(); ++k) {
        const auto& a = frames[f].instances[k];
        const auto& b = jback[f].instances[k];
        same = a.instance.box == b.instance.box && a.instance.pose == b.instance.pose &&
               a.instance.final_score == b.instance.final_score && a.track_id == b.track_id &&
               a.embedding == b.embedding;
      }
    }
    json_ok += same ? 1 : 0;
  }

  int corpus = 0;
  int corpus_ok = 0;
  std::set<ErrorCode> distinct;
  for (const auto& c : testing::malformed_tensors()) {
    ++corpus;
    corpus_ok += code_of([&] { io::decode_tensor(c.bytes); }) == c.expected ? 1 : 0;
    distinct.insert(c.expected);
  }
  for (const auto& c : testing::malformed_instance_json()) {
    ++corpus;
    corpus_ok += code_of([&] { io::instances_from_json(nlohmann::json::parse(c.text)); }) == c.expected ? 1 : 0;
    distinct.insert(c.expected);
  }
  return {tensor_ok == 1000 && json_ok == 1000 && corpus_ok == corpus && corpus >= 6 && distinct.size() >= 6,
          fmt("tensor %d/1000, json %d/1000 lossless; malformed corpus %d/%d designated errors, %zu distinct codes",
              tensor_ok, json_ok, corpus_ok, corpus, distinct.size())};
}

Outcome smooth_l1_checks() {
  const double a = smooth_l1(0.5);
  const double b = smooth_l1(2.0);
  const double gap = std::max(std::abs(smooth_l1(1.0) - smooth_l1(std::nextafter(1.0, 0.0))),
                              std::abs(smooth_l1(-1.0) - smooth_l1(std::nextafter(-1.0, 0.0))));
  return {a == 0.125 && b == 1.5 && gap <= 1e-9, fmt("f(0.5)=%.6f f(2)=%.6f jump at |e|=1: %.2e", a, b, gap)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
    double budget_s;
  };
  const Criterion criteria[] = {
      {1, "quantization error elimination", quantization, 5.0},
      {2, "encode/decode round trip", round_trip, 5.0},
      {3, "GBG reference equivalence", gbg_equivalence, 10.0},
      {4, "GBG rescue of best-localized box", gbg_rescue, 0.0},
      {5, "OKS+IoU NMS reference equivalence", nms_equivalence, 0.0},
      {6, "ratio-consistent box extension", ratio_extension, 0.0},
      {7, "metrics sanity", metrics_sanity, 0.0},
      {8, "tracking with appearance cue", tracking, 0.0},
      {9, "serialization", serialization, 0.0},
      {10, "smooth-L1 values and continuity", smooth_l1_checks, 0.0},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s budget", c.budget_s);
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %d %s: %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
  }
  return failures == 0 ? 0 : 1;
}
