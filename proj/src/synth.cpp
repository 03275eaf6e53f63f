#include "ogn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ogn/error.hpp"

namespace ogn::synth {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t fold(std::uint64_t h, std::uint64_t v) { return mix64(h ^ mix64(v + 0x9E3779B97F4A7C15ULL)); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t v : path) h = fold(h, v);
  return h;
}

Rng::Rng(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> rest) {
  std::uint64_t h = fold(mix64(seed), static_cast<std::uint64_t>(stream));
  for (std::uint64_t v : rest) h = fold(h, v);
  engine_.seed(h);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

const std::vector<ImagePoint>& stick_figure_template() {
  static const std::vector<ImagePoint> kTemplate = {
      {0.00, 0.06},                  // nose
      {0.03, 0.04},  {-0.03, 0.04},  // eyes
      {0.06, 0.05},  {-0.06, 0.05},  // ears
      {0.12, 0.18},  {-0.12, 0.18},  // shoulders
      {0.17, 0.33},  {-0.17, 0.33},  // elbows
      {0.20, 0.47},  {-0.20, 0.47},  // wrists
      {0.08, 0.52},  {-0.08, 0.52},  // hips
      {0.09, 0.74},  {-0.09, 0.74},  // knees
      {0.10, 0.96},  {-0.10, 0.96},  // ankles
  };
  return kTemplate;
}

namespace {

// Template box for a person anchored at (x, y) without jitter.
Box template_box(const PersonMotion& m, double t) {
  const double cx = m.x + m.vx * t;
  const double top = m.y + m.vy * t;
  const double w = 0.40 * m.height;
  const double h = 0.92 * m.height;
  const double top_kp = top + 0.04 * m.height;
  return Box{cx - 0.5 * w * (1 + kBoxDilation), top_kp - 0.5 * h * kBoxDilation,
             cx + 0.5 * w * (1 + kBoxDilation), top_kp + h * (1 + 0.5 * kBoxDilation), 1.0};
}

bool inside_image(const Box& b, const ScenarioConfig& cfg) {
  return b.x_min >= 0.0 && b.y_min >= 0.0 && b.x_max <= cfg.image_w && b.y_max <= cfg.image_h;
}

std::vector<PersonMotion> place_people(const ScenarioConfig& cfg) {
  if (!cfg.motions.empty()) {
    if (static_cast<int>(cfg.motions.size()) != cfg.n_people) {
      throw Error(ErrorCode::kInvalidInput, "explicit motions must match n_people");
    }
    return cfg.motions;
  }
  Rng rng(cfg.rng_seed, Stream::kPlacement);
  std::vector<PersonMotion> placed;
  for (int p = 0; p < cfg.n_people; ++p) {
    bool ok = false;
    for (int attempt = 0; attempt < cfg.max_retries && !ok; ++attempt) {
      PersonMotion m;
      m.height = rng.uniform(cfg.min_height, cfg.max_height);
      m.x = rng.uniform(0.0, cfg.image_w);
      m.y = rng.uniform(0.0, cfg.image_h);
      const double speed = rng.uniform(0.0, cfg.max_speed);
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      m.vx = speed * std::cos(angle);
      m.vy = speed * std::sin(angle);
      ok = true;
      for (int f = 0; f < cfg.n_frames && ok; ++f) {
        const Box b = template_box(m, f);
        ok = inside_image(b, cfg);
        for (const PersonMotion& other : placed) {
          if (!ok) break;
          ok = iou(b, template_box(other, f)) <= cfg.max_overlap_iou;
        }
      }
      if (ok) placed.push_back(m);
    }
    if (!ok) {
      throw Error(ErrorCode::kGeneration,
                  "could not place person " + std::to_string(p) + " within the retry budget");
    }
  }
  return placed;
}

Pose make_pose(const PersonMotion& m, double t, double jitter, Rng& rng, const ScenarioConfig& cfg) {
  const double cx = m.x + m.vx * t;
  const double top = m.y + m.vy * t;
  Pose pose;
  pose.pose_score = 1.0;
  for (const ImagePoint& j : stick_figure_template()) {
    Keypoint k;
    k.x = std::clamp(cx + j.x * m.height + rng.normal(0.0, jitter * m.height), 0.0, cfg.image_w);
    k.y = std::clamp(top + j.y * m.height + rng.normal(0.0, jitter * m.height), 0.0, cfg.image_h);
    k.visibility = Visibility::kLabeledVisible;
    k.score = 1.0;
    pose.keypoints.push_back(k);
  }
  return pose;
}

}  // namespace

std::vector<SynthFrame> generate_sequence(const ScenarioConfig& cfg) {
  if (cfg.n_people < 0 || cfg.n_frames < 1) {
    throw Error(ErrorCode::kInvalidInput, "scenario needs n_people >= 0 and n_frames >= 1");
  }
  if (!(cfg.min_height > 0.0 && cfg.min_height <= cfg.max_height)) {
    throw Error(ErrorCode::kInvalidInput, "person height range is empty");
  }
  const std::vector<PersonMotion> people = place_people(cfg);

  std::vector<Embedding> embeddings;
  for (int p = 0; p < cfg.n_people; ++p) {
    Rng rng(cfg.rng_seed, Stream::kEmbedding, {static_cast<std::uint64_t>(p)});
    Embedding e(static_cast<std::size_t>(cfg.embedding_dim));
    for (float& v : e) v = static_cast<float>(rng.normal());
    embeddings.push_back(std::move(e));
  }

  std::vector<SynthFrame> frames(static_cast<std::size_t>(cfg.n_frames));
  for (int f = 0; f < cfg.n_frames; ++f) {
    for (int p = 0; p < cfg.n_people; ++p) {
      Rng rng(cfg.rng_seed, Stream::kJitter,
              {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(f)});
      SynthPerson person;
      person.id = p;
      person.pose = make_pose(people[p], f, cfg.joint_jitter, rng, cfg);
      person.box = keypoint_bounds(person.pose, kBoxDilation);
      person.embedding = embeddings[p];
      frames[f].push_back(std::move(person));
    }
  }
  return frames;
}

SynthFrame generate_scene(const ScenarioConfig& cfg) {
  ScenarioConfig single = cfg;
  single.n_frames = 1;
  return generate_sequence(single).front();
}

ScenarioConfig crossing_scenario(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.rng_seed = seed;
  cfg.n_people = 3;
  cfg.n_frames = 30;
  cfg.joint_jitter = 0.005;
  cfg.motions = {
      {100.0, 200.0, 15.0, 0.0, 160.0},
      {540.0, 206.0, -15.0, 0.0, 160.0},
      {470.0, 20.0, 0.0, 8.0, 170.0},
  };
  return cfg;
}

std::pair<HeatmapSet, OffsetSet> render_maps(const Pose& gt, const EncodingConfig& cfg,
                                             double heatmap_sigma, double offset_sigma, Rng& rng) {
  if (!(heatmap_sigma >= 0.0) || !(offset_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "noise sigma must be >= 0");
  }
  auto maps = encode_targets(gt, cfg);
  auto add_noise = [&rng](Grid3& g, double sigma) {
    if (sigma == 0.0) return;
    for (float& v : g.data()) v = static_cast<float>(v + rng.normal(0.0, sigma));
  };
  add_noise(maps.first.scores, heatmap_sigma);
  add_noise(maps.second.dx, offset_sigma);
  add_noise(maps.second.dy, offset_sigma);
  return maps;
}

std::pair<HeatmapSet, OffsetSet> render_maps(const Pose& gt, const EncodingConfig& cfg, double sigma,
                                             Rng& rng) {
  return render_maps(gt, cfg, sigma, sigma, rng);
}

namespace {

// Translates `b` so that its IoU with the original equals `target`; the
// overlap loss is split between the axes by `split` in [0, 1].
Box shift_to_iou(const Box& b, double target, double split, bool neg_x, bool neg_y) {
  const double q = 2.0 * target / (1.0 + target);  // overlap fraction of one box
  const double fx = 1.0 - std::pow(q, split);
  const double fy = 1.0 - std::pow(q, 1.0 - split);
  const double dx = (neg_x ? -fx : fx) * b.width();
  const double dy = (neg_y ? -fy : fy) * b.height();
  return Box{b.x_min + dx, b.y_min + dy, b.x_max + dx, b.y_max + dy, b.score};
}

Box jitter_box(const Box& g, double sigma, Rng& rng) {
  const double w = g.width();
  const double h = g.height();
  Box b = g;
  b.x_min += rng.normal(0.0, sigma * w);
  b.y_min += rng.normal(0.0, sigma * h);
  b.x_max += rng.normal(0.0, sigma * w);
  b.y_max += rng.normal(0.0, sigma * h);
  return b;
}

}  // namespace

std::vector<Box> generate_candidates(const std::vector<Box>& gt_boxes, const ScenarioConfig& cfg,
                                     Rng& rng) {
  if (cfg.candidates_per_gt < 1) throw Error(ErrorCode::kInvalidInput, "candidates_per_gt must be >= 1");
  if (!(cfg.box_jitter >= 0.0)) throw Error(ErrorCode::kInvalidInput, "box jitter must be >= 0");
  const bool rig = cfg.rig_rescue && cfg.box_jitter > 0.0 && cfg.candidates_per_gt >= 2;

  auto score_for = [&](double overlap) {
    const double mixed = cfg.score_iou_corr * overlap + (1.0 - cfg.score_iou_corr) * rng.uniform();
    const double noise = cfg.score_noise > 0.0 ? std::abs(rng.normal(0.0, cfg.score_noise)) : 0.0;
    return std::clamp(mixed - noise, 0.0, 1.0);
  };

  std::vector<Box> out;
  out.reserve(gt_boxes.size() * static_cast<std::size_t>(cfg.candidates_per_gt));
  for (const Box& g : gt_boxes) {
    int first_free = 0;
    double best_iou = 1.0;
    if (rig) {
      Box anchor = shift_to_iou(g, rng.uniform(0.7, 0.85), rng.uniform(), rng.uniform() < 0.5,
                                rng.uniform() < 0.5);
      anchor.score = rng.uniform(0.85, 1.0);
      Box precise = shift_to_iou(g, rng.uniform(0.9, 0.98), rng.uniform(), rng.uniform() < 0.5,
                                 rng.uniform() < 0.5);
      precise.score = rng.uniform(0.5, 0.75);
      best_iou = iou(precise, g);
      out.push_back(anchor);
      out.push_back(precise);
      first_free = 2;
    }
    for (int i = first_free; i < cfg.candidates_per_gt; ++i) {
      Box b;
      double overlap = 0.0;
      bool ok = false;
      for (int attempt = 0; attempt < cfg.max_retries && !ok; ++attempt) {
        b = jitter_box(g, cfg.box_jitter, rng);
        overlap = iou(b, g);
        ok = b.x_min < b.x_max && b.y_min < b.y_max && (!rig || overlap < best_iou);
      }
      if (!ok) throw Error(ErrorCode::kGeneration, "could not draw a valid jittered candidate");
      b.score = score_for(overlap);
      out.push_back(b);
    }
  }
  return out;
}

Pose pose_from_box(const Pose& gt, const Box& gt_box, const Box& crop) {
  if (!(gt_box.width() > 0.0) || !(gt_box.height() > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "ground-truth box is degenerate");
  }
  const double sx = crop.width() / gt_box.width();
  const double sy = crop.height() / gt_box.height();
  Pose out = gt;
  for (Keypoint& k : out.keypoints) {
    k.x = crop.x_min + (k.x - gt_box.x_min) * sx;
    k.y = crop.y_min + (k.y - gt_box.y_min) * sy;
  }
  return out;
}

std::vector<GroundTruth> ground_truth(const SynthFrame& frame) {
  std::vector<GroundTruth> out;
  out.reserve(frame.size());
  for (const SynthPerson& p : frame) out.push_back({p.pose, p.box});
  return out;
}

TrackedFrame tracked_ground_truth(const SynthFrame& frame) {
  TrackedFrame out;
  out.reserve(frame.size());
  for (const SynthPerson& p : frame) out.push_back({p.id, p.pose});
  return out;
}

}  // namespace ogn::synth
