#include "ogn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "ogn/error.hpp"

namespace ogn {

std::array<double, kNumOksThresholds> oks_thresholds() {
  std::array<double, kNumOksThresholds> t{};
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (50.0 + 5.0 * static_cast<double>(i)) / 100.0;
  return t;
}

namespace {

bool usable(const GroundTruth& g) { return g.pose.labeled_count() > 0 && g.box.area() > 0.0; }

struct Record {
  double score;
  bool tp;
};

// 101-point interpolated area under the precision/recall curve.
double interpolated_ap(std::vector<Record> records, std::size_t num_gt) {
  std::sort(records.begin(), records.end(),
            [](const Record& a, const Record& b) { return a.score > b.score; });
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t tp = 0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    tp += records[i].tp ? 1 : 0;
    ++seen;
    const bool group_end = i + 1 == records.size() || records[i + 1].score != records[i].score;
    if (!group_end) continue;
    recall.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(seen));
  }
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0.0;
  for (int r = 0; r <= 100; ++r) {
    // Tolerance absorbs the rounding in tp / num_gt versus r / 100.
    const double thr = r / 100.0 - 1e-12;
    const auto it = std::lower_bound(recall.begin(), recall.end(), thr);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / 101.0;
}

}  // namespace

ApResult evaluate_ap(const std::vector<std::vector<ScoredInstance>>& predictions,
                     const std::vector<std::vector<GroundTruth>>& ground_truth,
                     const OksParams& params) {
  if (predictions.size() != ground_truth.size()) {
    throw Error(ErrorCode::kInvalidInput, "prediction and ground-truth image counts differ");
  }
  ApResult out;
  for (std::size_t img = 0; img < predictions.size(); ++img) {
    out.num_predictions += predictions[img].size();
    out.num_gt += static_cast<std::size_t>(
        std::count_if(ground_truth[img].begin(), ground_truth[img].end(), usable));
  }
  if (out.num_gt == 0) {
    out.vacuous = out.num_predictions == 0;
    const double v = out.vacuous ? 1.0 : 0.0;
    out.per_threshold.fill(v);
    out.ap = out.ap50 = out.ap75 = v;
    return out;
  }

  // OKS tables are threshold independent.
  std::vector<std::vector<std::vector<double>>> sims(predictions.size());
  std::vector<std::vector<std::size_t>> orders(predictions.size());
  for (std::size_t img = 0; img < predictions.size(); ++img) {
    const auto& preds = predictions[img];
    const auto& gts = ground_truth[img];
    auto& order = orders[img];
    order.resize(preds.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return instance_order(preds[a], preds[b]);
    });
    sims[img].assign(preds.size(), std::vector<double>(gts.size(), -1.0));
    for (std::size_t p = 0; p < preds.size(); ++p) {
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (usable(gts[g])) sims[img][p][g] = oks(preds[p].pose, gts[g].pose, gts[g].box.area(), params);
      }
    }
  }

  const auto thresholds = oks_thresholds();
  for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
    std::vector<Record> records;
    records.reserve(out.num_predictions);
    for (std::size_t img = 0; img < predictions.size(); ++img) {
      std::vector<bool> taken(ground_truth[img].size(), false);
      for (std::size_t p : orders[img]) {
        double best = -1.0;
        std::size_t best_g = 0;
        for (std::size_t g = 0; g < taken.size(); ++g) {
          const double s = sims[img][p][g];
          if (taken[g] || s < thresholds[ti] || s <= best) continue;
          best = s;
          best_g = g;
        }
        if (best >= 0.0) taken[best_g] = true;
        records.push_back({predictions[img][p].final_score, best >= 0.0});
      }
    }
    out.per_threshold[ti] = interpolated_ap(std::move(records), out.num_gt);
  }
  out.ap = std::accumulate(out.per_threshold.begin(), out.per_threshold.end(), 0.0) /
           static_cast<double>(kNumOksThresholds);
  out.ap50 = out.per_threshold[0];
  out.ap75 = out.per_threshold[5];
  return out;
}

namespace {

double distance(const Keypoint& a, const Keypoint& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::size_t keypoint_count(const std::vector<TrackedFrame>& a, const std::vector<TrackedFrame>& b) {
  std::optional<std::size_t> k;
  for (const auto* frames : {&a, &b}) {
    for (const TrackedFrame& f : *frames) {
      for (const TrackedPose& p : f) {
        if (k && *k != p.pose.size()) throw Error(ErrorCode::kInvalidInput, "inconsistent keypoint counts");
        k = p.pose.size();
      }
    }
  }
  return k.value_or(0);
}

}  // namespace

MotaResult evaluate_mota(const std::vector<TrackedFrame>& predictions,
                         const std::vector<TrackedFrame>& ground_truth, double dist_thresh) {
  if (predictions.size() != ground_truth.size()) {
    throw Error(ErrorCode::kInvalidInput, "prediction and ground-truth frame counts differ");
  }
  if (!(dist_thresh >= 0.0)) throw Error(ErrorCode::kInvalidInput, "distance threshold must be >= 0");
  const std::size_t num_kp = keypoint_count(predictions, ground_truth);

  MotaResult out;
  out.per_keypoint.resize(num_kp);
  for (std::size_t j = 0; j < num_kp; ++j) {
    KeypointMota& acc = out.per_keypoint[j];
    std::map<int, int> last_match;  // gt track id -> predicted track id
    for (std::size_t f = 0; f < ground_truth.size(); ++f) {
      std::vector<const TrackedPose*> gts;
      std::vector<const TrackedPose*> preds;
      for (const TrackedPose& g : ground_truth[f]) {
        if (is_labeled(g.pose.keypoints[j].visibility)) gts.push_back(&g);
      }
      for (const TrackedPose& p : predictions[f]) {
        if (is_labeled(p.pose.keypoints[j].visibility)) preds.push_back(&p);
      }
      std::vector<int> gt_to_pred(gts.size(), -1);
      std::vector<bool> pred_used(preds.size(), false);

      for (std::size_t g = 0; g < gts.size(); ++g) {
        const auto prev = last_match.find(gts[g]->track_id);
        if (prev == last_match.end()) continue;
        for (std::size_t p = 0; p < preds.size(); ++p) {
          if (pred_used[p] || preds[p]->track_id != prev->second) continue;
          if (distance(gts[g]->pose.keypoints[j], preds[p]->pose.keypoints[j]) <= dist_thresh) {
            gt_to_pred[g] = static_cast<int>(p);
            pred_used[p] = true;
          }
          break;
        }
      }

      std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (gt_to_pred[g] >= 0) continue;
        for (std::size_t p = 0; p < preds.size(); ++p) {
          if (pred_used[p]) continue;
          const double d = distance(gts[g]->pose.keypoints[j], preds[p]->pose.keypoints[j]);
          if (d <= dist_thresh) pairs.emplace_back(d, g, p);
        }
      }
      std::sort(pairs.begin(), pairs.end());
      for (const auto& [d, g, p] : pairs) {
        if (gt_to_pred[g] >= 0 || pred_used[p]) continue;
        gt_to_pred[g] = static_cast<int>(p);
        pred_used[p] = true;
      }

      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (gt_to_pred[g] < 0) {
          ++acc.fn;
          continue;
        }
        const int pred_id = preds[static_cast<std::size_t>(gt_to_pred[g])]->track_id;
        const auto [it, inserted] = last_match.try_emplace(gts[g]->track_id, pred_id);
        if (!inserted && it->second != pred_id) {
          ++acc.ids;
          it->second = pred_id;
        }
      }
      acc.fp += static_cast<std::size_t>(std::count(pred_used.begin(), pred_used.end(), false));
      acc.gt += gts.size();
    }
    if (acc.gt > 0) {
      acc.mota = 1.0 - static_cast<double>(acc.fn + acc.fp + acc.ids) / static_cast<double>(acc.gt);
    }
    out.gt += acc.gt;
    out.fp += acc.fp;
    out.fn += acc.fn;
    out.ids += acc.ids;
  }
  if (out.gt == 0) throw Error(ErrorCode::kUndefinedMetric, "no labeled ground-truth keypoints");
  out.mota = 1.0 - static_cast<double>(out.fn + out.fp + out.ids) / static_cast<double>(out.gt);
  return out;
}

}  // namespace ogn
