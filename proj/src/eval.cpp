#include "omt/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "omt/io_util.hpp"

namespace omt {

std::pair<double, double> confusion(const std::vector<int>& predictions,
                                    const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    throw UsageError("confusion: predictions and labels differ in length");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1)
      predictions[i] == 1 ? ++tp : ++fn;
    else
      predictions[i] == 1 ? ++fp : ++tn;
  }
  if (tp + fn == 0) throw UsageError("confusion: no positive labels, TPR undefined");
  if (fp + tn == 0) throw UsageError("confusion: no negative labels, FPR undefined");
  return {static_cast<double>(tp) / static_cast<double>(tp + fn),
          static_cast<double>(fp) / static_cast<double>(fp + tn)};
}

std::vector<ScoredFrame> replay_omt(const Stream& stream, const OmtConfig& cfg) {
  OmtConfig run_cfg = cfg;
  run_cfg.labeled_anchor = stream.anchor;
  OmtRecognizer rec(run_cfg);
  std::vector<ScoredFrame> frames;
  frames.reserve(stream.records.size());
  for (const auto& record : stream.records) {
    Prediction pred = rec.process_step(record.vector);
    frames.push_back({pred.gated, pred.score.value_or(0.0), record.true_label});
  }
  return frames;
}

namespace {

struct SortedScores {
  std::vector<double> scores;      // ascending
  std::vector<std::size_t> pos_prefix;  // positives among scores[0..i)
  std::size_t total_pos = 0;
  std::size_t total_neg = 0;
};

SortedScores sort_scores(const std::vector<ScoredFrame>& frames, bool gated_only) {
  SortedScores out;
  std::vector<std::pair<double, int>> scored;
  scored.reserve(frames.size());
  for (const auto& f : frames) {
    if (f.label == 1)
      ++out.total_pos;
    else
      ++out.total_neg;
    if (!gated_only || f.gated) scored.emplace_back(f.score, f.label);
  }
  if (out.total_pos == 0) throw UsageError("roc: stream has no positive labels");
  if (out.total_neg == 0) throw UsageError("roc: stream has no negative labels");
  std::sort(scored.begin(), scored.end());
  out.scores.reserve(scored.size());
  out.pos_prefix.reserve(scored.size() + 1);
  out.pos_prefix.push_back(0);
  for (const auto& [score, label] : scored) {
    out.scores.push_back(score);
    out.pos_prefix.push_back(out.pos_prefix.back() + (label == 1 ? 1 : 0));
  }
  return out;
}

RocCurve finish_curve(std::vector<RocPoint> points) {
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  RocCurve curve;
  curve.auc = trapezoid_auc(points);
  curve.points = std::move(points);
  return curve;
}

}  // namespace

RocCurve roc_from_scores(const std::vector<ScoredFrame>& frames,
                         const std::vector<double>& thresholds) {
  SortedScores sorted = sort_scores(frames, /*gated_only=*/true);
  std::set<double> grid(thresholds.begin(), thresholds.end());
  grid.insert(sorted.scores.begin(), sorted.scores.end());

  std::vector<RocPoint> points;
  points.reserve(grid.size());
  for (double tau : grid) {
    // predicted positive: gated and score > tau
    auto first_above = std::upper_bound(sorted.scores.begin(), sorted.scores.end(), tau) -
                       sorted.scores.begin();
    auto fired = sorted.scores.size() - static_cast<std::size_t>(first_above);
    auto tp = sorted.pos_prefix.back() - sorted.pos_prefix[static_cast<std::size_t>(first_above)];
    auto fp = fired - tp;
    points.push_back({tau, static_cast<double>(tp) / static_cast<double>(sorted.total_pos),
                      static_cast<double>(fp) / static_cast<double>(sorted.total_neg)});
  }
  return finish_curve(std::move(points));
}

RocCurve roc_from_distances(const std::vector<ScoredFrame>& frames,
                            const std::vector<double>& radii) {
  SortedScores sorted = sort_scores(frames, /*gated_only=*/false);
  std::set<double> grid(radii.begin(), radii.end());
  grid.insert(sorted.scores.begin(), sorted.scores.end());

  std::vector<RocPoint> points;
  points.reserve(grid.size());
  for (double tau : grid) {
    // predicted positive: score <= tau
    auto fired_end = std::upper_bound(sorted.scores.begin(), sorted.scores.end(), tau) -
                     sorted.scores.begin();
    auto tp = sorted.pos_prefix[static_cast<std::size_t>(fired_end)];
    auto fp = static_cast<std::size_t>(fired_end) - tp;
    points.push_back({tau, static_cast<double>(tp) / static_cast<double>(sorted.total_pos),
                      static_cast<double>(fp) / static_cast<double>(sorted.total_neg)});
  }
  return finish_curve(std::move(points));
}

RocCurve roc_sweep_omt(const Stream& stream, const OmtConfig& cfg,
                       const std::vector<double>& epsilons) {
  return roc_from_scores(replay_omt(stream, cfg), epsilons);
}

RocCurve roc_sweep_nn(const Stream& stream, const std::vector<FeatureVector>& anchors,
                      const std::vector<double>& radii) {
  NnRecognizer nn(anchors, 0.0);
  std::vector<ScoredFrame> frames;
  frames.reserve(stream.records.size());
  for (const auto& record : stream.records)
    frames.push_back({true, nn.score(record.vector), record.true_label});
  return roc_from_distances(frames, radii);
}

double trapezoid_auc(std::vector<RocPoint> points) {
  points.push_back({0.0, 0.0, 0.0});
  points.push_back({0.0, 1.0, 1.0});
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  double auc = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    auc += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  return auc;
}

double tpr_at_fpr(const RocCurve& curve, double fpr) {
  std::vector<RocPoint> pts = curve.points;
  pts.push_back({0.0, 0.0, 0.0});
  pts.push_back({0.0, 1.0, 1.0});
  std::sort(pts.begin(), pts.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  if (fpr <= pts.front().fpr) return pts.front().tpr;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].fpr >= fpr) {
      // take the best tpr among points sharing the bracketing fpr values
      double lo_fpr = pts[i - 1].fpr;
      double lo = pts[i - 1].tpr;
      for (std::size_t j = i; j-- > 0 && pts[j].fpr == lo_fpr;) lo = std::max(lo, pts[j].tpr);
      if (pts[i].fpr == lo_fpr) continue;
      double hi = pts[i].tpr;
      if (pts[i].fpr == fpr) {
        for (std::size_t j = i; j < pts.size() && pts[j].fpr == fpr; ++j)
          hi = std::max(hi, pts[j].tpr);
        return hi;
      }
      double w = (fpr - lo_fpr) / (pts[i].fpr - lo_fpr);
      return lo + w * (hi - lo);
    }
  }
  return 1.0;
}

OperatingPoints operating_points(const RocCurve& curve) {
  OperatingPoints out;
  out.tpr_at_fpr_001 = tpr_at_fpr(curve, 0.01);
  bool found = false;
  for (const auto& p : curve.points) {
    if (p.fpr > 0.0 && (!found || p.fpr < out.smallest_nonzero_fpr)) {
      out.smallest_nonzero_fpr = p.fpr;
      found = true;
    }
  }
  if (!found) {
    out.smallest_nonzero_fpr = 1.0;
    out.tpr_at_smallest_nonzero_fpr = 1.0;
    return out;
  }
  for (const auto& p : curve.points)
    if (p.fpr == out.smallest_nonzero_fpr)
      out.tpr_at_smallest_nonzero_fpr = std::max(out.tpr_at_smallest_nonzero_fpr, p.tpr);
  return out;
}

double cover_error(const std::vector<FeatureVector>& gated_history, const CoverState& state) {
  if (gated_history.empty()) return 0.0;
  if (state.empty()) throw UsageError("cover_error: nonempty history against an empty cover");
  double d_max = 0.0;
  for (const auto& point : gated_history) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& rep : state.representatives)
      best = std::min(best, distance(point, rep.vector));
    d_max = std::max(d_max, best);
  }
  return d_max;
}

double CoverErrorTracker::observe(const FeatureVector& gated_point, const CoverState& after) {
  history_.push_back(gated_point);
  if (after.doubling_count != doublings_seen_) {
    doublings_seen_ = after.doubling_count;
    min_dist_.resize(history_.size());
    recompute(after);
    return d_max_;
  }
  if (after.size() > reps_seen_) {
    // exactly one representative was appended; mins can only shrink
    const FeatureVector& new_rep = after.representatives.back().vector;
    d_max_ = 0.0;
    for (std::size_t i = 0; i < min_dist_.size(); ++i) {
      min_dist_[i] = std::min(min_dist_[i], distance(history_[i], new_rep));
      d_max_ = std::max(d_max_, min_dist_[i]);
    }
    reps_seen_ = after.size();
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rep : after.representatives)
    best = std::min(best, distance(gated_point, rep.vector));
  min_dist_.push_back(best);
  d_max_ = std::max(d_max_, best);
  return d_max_;
}

void CoverErrorTracker::recompute(const CoverState& state) {
  reps_seen_ = state.size();
  d_max_ = 0.0;
  for (std::size_t i = 0; i < history_.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& rep : state.representatives)
      best = std::min(best, distance(history_[i], rep.vector));
    min_dist_[i] = best;
    d_max_ = std::max(d_max_, best);
  }
}

TimingReport bench_step_time(const Stream& stream, const OmtConfig& cfg) {
  using clock = std::chrono::steady_clock;
  OmtConfig run_cfg = cfg;
  run_cfg.labeled_anchor = stream.anchor;
  OmtRecognizer rec(run_cfg);

  TimingReport report;
  report.steps.reserve(stream.records.size());
  for (const auto& record : stream.records) {
    auto start = clock::now();
    rec.process_step(record.vector);
    auto stop = clock::now();
    double micros =
        static_cast<double>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()) /
        1000.0;
    report.steps.push_back({static_cast<std::uint64_t>(record.t), micros, rec.cover().size(),
                            rec.cover().cover_radius});
  }

  const std::size_t n = report.steps.size();
  if (n >= 4000) {
    auto mean = [&](std::size_t begin, std::size_t end) {
      double sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) sum += report.steps[i].micros;
      return sum / static_cast<double>(end - begin);
    };
    TimingSummary summary;
    summary.early_mean_micros = mean(1000, 3000);
    summary.late_mean_micros = mean(n - n / 10, n);
    summary.ratio = summary.late_mean_micros / summary.early_mean_micros;
    report.summary = summary;
  }
  return report;
}

void write_roc_csv(const RocCurve& curve, std::ostream& out) {
  out << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points)
    out << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
        << format_double(p.tpr) << '\n';
}

void write_timings_jsonl(const TimingReport& report, std::ostream& out) {
  for (const auto& step : report.steps) {
    nlohmann::ordered_json obj;
    obj["t"] = step.t;
    obj["micros"] = step.micros;
    obj["cover_size"] = step.cover_size;
    obj["r"] = step.cover_radius;
    out << obj.dump() << '\n';
  }
}

}  // namespace omt
