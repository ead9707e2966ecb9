#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "omt/core.hpp"
#include "omt/quantizer.hpp"
#include "omt/recognizer.hpp"
#include "omt/streams.hpp"

namespace omt {

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

/// Empirical ROC curve, points sorted by fpr (then tpr). auc is the trapezoid
/// area after closing the curve with (0,0) and (1,1).
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// (tpr, fpr). Throws UsageError on length mismatch or when either class is
/// absent (the rate would be undefined).
std::pair<double, double> confusion(const std::vector<int>& predictions,
                                    const std::vector<int>& labels);

/// One replayed frame: whether it passed the gate, the absorption score of its
/// nearest representative (0 when ungated), and the evaluation label.
struct ScoredFrame {
  bool gated = false;
  double score = 0.0;
  int label = 0;
};

/// Replay a stream through a fresh recognizer, collecting per-frame scores.
/// The score sequence does not depend on the recognition threshold.
std::vector<ScoredFrame> replay_omt(const Stream& stream, const OmtConfig& cfg);

/// ROC points for the rule "gated and score > threshold" over the union of the
/// supplied thresholds and all distinct gated scores (exact empirical curve).
RocCurve roc_from_scores(const std::vector<ScoredFrame>& frames,
                         const std::vector<double>& thresholds);

/// ROC points for the rule "score <= radius" (distance-like scores).
RocCurve roc_from_distances(const std::vector<ScoredFrame>& frames,
                            const std::vector<double>& radii);

/// Stream replay + threshold sweep over epsilon.
RocCurve roc_sweep_omt(const Stream& stream, const OmtConfig& cfg,
                       const std::vector<double>& epsilons);

/// Nearest-anchor-distance sweep over the generalization radius.
RocCurve roc_sweep_nn(const Stream& stream, const std::vector<FeatureVector>& anchors,
                      const std::vector<double>& radii);

/// Trapezoid AUC of points closed with (0,0) and (1,1).
double trapezoid_auc(std::vector<RocPoint> points);

/// TPR at a given FPR, linearly interpolated between curve steps.
double tpr_at_fpr(const RocCurve& curve, double fpr);

/// Operating points reported by the desk-scale harness: the exact paper-style
/// point at 1e-4 FPR needs ~10^4 negatives, so the smallest achievable nonzero
/// FPR is reported instead, alongside TPR at FPR = 0.01.
struct OperatingPoints {
  double smallest_nonzero_fpr = 1.0;
  double tpr_at_smallest_nonzero_fpr = 0.0;
  double tpr_at_fpr_001 = 0.0;
};
OperatingPoints operating_points(const RocCurve& curve);

/// Exact cover error: max over gated history of the distance to the nearest
/// representative. Empty history gives 0; a nonempty history against an empty
/// cover is an error.
double cover_error(const std::vector<FeatureVector>& gated_history, const CoverState& state);

// Incrementally maintained cover error for long diagnostic runs. Equals
// cover_error(history, state) after every observation but costs O(|u|) per
// step plus O(history) per insertion or repartition instead of
// O(history * |u|) per step.
class CoverErrorTracker {
 public:
  /// Record a gated point together with the cover state right after its
  /// quantize step, and return the current error.
  double observe(const FeatureVector& gated_point, const CoverState& after);

  double current() const { return d_max_; }
  const std::vector<FeatureVector>& history() const { return history_; }

 private:
  void recompute(const CoverState& state);

  std::vector<FeatureVector> history_;
  std::vector<double> min_dist_;
  std::size_t reps_seen_ = 0;
  int doublings_seen_ = 0;
  double d_max_ = 0.0;
};

struct StepTiming {
  std::uint64_t t = 0;
  double micros = 0.0;
  std::size_t cover_size = 0;
  double cover_radius = 0.0;
};

struct TimingSummary {
  double early_mean_micros = 0.0;  ///< steps [1000, 3000)
  double late_mean_micros = 0.0;   ///< last decile
  double ratio = 0.0;
};

struct TimingReport {
  std::vector<StepTiming> steps;
  std::optional<TimingSummary> summary;  ///< present when the stream has >= 4000 frames
};

/// Replay a stream, timing every recognizer step.
TimingReport bench_step_time(const Stream& stream, const OmtConfig& cfg);

/// threshold,fpr,tpr rows.
void write_roc_csv(const RocCurve& curve, std::ostream& out);

/// One {"t":..,"micros":..,"cover_size":..,"r":..} object per step.
void write_timings_jsonl(const TimingReport& report, std::ostream& out);

}  // namespace omt
