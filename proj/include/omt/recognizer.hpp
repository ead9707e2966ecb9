#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "omt/core.hpp"
#include "omt/inference.hpp"
#include "omt/quantizer.hpp"

namespace omt {

// Streaming recognizer: each step quantizes the observation into the cover and
// then infers its identity against the updated cover, so a point can be its
// own nearest representative. Single writer; snapshots make runs restartable.
class OmtRecognizer {
 public:
  explicit OmtRecognizer(OmtConfig cfg);

  Prediction process_step(const FeatureVector& x);

  const OmtConfig& config() const { return cfg_; }
  const CoverState& cover() const { return cover_; }
  std::uint64_t step_count() const { return step_count_; }

  /// Versioned plain-text bundle: config + anchor + cover + step counter.
  void save_snapshot(std::ostream& out) const;
  static OmtRecognizer load_snapshot(std::istream& in);

 private:
  OmtRecognizer(OmtConfig cfg, CoverState cover, std::uint64_t step_count);

  OmtConfig cfg_;
  CoverState cover_;
  std::uint64_t step_count_ = 0;
};

// Radius-gated nearest-neighbor baseline over one or more labeled anchors.
// Stateless across steps.
class NnRecognizer {
 public:
  NnRecognizer(std::vector<FeatureVector> anchors, double radius);

  /// Minimum distance to any anchor.
  double score(const FeatureVector& x) const;

  /// 1 iff score(x) <= radius (inclusive boundary).
  int classify(const FeatureVector& x) const;

  const std::vector<FeatureVector>& anchors() const { return anchors_; }
  double radius() const { return radius_; }

 private:
  std::vector<FeatureVector> anchors_;
  double radius_;
};

}  // namespace omt
