#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "omt/core.hpp"

namespace omt {

/// A retained stream vector. stream_index is the step t at which it was kept.
struct Representative {
  std::uint64_t stream_index = 0;
  FeatureVector vector;
};

/// The bounded cover of everything gated so far: at most k representatives,
/// pairwise more than cover_radius apart.
struct CoverState {
  std::vector<Representative> representatives;
  double cover_radius = 0.0;  ///< r == r0 * 2^doubling_count
  int doubling_count = 0;

  bool empty() const { return representatives.empty(); }
  std::size_t size() const { return representatives.size(); }
};

/// Fresh cover with cover_radius = cfg.initial_cover_radius.
CoverState initial_cover(const OmtConfig& cfg);

/// One online k-center step. Points outside the gate (farther than R from the
/// anchor) leave the state untouched. A gated point more than r away from
/// every representative is kept; whenever the budget k is exceeded, r doubles
/// and the representatives are greedily thinned until at most k remain.
CoverState quantize_step(CoverState state, const FeatureVector& x, const OmtConfig& cfg,
                         std::uint64_t stream_index);

/// Scan reps in insertion order, keeping each one farther than r from all kept
/// so far. Every input rep ends up within r of some kept rep, and kept reps
/// are pairwise more than r apart.
std::vector<Representative> greedy_repartition(const std::vector<Representative>& reps, double r);

/// Index and distance of the closest representative; ties go to the earliest
/// inserted. Throws UsageError on an empty cover.
std::pair<std::size_t, double> nearest_representative(const CoverState& state,
                                                      const FeatureVector& x);

/// Debug dump, one row per representative: stream_index,v0,v1,...
void dump_cover_csv(const CoverState& state, std::ostream& out);

}  // namespace omt
