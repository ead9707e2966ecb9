#include "omt/quantizer.hpp"

#include <limits>
#include <string>

#include "omt/io_util.hpp"

namespace omt {

CoverState initial_cover(const OmtConfig& cfg) {
  cfg.validate();
  CoverState state;
  state.cover_radius = cfg.initial_cover_radius;
  return state;
}

CoverState quantize_step(CoverState state, const FeatureVector& x, const OmtConfig& cfg,
                         std::uint64_t stream_index) {
  if (x.size() != cfg.labeled_anchor.size())
    throw UsageError("quantize_step: point dimension does not match the anchor");
  if (!(state.cover_radius > 0.0))
    throw UsageError("quantize_step: cover state not initialized (use initial_cover)");

  if (distance(x, cfg.labeled_anchor) > cfg.generalization_radius) return state;

  bool separated = true;
  for (const auto& rep : state.representatives) {
    if (distance(x, rep.vector) <= state.cover_radius) {
      separated = false;
      break;
    }
  }
  if (separated) state.representatives.push_back({stream_index, x});

  const auto budget = static_cast<std::size_t>(cfg.max_representatives);
  while (state.representatives.size() == budget + 1) {
    state.cover_radius *= 2.0;
    ++state.doubling_count;
    state.representatives = greedy_repartition(state.representatives, state.cover_radius);
  }
  return state;
}

std::vector<Representative> greedy_repartition(const std::vector<Representative>& reps, double r) {
  std::vector<Representative> kept;
  kept.reserve(reps.size());
  for (const auto& rep : reps) {
    bool separated = true;
    for (const auto& k : kept) {
      if (distance(rep.vector, k.vector) <= r) {
        separated = false;
        break;
      }
    }
    if (separated) kept.push_back(rep);
  }
  return kept;
}

std::pair<std::size_t, double> nearest_representative(const CoverState& state,
                                                      const FeatureVector& x) {
  if (state.empty()) throw UsageError("nearest_representative: empty cover");
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.representatives.size(); ++i) {
    double d = distance(x, state.representatives[i].vector);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return {best, best_dist};
}

void dump_cover_csv(const CoverState& state, std::ostream& out) {
  for (const auto& rep : state.representatives) {
    out << rep.stream_index;
    for (Eigen::Index i = 0; i < rep.vector.size(); ++i) out << ',' << format_double(rep.vector[i]);
    out << '\n';
  }
}

}  // namespace omt
