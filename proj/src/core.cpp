#include "omt/core.hpp"

#include <cmath>
#include <string>

namespace omt {

double OmtConfig::default_sink_gamma() {
  static const double gamma = std::exp(-4.5);
  return gamma;
}

void OmtConfig::validate() const {
  if (labeled_anchor.size() < 1) throw UsageError("config: labeled anchor is required (dim >= 1)");
  if (!all_finite(labeled_anchor)) throw UsageError("config: labeled anchor has non-finite entries");
  if (!(generalization_radius > 0.0)) throw UsageError("config: generalization radius R must be > 0");
  if (max_representatives < 1) throw UsageError("config: representative budget k must be >= 1");
  if (!(initial_cover_radius > 0.0)) throw UsageError("config: initial cover radius r0 must be > 0");
  if (!(heat_sigma > 0.0)) throw UsageError("config: heat parameter sigma must be > 0");
  if (!(sink_gamma >= 0.0)) throw UsageError("config: sink weight gamma must be >= 0");
  if (!(recognition_threshold >= 0.0 && recognition_threshold <= 1.0))
    throw UsageError("config: recognition threshold epsilon must be in [0, 1]");
}

double distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size())
    throw UsageError("distance: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  return (a - b).norm();
}

double similarity_from_distance(double d, double sigma) {
  if (!(sigma > 0.0)) throw UsageError("similarity: sigma must be > 0");
  return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

double similarity(const FeatureVector& a, const FeatureVector& b, double sigma) {
  return similarity_from_distance(distance(a, b), sigma);
}

bool all_finite(const FeatureVector& v) { return v.allFinite(); }

NormalizedDataset normalize_dataset(std::vector<FeatureVector> vectors) {
  if (vectors.empty()) throw DataError("normalize: empty dataset");
  double max_norm = 0.0;
  for (const auto& v : vectors) max_norm = std::max(max_norm, v.norm());
  if (!(max_norm > 0.0)) throw DataError("normalize: all vectors are zero, scale undefined");

  // Within rounding noise of an already normalized set: keep the data
  // bit-exact and report scale 1 so repeated application is a no-op.
  if (std::abs(max_norm - 1.0) <= 1e-12) return {std::move(vectors), 1.0};

  const double scale = 1.0 / max_norm;
  for (auto& v : vectors) v *= scale;
  return {std::move(vectors), scale};
}

}  // namespace omt
