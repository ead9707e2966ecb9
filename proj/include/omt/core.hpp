#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "omt/errors.hpp"

namespace omt {

/// A point of the stream: a fixed-dimension real feature vector.
using FeatureVector = Eigen::VectorXd;

/// Full parameter set of the streaming recognizer. Field names follow the
/// usual symbols: R, k, r0, sigma, gamma, epsilon.
struct OmtConfig {
  double generalization_radius = 0.3;  ///< R: gate radius around the anchor
  int max_representatives = 300;       ///< k: representative budget
  double initial_cover_radius = 0.05;  ///< r0: starting cover radius
  double heat_sigma = 0.03;            ///< sigma: similarity kernel bandwidth
  double sink_gamma = default_sink_gamma();  ///< gamma: edge weight to the sink
  double recognition_threshold = 0.5;  ///< epsilon: absorption-score cutoff
  FeatureVector labeled_anchor;        ///< x_l: the single labeled example

  /// exp(-3^2/2): a transition over a 3-sigma edge is a coin flip against the sink.
  static double default_sink_gamma();

  /// Throws UsageError on any out-of-range field or missing anchor.
  void validate() const;
};

/// Euclidean distance. Throws UsageError on dimension mismatch.
double distance(const FeatureVector& a, const FeatureVector& b);

/// Gaussian similarity w = exp(-d^2 / (2 sigma^2)) for a known distance.
double similarity_from_distance(double d, double sigma);

/// Gaussian similarity of two vectors. Throws UsageError if sigma <= 0 or dims differ.
double similarity(const FeatureVector& a, const FeatureVector& b, double sigma);

/// Dataset rescaled so the largest vector norm is 1, plus the applied factor.
struct NormalizedDataset {
  std::vector<FeatureVector> vectors;
  double scale = 1.0;  ///< multiplier that was applied (1 / max norm)
};

/// Rescale a finite dataset so that max ||x||_2 == 1. Data already normalized
/// within ~1e-12 of 1 is returned untouched with scale exactly 1, which makes
/// the operation idempotent. Throws DataError when every vector is zero.
NormalizedDataset normalize_dataset(std::vector<FeatureVector> vectors);

/// True when every entry is finite.
bool all_finite(const FeatureVector& v);

}  // namespace omt
