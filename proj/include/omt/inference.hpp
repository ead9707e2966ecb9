#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "omt/core.hpp"
#include "omt/quantizer.hpp"

namespace omt {

/// Gaussian-kernel similarity graph over the representatives plus the labeled
/// anchor (always the last vertex). Diagonal is zero; self-loops cancel in the
/// Laplacian and in the absorption semantics anyway.
struct SimilarityGraph {
  Eigen::MatrixXd weights;     ///< symmetric, zero diagonal
  Eigen::VectorXd degrees;     ///< row sums of weights
  std::size_t labeled_index;   ///< position of the anchor (== weights.rows()-1)

  std::size_t order() const { return static_cast<std::size_t>(weights.rows()); }
  Eigen::MatrixXd laplacian() const;  ///< D - W
};

/// Per-representative probability that a random walk started there is absorbed
/// at the labeled anchor rather than at the sink.
struct AbsorptionScores {
  Eigen::VectorXd f;  ///< entries in [0, 1], ordered like the representatives
};

/// Per-step classification outcome.
struct Prediction {
  bool gated = false;                        ///< within R of the anchor
  std::optional<std::size_t> nearest_index;  ///< closest representative, if any
  std::optional<double> score;               ///< absorption score f_j
  int identity = 0;                          ///< 1 iff recognized as the target
};

/// Build the similarity graph over cover + anchor. Throws UsageError on an
/// empty cover or sigma <= 0.
SimilarityGraph build_graph(const CoverState& state, const FeatureVector& anchor, double sigma);

/// Solve (L_uu + gamma I) f = W_ul by dense Cholesky. The sink vertex with
/// edge weight gamma to every unlabeled node appears only as the gamma I
/// regularizer, exactly as in the closed form. gamma == 0 requires a graph
/// whose unlabeled part is connected to the anchor; a singular system raises
/// NumericalError rather than being patched silently.
AbsorptionScores harmonic_with_sink(const SimilarityGraph& graph, double gamma);

/// Full gated decision for one point against a fixed cover: outside the gate
/// the identity is 0; inside, the nearest representative's absorption score is
/// compared against the recognition threshold (strict >). An empty cover falls
/// back to treating x itself as the sole unlabeled vertex, f = w/(w + gamma).
Prediction infer_identity(const CoverState& state, const FeatureVector& x, const OmtConfig& cfg);

}  // namespace omt
