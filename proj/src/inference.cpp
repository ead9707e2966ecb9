#include "omt/inference.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

namespace omt {

Eigen::MatrixXd SimilarityGraph::laplacian() const {
  Eigen::MatrixXd l = -weights;
  l.diagonal() += degrees;
  return l;
}

SimilarityGraph build_graph(const CoverState& state, const FeatureVector& anchor, double sigma) {
  if (state.empty()) throw UsageError("build_graph: empty cover");
  if (!(sigma > 0.0)) throw UsageError("build_graph: sigma must be > 0");

  const std::size_t m = state.size();
  const std::size_t n = m + 1;
  SimilarityGraph graph;
  graph.labeled_index = m;
  graph.weights = Eigen::MatrixXd::Zero(n, n);

  auto vertex = [&](std::size_t i) -> const FeatureVector& {
    return i < m ? state.representatives[i].vector : anchor;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double w = similarity(vertex(i), vertex(j), sigma);
      graph.weights(i, j) = w;
      graph.weights(j, i) = w;
    }
  }
  graph.degrees = graph.weights.rowwise().sum();
  return graph;
}

AbsorptionScores harmonic_with_sink(const SimilarityGraph& graph, double gamma) {
  if (!(gamma >= 0.0)) throw UsageError("harmonic_with_sink: gamma must be >= 0");
  const auto n = static_cast<std::size_t>(graph.weights.rows());
  if (n < 2 || graph.labeled_index != n - 1)
    throw UsageError("harmonic_with_sink: malformed graph");
  const auto m = static_cast<Eigen::Index>(n - 1);

  // (L_uu + gamma I) f = W_ul
  Eigen::MatrixXd system = -graph.weights.topLeftCorner(m, m);
  system.diagonal() += graph.degrees.head(m);
  system.diagonal().array() += gamma;
  Eigen::VectorXd rhs = graph.weights.col(m).head(m);

  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success)
    throw NumericalError("harmonic_with_sink: system is not positive definite "
                         "(disconnected graph with gamma == 0?)");
  Eigen::VectorXd f = llt.solve(rhs);

  constexpr double kSlack = 1e-9;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i]) || f[i] < -kSlack || f[i] > 1.0 + kSlack)
      throw NumericalError("harmonic_with_sink: absorption probability out of range at index " +
                           std::to_string(i));
    f[i] = std::min(1.0, std::max(0.0, f[i]));
  }
  return {std::move(f)};
}

Prediction infer_identity(const CoverState& state, const FeatureVector& x, const OmtConfig& cfg) {
  if (x.size() != cfg.labeled_anchor.size())
    throw UsageError("infer_identity: point dimension does not match the anchor");

  Prediction pred;
  if (distance(x, cfg.labeled_anchor) > cfg.generalization_radius) return pred;
  pred.gated = true;

  double score = 0.0;
  if (state.empty()) {
    // No cover yet: the query itself is the single unlabeled vertex.
    double w = similarity(x, cfg.labeled_anchor, cfg.heat_sigma);
    if (w + cfg.sink_gamma <= 0.0)
      throw NumericalError("infer_identity: zero similarity and zero gamma, score undefined");
    score = w / (w + cfg.sink_gamma);
  } else {
    SimilarityGraph graph = build_graph(state, cfg.labeled_anchor, cfg.heat_sigma);
    AbsorptionScores scores = harmonic_with_sink(graph, cfg.sink_gamma);
    auto [j, dist] = nearest_representative(state, x);
    (void)dist;
    pred.nearest_index = j;
    score = scores.f[static_cast<Eigen::Index>(j)];
  }
  pred.score = score;
  pred.identity = score > cfg.recognition_threshold ? 1 : 0;
  return pred;
}

}  // namespace omt
