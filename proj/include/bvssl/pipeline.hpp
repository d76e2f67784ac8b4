#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bvssl/cliques.hpp"
#include "bvssl/graph_learner.hpp"
#include "bvssl/mixed_latent.hpp"
#include "bvssl/random.hpp"
#include "bvssl/structured_vs.hpp"

namespace bvssl {

struct PipelineConfig {
  ShrinkageHypers shrinkage;
  GraphMcmcConfig graph;
  VSHypers vs;
  VSMcmcConfig vs_mcmc;
  CliqueLimits clique_limits;
};

struct PipelineResult {
  /// Training covariates after standardization of the continuous columns.
  MixedDataset design_data;
  GraphRunResult graph;
  CliqueSet cliques;
  PosteriorSummary posterior;

  /// Maps raw rows (same column layout as training) onto the design scale
  /// and returns the model-averaged predictions.
  std::vector<PredictiveInterval> predict(const MixedDataset& raw_rows) const;
};

/// Structure learning on the covariates followed by clique-structured
/// selection of the response. The graph and selection chains draw from `rng`
/// in that order.
PipelineResult run_pipeline(const MixedDataset& train, const Eigen::VectorXd& y,
                            const PriorGraph& prior, const PipelineConfig& config, Rng& rng);

/// Selection only, with the cliques of a given graph.
PipelineResult run_structured_selection(const MixedDataset& train, const Eigen::VectorXd& y,
                                        const Eigen::MatrixXi& adjacency, const PipelineConfig& config,
                                        Rng& rng);

/// Selection only, with every variable its own clique (plain SSVS).
PipelineResult run_independent_selection(const MixedDataset& train, const Eigen::VectorXd& y,
                                         const PipelineConfig& config, Rng& rng);

}  // namespace bvssl
