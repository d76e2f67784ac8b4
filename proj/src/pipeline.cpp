#include "bvssl/pipeline.hpp"

#include "bvssl/error.hpp"

namespace bvssl {

std::vector<PredictiveInterval> PipelineResult::predict(const MixedDataset& raw_rows) const {
  if (raw_rows.p() != design_data.p()) {
    throw Error(ErrorKind::validation, "prediction rows have " + std::to_string(raw_rows.p()) +
                                           " columns, expected " + std::to_string(design_data.p()));
  }
  const MixedDataset scaled = raw_rows.standardize_with(design_data.standardization());
  std::vector<PredictiveInterval> out;
  out.reserve(static_cast<std::size_t>(scaled.n()));
  for (Eigen::Index i = 0; i < scaled.n(); ++i) {
    out.push_back(predict_bma(posterior, scaled.values().row(i).transpose()));
  }
  return out;
}

PipelineResult run_pipeline(const MixedDataset& train, const Eigen::VectorXd& y,
                            const PriorGraph& prior, const PipelineConfig& config, Rng& rng) {
  PipelineResult result;
  result.design_data = train.standardized() ? train : train.standardize();
  result.graph = run_graph_mcmc(result.design_data, prior, config.shrinkage, config.graph, rng);
  result.cliques = maximal_cliques(result.graph.estimate.adjacency, config.clique_limits);
  result.posterior =
      run_vs_mcmc(result.design_data, y, result.cliques, config.vs, config.vs_mcmc, rng);
  return result;
}

PipelineResult run_structured_selection(const MixedDataset& train, const Eigen::VectorXd& y,
                                        const Eigen::MatrixXi& adjacency, const PipelineConfig& config,
                                        Rng& rng) {
  const Eigen::Index p = train.p();
  if (adjacency.rows() != p || adjacency.cols() != p) {
    throw Error(ErrorKind::validation, "graph has " + std::to_string(adjacency.rows()) + " nodes, data has " +
                                           std::to_string(p) + " columns");
  }
  PipelineResult result;
  result.design_data = train.standardized() ? train : train.standardize();
  result.graph.estimate.adjacency = adjacency;
  result.graph.estimate.rho_hat = Eigen::MatrixXd::Zero(p, p);
  result.graph.estimate.rho_ref = Eigen::MatrixXd::Zero(p, p);
  result.graph.estimate.signed_rho = Eigen::MatrixXd::Identity(p, p);
  result.cliques = maximal_cliques(adjacency, config.clique_limits);
  result.posterior =
      run_vs_mcmc(result.design_data, y, result.cliques, config.vs, config.vs_mcmc, rng);
  return result;
}

PipelineResult run_independent_selection(const MixedDataset& train, const Eigen::VectorXd& y,
                                         const PipelineConfig& config, Rng& rng) {
  return run_structured_selection(train, y, Eigen::MatrixXi::Zero(train.p(), train.p()), config, rng);
}

}  // namespace bvssl
