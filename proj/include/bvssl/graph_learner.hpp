#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bvssl/mixed_latent.hpp"
#include "bvssl/random.hpp"

namespace bvssl {

/// Gamma/Beta hyperparameters of the edge-shrinkage hierarchy.
struct ShrinkageHypers {
  double a_lambda = 1.0;
  double b_lambda = 0.1;
  double a_p = 1.0;
  double b_p = 1.0;
  /// Fixed rate lambda_ii of the exponential prior on diagonal precisions.
  double lambda_diag = 1.0;

  void validate() const;
};

/// Prior graph G0: binary adjacency plus per-edge belief kappa.
struct PriorGraph {
  Eigen::MatrixXi a0;
  Eigen::MatrixXd kappa;

  Eigen::Index p() const { return a0.rows(); }
  /// p nodes, no prior edges, zero belief everywhere (no prior knowledge).
  static PriorGraph empty(Eigen::Index p);
  /// Every edge of `adjacency` gets `edge_kappa`; non-edges get `absence_kappa`.
  static PriorGraph from_adjacency(const Eigen::MatrixXi& adjacency, double edge_kappa,
                                   double absence_kappa = 0.0);
  /// Symmetry, zero diagonal and positivity of every induced Beta/Gamma shape.
  void validate(const ShrinkageHypers& hypers) const;
};

/// Full state of the graph sampler. Symmetric matrices; only i != j entries
/// of tau, p_edge and delta are meaningful, lambda's diagonal holds lambda_ii.
struct GraphChainState {
  Eigen::MatrixXd omega;
  /// omega^{-1}, maintained alongside omega by the column updates.
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd tau;
  Eigen::MatrixXd lambda;
  Eigen::MatrixXd p_edge;
  Eigen::MatrixXi delta;

  /// Identity precision, unit tau, lambda at its prior mean, p at E(p_ij).
  static GraphChainState initial(const PriorGraph& prior, const ShrinkageHypers& hypers);
};

struct GraphEstimate {
  /// Posterior mean |rho_ij| (zero diagonal).
  Eigen::MatrixXd rho_hat;
  /// Reference-posterior mean |rho_ij| (zero diagonal).
  Eigen::MatrixXd rho_ref;
  Eigen::MatrixXi adjacency;
  /// Posterior mean signed partial correlation (unit diagonal).
  Eigen::MatrixXd signed_rho;
};

/// Belief kappa giving prior edge probability E(p_ij) = confidence.
double calibrate_belief(double confidence, int a0_edge, double a_p, double b_p);
/// Forward map: E(p_ij) = (a0 kappa + a_p) / (kappa + a_p + b_p).
double expected_edge_probability(double kappa, int a0_edge, double a_p, double b_p);

/// rho_ij = -omega_ij / sqrt(omega_ii omega_jj), unit diagonal.
Eigen::MatrixXd partial_correlation(const Eigen::MatrixXd& omega);

/// Off-diagonal tau: 1/tau_ij ~ InvGauss(lambda_ij / |omega_ij|, lambda_ij^2).
Eigen::MatrixXd sample_tau(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& lambda, Rng& rng);

/// Column-partitioned block update of omega (and sigma) for column `col`.
GraphChainState sample_omega_column(const Eigen::MatrixXd& scatter, GraphChainState state,
                                    Eigen::Index col, double n, Rng& rng);

/// lambda_ij | omega, delta ~ Gamma(1 + a_lambda + (1 - delta) kappa, |omega_ij| + b_lambda).
GraphChainState sample_lambda(GraphChainState state, const PriorGraph& prior,
                              const ShrinkageHypers& hypers, Rng& rng);
/// Plain graphical-lasso rate update with no belief mixture (no prior graph).
GraphChainState sample_lambda_no_prior(GraphChainState state, const ShrinkageHypers& hypers,
                                       Rng& rng);

/// delta_ij | lambda, p ~ Bernoulli, then p_ij | delta ~ Beta.
GraphChainState sample_delta_p(GraphChainState state, const PriorGraph& prior,
                               const ShrinkageHypers& hypers, Rng& rng);
/// Bernoulli weight P(delta_ij = 1 | lambda_ij, p_ij) computed in log space.
double delta_inclusion_weight(double lambda, double p_edge, double kappa,
                              const ShrinkageHypers& hypers);

/// Draw from Wishart(df, scale) via the Bartlett decomposition.
Eigen::MatrixXd sample_wishart(double df, const Eigen::MatrixXd& scale, Rng& rng);

/// Monte-Carlo E|rho_ij| under the Wishart(3 + n, (I + S)^{-1}) reference
/// posterior. Zero diagonal.
Eigen::MatrixXd reference_partial_corr(const Eigen::MatrixXd& scatter, double n, int n_mc,
                                       Rng& rng);

/// Edge iff |rho_hat| / max(rho_ref, 1e-8) > 0.5.
Eigen::MatrixXi estimate_graph(const Eigen::MatrixXd& rho_hat, const Eigen::MatrixXd& rho_ref);

struct GraphMcmcConfig {
  int iterations = 10000;
  int burn_in = 3000;
  int n_mc = 5000;
  /// false runs the plain Bayesian graphical lasso (no delta/p layer).
  bool use_belief_prior = true;
  /// Throw on the first latent/precision invariant violation.
  bool check_invariants = false;
  /// Called after every full sweep (1-based iteration index).
  std::function<void(int, const GraphChainState&, const LatentState&)> observer;

  void validate() const;
};

struct GraphChainSummary {
  Eigen::MatrixXd p_edge_mean;
  Eigen::MatrixXd delta_mean;
  Eigen::MatrixXd omega_mean;
  /// Posterior mean of the latent matrix (continuous columns are the data).
  Eigen::MatrixXd z_mean;
  int retained = 0;
};

struct GraphRunResult {
  GraphEstimate estimate;
  GraphChainSummary summary;
};

/// Full graph sampler: latent draws, cutpoints, tau, omega columns, lambda,
/// delta/p per sweep; thresholded against the reference posterior at the end.
GraphRunResult run_graph_mcmc(const MixedDataset& data, const PriorGraph& prior,
                              const ShrinkageHypers& hypers, const GraphMcmcConfig& config,
                              Rng& rng);

/// Succeeds iff `m` admits a Cholesky factorization.
bool is_positive_definite(const Eigen::MatrixXd& m);

}  // namespace bvssl
