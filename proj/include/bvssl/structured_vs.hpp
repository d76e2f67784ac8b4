#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bvssl/cliques.hpp"
#include "bvssl/mixed_latent.hpp"
#include "bvssl/random.hpp"

namespace bvssl {

struct VSHypers {
  /// Hyper-g parameter; a = 4 makes g/(1+g) uniform.
  double a = 4.0;
  double a_pi = 1.0;
  double b_pi = 1.0;
  double a_eta = 0.01;
  double b_eta = 0.01;
  int grid_points = 1000;
  double grid_min = 0.01;
  double grid_max = 0.999;

  void validate() const;
  /// Evenly spaced g' = g / (1 + g) grid used by the g update.
  std::vector<double> g_prime_grid() const;
};

/// Regression problem with centered columns and response plus the cached
/// cross-products every model evaluation needs. The intercept is the response
/// mean (flat prior, marginalized by centering).
class RegressionDesign {
 public:
  RegressionDesign(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index p() const { return x_.cols(); }
  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& xtx() const { return xtx_; }
  const Eigen::VectorXd& xty() const { return xty_; }
  double yty() const { return yty_; }
  double alpha_hat() const { return alpha_hat_; }
  const Eigen::VectorXd& x_means() const { return x_means_; }

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  Eigen::MatrixXd xtx_;
  Eigen::VectorXd xty_;
  double yty_ = 0.0;
  double alpha_hat_ = 0.0;
  Eigen::VectorXd x_means_;
};

/// OLS coefficient of determination of a centered response on the given
/// columns; 0 for an empty design. Throws Error(collinearity) when the
/// columns are rank deficient.
double r_squared(const Eigen::MatrixXd& x_active, const Eigen::VectorXd& y);
/// Same from cached cross-products for the variables in `active`.
double r_squared(const RegressionDesign& design, const std::vector<int>& active);

/// log of (a-2)/(p_gamma+a-2) * 2F1((n-1)/2, 1; (p_gamma+a)/2; R^2): the
/// hyper-g marginal likelihood of a model relative to the null model.
double log_hyper_g_marginal(int model_size, double r2, Eigen::Index n, double a);

struct VSChainState {
  std::vector<int> gamma_c;
  /// gamma_j = 1 iff some clique containing j is active.
  std::vector<int> gamma;
  /// Dense length-p coefficients; exactly zero off the active set.
  Eigen::VectorXd beta;
  double eta = 1.0;
  double pi = 0.5;
  double g = 1.0;
  double alpha_hat = 0.0;
  /// Clique proposals forced out because the model grew too large or singular.
  long rejected_proposals = 0;

  std::vector<int> active() const;
  int model_size() const;
};

/// gamma indicators implied by `gamma_c` with clique `k` forced on or off.
std::vector<int> variables_from_cliques(const std::vector<int>& gamma_c, const CliqueSet& cliques,
                                        int p, int k = -1, bool k_on = false);

/// Log weights of clique k switched in (plus) or out (minus), each including
/// its Bernoulli prior factor pi or 1 - pi.
struct CliqueWeight {
  double log_plus = 0.0;
  double log_minus = 0.0;
  /// p+ / (p+ + p-), evaluated stably.
  double inclusion_probability() const;
};

/// Throws Error(model_too_large) when forcing k in gives p_gamma >= n - 1 and
/// Error(collinearity) when that design is singular.
CliqueWeight clique_weight(int k, const VSChainState& state, const RegressionDesign& design,
                           const CliqueSet& cliques, const VSHypers& hypers);

VSChainState sample_clique_indicator(int k, VSChainState state, const RegressionDesign& design,
                                     const CliqueSet& cliques, const VSHypers& hypers, Rng& rng);
VSChainState sample_beta(VSChainState state, const RegressionDesign& design, Rng& rng);
VSChainState sample_eta(VSChainState state, const RegressionDesign& design, const VSHypers& hypers,
                        Rng& rng);
VSChainState sample_pi(VSChainState state, int q, const VSHypers& hypers, Rng& rng);
VSChainState sample_g(VSChainState state, const RegressionDesign& design, const VSHypers& hypers,
                      Rng& rng);

/// Normalized log weights over the g' grid for model size p_gamma, residual
/// precision eta and quadratic form beta' X'X beta.
std::vector<double> g_grid_log_weights(const VSHypers& hypers, int model_size, double eta,
                                       double quad_form);

struct VSMcmcConfig {
  int iterations = 10000;
  int burn_in = 3000;
  int thin = 1;
  std::function<void(int, const VSChainState&)> observer;

  void validate() const;
};

/// Post-burn-in draws kept for prediction and diagnostics.
struct RetainedDraws {
  Eigen::MatrixXd beta;   // draws x p
  Eigen::VectorXd eta;
  Eigen::VectorXd pi;
  Eigen::VectorXd g;
  Eigen::VectorXi model_size;
  Eigen::MatrixXi gamma_c;  // draws x q
};

struct PosteriorSummary {
  Eigen::VectorXd var_incl;
  Eigen::VectorXd clique_incl;
  Eigen::VectorXd beta_mean;
  RetainedDraws draws;
  double alpha_hat = 0.0;
  Eigen::VectorXd x_means;
  long rejected_proposals = 0;
};

VSChainState initial_vs_state(const RegressionDesign& design, const CliqueSet& cliques);

/// Gibbs sampler over clique indicators, coefficients, eta, pi and g.
PosteriorSummary run_vs_mcmc(const RegressionDesign& design, const CliqueSet& cliques,
                             const VSHypers& hypers, const VSMcmcConfig& config, Rng& rng);
PosteriorSummary run_vs_mcmc(const MixedDataset& data, const Eigen::VectorXd& y,
                             const CliqueSet& cliques, const VSHypers& hypers,
                             const VSMcmcConfig& config, Rng& rng);

struct PredictiveInterval {
  double mean = 0.0;
  double lower95 = 0.0;
  double upper95 = 0.0;
};

/// Model-averaged prediction at x_star (same scale as the design columns).
/// The interval holds the 2.5% / 97.5% quantiles of the posterior predictive,
/// i.e. the equal-weight mixture of N(alpha + x' beta_t, 1 / eta_t).
PredictiveInterval predict_bma(const PosteriorSummary& summary,
                               const Eigen::Ref<const Eigen::VectorXd>& x_star);

/// Bayesian-FDR selection: largest prefix of variables, ordered by
/// decreasing probability, whose mean (1 - prob) stays <= alpha. Returns
/// original indices in ascending order.
std::vector<int> fdr_threshold(const Eigen::Ref<const Eigen::VectorXd>& probs, double alpha);

}  // namespace bvssl
