#include "bvssl/graph_learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bvssl/error.hpp"

namespace bvssl {
namespace {

constexpr double kOmegaFloor = 1e-10;
constexpr double kRefFloor = 1e-8;

double log_gamma_density(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

std::vector<Eigen::Index> all_but(Eigen::Index p, Eigen::Index skip) {
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(p > 0 ? p - 1 : 0));
  for (Eigen::Index k = 0; k < p; ++k) {
    if (k != skip) idx.push_back(k);
  }
  return idx;
}

Eigen::MatrixXd abs_offdiag(const Eigen::MatrixXd& rho) {
  Eigen::MatrixXd out = rho.cwiseAbs();
  out.diagonal().setZero();
  return out;
}

}  // namespace

void ShrinkageHypers::validate() const {
  if (!(a_lambda > 0.0 && b_lambda > 0.0 && a_p > 0.0 && b_p > 0.0 && lambda_diag > 0.0)) {
    throw Error(ErrorKind::validation, "shrinkage hyperparameters must be strictly positive");
  }
}

PriorGraph PriorGraph::empty(Eigen::Index p) {
  return {Eigen::MatrixXi::Zero(p, p), Eigen::MatrixXd::Zero(p, p)};
}

PriorGraph PriorGraph::from_adjacency(const Eigen::MatrixXi& adjacency, double edge_kappa,
                                      double absence_kappa) {
  const Eigen::Index p = adjacency.rows();
  PriorGraph prior{adjacency, Eigen::MatrixXd::Constant(p, p, absence_kappa)};
  for (Eigen::Index i = 0; i < p; ++i) {
    prior.kappa(i, i) = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j && adjacency(i, j) != 0) prior.kappa(i, j) = edge_kappa;
    }
  }
  return prior;
}

void PriorGraph::validate(const ShrinkageHypers& hypers) const {
  const Eigen::Index p = a0.rows();
  if (a0.cols() != p || kappa.rows() != p || kappa.cols() != p) {
    throw Error(ErrorKind::validation, "prior graph matrices must be square and match");
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (a0(i, i) != 0) throw Error(ErrorKind::validation, "prior graph has a self-loop");
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (a0(i, j) != a0(j, i) || kappa(i, j) != kappa(j, i)) {
        throw Error(ErrorKind::validation, "prior graph is not symmetric");
      }
      if (a0(i, j) != 0 && a0(i, j) != 1) {
        throw Error(ErrorKind::validation, "prior adjacency must be binary");
      }
      const double k = kappa(i, j);
      if (!(a0(i, j) * k + hypers.a_p > 0.0 && (1 - a0(i, j)) * k + hypers.b_p > 0.0 &&
            k + hypers.a_lambda > 0.0)) {
        std::ostringstream msg;
        msg << "belief " << k << " on pair (" << i + 1 << ", " << j + 1
            << ") makes a Beta/Gamma shape non-positive";
        throw Error(ErrorKind::validation, msg.str());
      }
    }
  }
}

GraphChainState GraphChainState::initial(const PriorGraph& prior, const ShrinkageHypers& hypers) {
  const Eigen::Index p = prior.p();
  GraphChainState s;
  s.omega = Eigen::MatrixXd::Identity(p, p);
  s.sigma = Eigen::MatrixXd::Identity(p, p);
  s.tau = Eigen::MatrixXd::Ones(p, p);
  s.lambda = Eigen::MatrixXd::Constant(p, p, hypers.a_lambda / hypers.b_lambda);
  s.lambda.diagonal().setConstant(hypers.lambda_diag);
  s.p_edge = Eigen::MatrixXd::Constant(p, p, 0.5);
  s.delta = Eigen::MatrixXi::Ones(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j) {
        s.p_edge(i, j) =
            expected_edge_probability(prior.kappa(i, j), prior.a0(i, j), hypers.a_p, hypers.b_p);
      }
    }
  }
  return s;
}

double calibrate_belief(double confidence, int a0_edge, double a_p, double b_p) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorKind::unbounded_belief,
                "confidence must lie strictly inside (0, 1); 0 and 1 need infinite belief");
  }
  if (a0_edge != 0) return b_p / (1.0 - confidence) - (a_p + b_p);
  return a_p / confidence - (a_p + b_p);
}

double expected_edge_probability(double kappa, int a0_edge, double a_p, double b_p) {
  return ((a0_edge != 0 ? kappa : 0.0) + a_p) / (kappa + a_p + b_p);
}

Eigen::MatrixXd partial_correlation(const Eigen::MatrixXd& omega) {
  const Eigen::Index p = omega.rows();
  const Eigen::VectorXd d = omega.diagonal();
  if ((d.array() <= 0.0).any()) {
    throw Error(ErrorKind::invalid_precision, "precision matrix has a non-positive diagonal");
  }
  const Eigen::VectorXd inv_sqrt = d.array().rsqrt();
  Eigen::MatrixXd rho = -(inv_sqrt.asDiagonal() * omega * inv_sqrt.asDiagonal());
  for (Eigen::Index i = 0; i < p; ++i) rho(i, i) = 1.0;
  return rho.cwiseMax(-1.0).cwiseMin(1.0);
}

Eigen::MatrixXd sample_tau(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& lambda, Rng& rng) {
  const Eigen::Index p = omega.rows();
  Eigen::MatrixXd tau = Eigen::MatrixXd::Ones(p, p);
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double lam = lambda(i, j);
      const double w = std::max(std::abs(omega(i, j)), kOmegaFloor);
      const double inv_tau = rng.inverse_gaussian(lam / w, lam * lam);
      tau(i, j) = tau(j, i) = 1.0 / inv_tau;
    }
  }
  return tau;
}

GraphChainState sample_omega_column(const Eigen::MatrixXd& scatter, GraphChainState state,
                                    Eigen::Index col, double n, Rng& rng) {
  const Eigen::Index p = state.omega.rows();
  const double rate_term = scatter(col, col) + state.lambda(col, col);
  if (p == 1) {
    const double v = rng.gamma(0.5 * n + 1.0, 0.5 * rate_term);
    state.omega(0, 0) = v;
    state.sigma(0, 0) = 1.0 / v;
    return state;
  }
  const std::vector<Eigen::Index> rest = all_but(p, col);
  const Eigen::MatrixXd sigma11 = state.sigma(rest, rest);
  const Eigen::VectorXd sigma12 = state.sigma(rest, col);
  const Eigen::MatrixXd omega11_inv = sigma11 - sigma12 * sigma12.transpose() / state.sigma(col, col);

  Eigen::MatrixXd precision_u = rate_term * omega11_inv;
  for (Eigen::Index k = 0; k < p - 1; ++k) {
    precision_u(k, k) += 1.0 / state.tau(rest[static_cast<std::size_t>(k)], col);
  }
  const Eigen::LLT<Eigen::MatrixXd> chol(precision_u);
  if (chol.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical_singularity,
                "Cholesky failure of the column-" + std::to_string(col + 1) + " conditional");
  }
  const Eigen::VectorXd s21 = scatter(rest, col);
  const Eigen::VectorXd mean = -chol.solve(s21);
  const Eigen::VectorXd u =
      mean + chol.matrixU().solve(rng.standard_normal_vector(p - 1));
  const double v = rng.gamma(0.5 * n + 1.0, 0.5 * rate_term);

  const Eigen::VectorXd w = omega11_inv * u;
  const double omega22 = v + u.dot(w);
  for (Eigen::Index k = 0; k < p - 1; ++k) {
    const Eigen::Index r = rest[static_cast<std::size_t>(k)];
    state.omega(r, col) = state.omega(col, r) = u[k];
  }
  state.omega(col, col) = omega22;

  const Eigen::MatrixXd new_sigma11 = omega11_inv + w * w.transpose() / v;
  state.sigma(rest, rest) = new_sigma11;
  for (Eigen::Index k = 0; k < p - 1; ++k) {
    const Eigen::Index r = rest[static_cast<std::size_t>(k)];
    state.sigma(r, col) = state.sigma(col, r) = -w[k] / v;
  }
  state.sigma(col, col) = 1.0 / v;
  return state;
}

GraphChainState sample_lambda(GraphChainState state, const PriorGraph& prior,
                              const ShrinkageHypers& hypers, Rng& rng) {
  const Eigen::Index p = state.omega.rows();
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double belief = state.delta(i, j) == 1 ? 0.0 : prior.kappa(i, j);
      const double shape = 1.0 + belief + hypers.a_lambda;
      const double rate = std::abs(state.omega(i, j)) + hypers.b_lambda;
      state.lambda(i, j) = state.lambda(j, i) = rng.gamma(shape, rate);
    }
  }
  return state;
}

GraphChainState sample_lambda_no_prior(GraphChainState state, const ShrinkageHypers& hypers,
                                       Rng& rng) {
  const Eigen::Index p = state.omega.rows();
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double rate = std::abs(state.omega(i, j)) + hypers.b_lambda;
      state.lambda(i, j) = state.lambda(j, i) = rng.gamma(1.0 + hypers.a_lambda, rate);
    }
  }
  return state;
}

double delta_inclusion_weight(double lambda, double p_edge, double kappa,
                              const ShrinkageHypers& hypers) {
  if (kappa == 0.0) return p_edge;
  const double log_in = std::log(p_edge) + log_gamma_density(lambda, hypers.a_lambda, hypers.b_lambda);
  const double log_out = std::log1p(-p_edge) +
                         log_gamma_density(lambda, kappa + hypers.a_lambda, hypers.b_lambda);
  const double top = std::max(log_in, log_out);
  const double e_in = std::exp(log_in - top);
  const double e_out = std::exp(log_out - top);
  return e_in / (e_in + e_out);
}

GraphChainState sample_delta_p(GraphChainState state, const PriorGraph& prior,
                               const ShrinkageHypers& hypers, Rng& rng) {
  const Eigen::Index p = state.omega.rows();
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double kappa = prior.kappa(i, j);
      const int a0 = prior.a0(i, j);
      const double weight = delta_inclusion_weight(state.lambda(i, j), state.p_edge(i, j), kappa, hypers);
      const int delta = rng.bernoulli(weight) ? 1 : 0;
      const double shape1 = a0 * kappa + hypers.a_p + delta;
      const double shape2 = (1 - a0) * kappa + hypers.b_p + 1 - delta;
      state.delta(i, j) = state.delta(j, i) = delta;
      state.p_edge(i, j) = state.p_edge(j, i) = rng.beta(shape1, shape2);
    }
  }
  return state;
}

Eigen::MatrixXd sample_wishart(double df, const Eigen::MatrixXd& scale, Rng& rng) {
  const Eigen::Index p = scale.rows();
  if (!(df > static_cast<double>(p) - 1.0)) {
    throw Error(ErrorKind::domain, "Wishart degrees of freedom must exceed p - 1");
  }
  const Eigen::LLT<Eigen::MatrixXd> chol(scale);
  if (chol.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical_singularity, "Wishart scale is not positive definite");
  }
  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    bartlett(i, i) = std::sqrt(2.0 * rng.gamma(0.5 * (df - static_cast<double>(i)), 1.0));
    for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  const Eigen::MatrixXd la = chol.matrixL() * bartlett;
  return la * la.transpose();
}

Eigen::MatrixXd reference_partial_corr(const Eigen::MatrixXd& scatter, double n, int n_mc,
                                       Rng& rng) {
  const Eigen::Index p = scatter.rows();
  if (n_mc < 1) throw Error(ErrorKind::validation, "n_mc must be positive");
  const Eigen::MatrixXd posterior_precision = Eigen::MatrixXd::Identity(p, p) + scatter;
  const Eigen::MatrixXd scale =
      posterior_precision.llt().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(p, p);
  for (int draw = 0; draw < n_mc; ++draw) {
    total += abs_offdiag(partial_correlation(sample_wishart(3.0 + n, scale, rng)));
  }
  return total / static_cast<double>(n_mc);
}

Eigen::MatrixXi estimate_graph(const Eigen::MatrixXd& rho_hat, const Eigen::MatrixXd& rho_ref) {
  const Eigen::Index p = rho_hat.rows();
  if (rho_ref.rows() != p || rho_ref.cols() != p || rho_hat.cols() != p) {
    throw Error(ErrorKind::validation, "partial-correlation matrices differ in shape");
  }
  Eigen::MatrixXi adjacency = Eigen::MatrixXi::Zero(p, p);
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double num = 0.5 * (std::abs(rho_hat(i, j)) + std::abs(rho_hat(j, i)));
      const double den = std::max(0.5 * (rho_ref(i, j) + rho_ref(j, i)), kRefFloor);
      if (num / den > 0.5) adjacency(i, j) = adjacency(j, i) = 1;
    }
  }
  return adjacency;
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
  return Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success;
}

void GraphMcmcConfig::validate() const {
  if (iterations < 1 || burn_in < 0 || burn_in >= iterations) {
    throw Error(ErrorKind::validation, "need 0 <= burn_in < iterations");
  }
  if (n_mc < 1) throw Error(ErrorKind::validation, "n_mc must be positive");
}

GraphRunResult run_graph_mcmc(const MixedDataset& input, const PriorGraph& prior,
                              const ShrinkageHypers& hypers, const GraphMcmcConfig& config,
                              Rng& rng) {
  config.validate();
  hypers.validate();
  if (input.p() != prior.p()) {
    throw Error(ErrorKind::validation, "dataset has " + std::to_string(input.p()) +
                                           " columns but the prior graph has " +
                                           std::to_string(prior.p()) + " nodes");
  }
  prior.validate(hypers);
  const MixedDataset data = input.standardized() ? input : input.standardize();
  const Eigen::Index p = data.p();
  const double n = static_cast<double>(data.n());

  LatentState latent = initial_latent_state(data);
  GraphChainState state = GraphChainState::initial(prior, hypers);

  GraphRunResult result;
  GraphChainSummary& summary = result.summary;
  summary.p_edge_mean = Eigen::MatrixXd::Zero(p, p);
  summary.delta_mean = Eigen::MatrixXd::Zero(p, p);
  summary.omega_mean = Eigen::MatrixXd::Zero(p, p);
  summary.z_mean = Eigen::MatrixXd::Zero(data.n(), p);
  Eigen::MatrixXd abs_rho_sum = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd rho_sum = Eigen::MatrixXd::Zero(p, p);

  for (int it = 1; it <= config.iterations; ++it) {
    try {
      latent = sample_latent(std::move(latent), data, state.omega, rng);
      latent = update_cutpoints(std::move(latent), data, rng);
      const Eigen::MatrixXd scatter = latent.z.transpose() * latent.z;

      state.tau = sample_tau(state.omega, state.lambda, rng);
      for (Eigen::Index col = 0; col < p; ++col) {
        state = sample_omega_column(scatter, std::move(state), col, n, rng);
      }
      const Eigen::LLT<Eigen::MatrixXd> chol(state.omega);
      if (chol.info() != Eigen::Success) {
        throw Error(ErrorKind::numerical_singularity, "precision matrix lost positive definiteness");
      }
      state.sigma = chol.solve(Eigen::MatrixXd::Identity(p, p));

      if (config.use_belief_prior) {
        state = sample_lambda(std::move(state), prior, hypers, rng);
        state = sample_delta_p(std::move(state), prior, hypers, rng);
      } else {
        state = sample_lambda_no_prior(std::move(state), hypers, rng);
      }
      if (config.check_invariants) check_latent_invariants(latent, data);
    } catch (const Error& e) {
      throw Error(e.kind(), "graph sampler iteration " + std::to_string(it) + ": " + e.what());
    }
    if (config.observer) config.observer(it, state, latent);

    if (it > config.burn_in) {
      const Eigen::MatrixXd rho = partial_correlation(state.omega);
      rho_sum += rho;
      abs_rho_sum += abs_offdiag(rho);
      summary.p_edge_mean += state.p_edge;
      summary.delta_mean += state.delta.cast<double>();
      summary.omega_mean += state.omega;
      summary.z_mean += latent.z;
      ++summary.retained;
    }
  }

  const double kept = static_cast<double>(summary.retained);
  summary.p_edge_mean /= kept;
  summary.delta_mean /= kept;
  summary.omega_mean /= kept;
  summary.z_mean /= kept;

  GraphEstimate& est = result.estimate;
  est.rho_hat = abs_rho_sum / kept;
  est.signed_rho = rho_sum / kept;
  const Eigen::MatrixXd ref_scatter = summary.z_mean.transpose() * summary.z_mean;
  est.rho_ref = reference_partial_corr(ref_scatter, n, config.n_mc, rng);
  est.adjacency = estimate_graph(est.rho_hat, est.rho_ref);
  return result;
}

}  // namespace bvssl
