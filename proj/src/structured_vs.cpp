#include "bvssl/structured_vs.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "bvssl/error.hpp"
#include "bvssl/hypergeometric.hpp"

namespace bvssl {
namespace {

constexpr double kPivotTolerance = 1e-9;

Eigen::MatrixXd sub_xtx(const RegressionDesign& design, const std::vector<int>& active) {
  const auto k = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      out(a, b) = design.xtx()(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

Eigen::VectorXd sub_vector(const Eigen::VectorXd& v, const std::vector<int>& active) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(active.size()));
  for (std::size_t a = 0; a < active.size(); ++a) out[static_cast<Eigen::Index>(a)] = v[active[a]];
  return out;
}

/// Cholesky of X_A'X_A, rejecting numerically rank-deficient designs.
Eigen::LLT<Eigen::MatrixXd> factor_gram(const Eigen::MatrixXd& gram) {
  Eigen::LLT<Eigen::MatrixXd> chol(gram);
  bool ok = chol.info() == Eigen::Success;
  if (ok) {
    const Eigen::MatrixXd l = chol.matrixL();
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
      if (!(l(i, i) > kPivotTolerance * std::sqrt(gram(i, i)))) ok = false;
    }
  }
  if (!ok) throw Error(ErrorKind::collinearity, "active design columns are collinear");
  return chol;
}

std::string describe_model(const std::vector<int>& active) {
  std::string out = "{";
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(active[i] + 1);
  }
  return out + "}";
}

double sample_grid(const std::vector<double>& log_weights, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    cumulative += std::exp(log_weights[i]);
    if (u < cumulative) return static_cast<double>(i);
  }
  return static_cast<double>(log_weights.size() - 1);
}

}  // namespace

void VSHypers::validate() const {
  if (!(a > 2.0)) throw Error(ErrorKind::validation, "hyper-g parameter a must exceed 2");
  if (!(a_pi > 0.0 && b_pi > 0.0 && a_eta > 0.0 && b_eta > 0.0)) {
    throw Error(ErrorKind::validation, "Beta/Gamma shapes must be strictly positive");
  }
  if (grid_points < 2 || !(grid_min > 0.0 && grid_min < grid_max && grid_max < 1.0)) {
    throw Error(ErrorKind::validation, "g grid needs >= 2 points inside (0, 1)");
  }
}

std::vector<double> VSHypers::g_prime_grid() const {
  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  const double step = (grid_max - grid_min) / static_cast<double>(grid_points - 1);
  for (int i = 0; i < grid_points; ++i) grid[static_cast<std::size_t>(i)] = grid_min + step * i;
  grid.back() = grid_max;
  return grid;
}

RegressionDesign::RegressionDesign(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorKind::validation, "response length does not match design rows");
  }
  if (x.rows() < 2) throw Error(ErrorKind::validation, "need at least two observations");
  x_means_ = x.colwise().mean().transpose();
  x_ = x.rowwise() - x_means_.transpose();
  alpha_hat_ = y.mean();
  y_ = y.array() - alpha_hat_;
  xtx_ = x_.transpose() * x_;
  xty_ = x_.transpose() * y_;
  yty_ = y_.squaredNorm();
}

double r_squared(const Eigen::MatrixXd& x_active, const Eigen::VectorXd& y) {
  if (x_active.cols() == 0) return 0.0;
  const double tss = y.squaredNorm();
  if (!(tss > 0.0)) return 0.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x_active);
  qr.setThreshold(kPivotTolerance);
  if (qr.rank() < x_active.cols()) {
    throw Error(ErrorKind::collinearity, "design with " + std::to_string(x_active.cols()) +
                                             " columns has rank " + std::to_string(qr.rank()));
  }
  const Eigen::VectorXd resid = y - x_active * qr.solve(y);
  return std::clamp(1.0 - resid.squaredNorm() / tss, 0.0, 1.0);
}

double r_squared(const RegressionDesign& design, const std::vector<int>& active) {
  if (active.empty() || !(design.yty() > 0.0)) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> chol;
  try {
    chol = factor_gram(sub_xtx(design, active));
  } catch (const Error&) {
    throw Error(ErrorKind::collinearity, "model " + describe_model(active) + " has collinear columns");
  }
  const Eigen::VectorXd xty = sub_vector(design.xty(), active);
  return std::clamp(xty.dot(chol.solve(xty)) / design.yty(), 0.0, 1.0);
}

double log_hyper_g_marginal(int model_size, double r2, Eigen::Index n, double a) {
  if (model_size == 0) return 0.0;
  const double pg = static_cast<double>(model_size);
  return std::log((a - 2.0) / (pg + a - 2.0)) +
         log_gauss_2f1(0.5 * (static_cast<double>(n) - 1.0), 1.0, 0.5 * (pg + a), r2);
}

std::vector<int> VSChainState::active() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    if (gamma[j]) out.push_back(static_cast<int>(j));
  }
  return out;
}

int VSChainState::model_size() const {
  return static_cast<int>(std::count(gamma.begin(), gamma.end(), 1));
}

std::vector<int> variables_from_cliques(const std::vector<int>& gamma_c, const CliqueSet& cliques,
                                        int p, int k, bool k_on) {
  std::vector<int> gamma(static_cast<std::size_t>(p), 0);
  for (std::size_t c = 0; c < cliques.q(); ++c) {
    const bool on = static_cast<int>(c) == k ? k_on : gamma_c[c] != 0;
    if (!on) continue;
    for (int node : cliques.cliques[c]) gamma[static_cast<std::size_t>(node)] = 1;
  }
  return gamma;
}

double CliqueWeight::inclusion_probability() const {
  const double diff = log_minus - log_plus;
  if (diff > 0.0) {
    const double e = std::exp(-diff);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(diff));
}

CliqueWeight clique_weight(int k, const VSChainState& state, const RegressionDesign& design,
                           const CliqueSet& cliques, const VSHypers& hypers) {
  const int p = static_cast<int>(design.p());
  const auto to_active = [](const std::vector<int>& gamma) {
    std::vector<int> out;
    for (std::size_t j = 0; j < gamma.size(); ++j) {
      if (gamma[j]) out.push_back(static_cast<int>(j));
    }
    return out;
  };
  const std::vector<int> plus = to_active(variables_from_cliques(state.gamma_c, cliques, p, k, true));
  const std::vector<int> minus = to_active(variables_from_cliques(state.gamma_c, cliques, p, k, false));
  if (static_cast<Eigen::Index>(plus.size()) >= design.n() - 1) {
    throw Error(ErrorKind::model_too_large,
                "clique " + std::to_string(k + 1) + " would give model size " +
                    std::to_string(plus.size()) + " >= n - 1");
  }
  const Eigen::Index n = design.n();
  CliqueWeight w;
  w.log_plus = log_hyper_g_marginal(static_cast<int>(plus.size()), r_squared(design, plus), n, hypers.a) +
               std::log(state.pi);
  w.log_minus =
      log_hyper_g_marginal(static_cast<int>(minus.size()), r_squared(design, minus), n, hypers.a) +
      std::log1p(-state.pi);
  return w;
}

VSChainState sample_clique_indicator(int k, VSChainState state, const RegressionDesign& design,
                                     const CliqueSet& cliques, const VSHypers& hypers, Rng& rng) {
  int on = 0;
  try {
    const CliqueWeight w = clique_weight(k, state, design, cliques, hypers);
    on = rng.bernoulli(w.inclusion_probability()) ? 1 : 0;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::model_too_large && e.kind() != ErrorKind::collinearity) throw;
    ++state.rejected_proposals;
  }
  state.gamma_c[static_cast<std::size_t>(k)] = on;
  state.gamma = variables_from_cliques(state.gamma_c, cliques, static_cast<int>(design.p()));
  return state;
}

VSChainState sample_beta(VSChainState state, const RegressionDesign& design, Rng& rng) {
  state.beta = Eigen::VectorXd::Zero(design.p());
  const std::vector<int> active = state.active();
  if (active.empty()) return state;
  const Eigen::LLT<Eigen::MatrixXd> chol = factor_gram(sub_xtx(design, active));
  const double shrink = state.g / (1.0 + state.g);
  const Eigen::VectorXd mean = shrink * chol.solve(sub_vector(design.xty(), active));
  const Eigen::VectorXd noise = chol.matrixU().solve(
      rng.standard_normal_vector(static_cast<Eigen::Index>(active.size())));
  const Eigen::VectorXd draw = mean + std::sqrt(shrink / state.eta) * noise;
  for (std::size_t a = 0; a < active.size(); ++a) state.beta[active[a]] = draw[static_cast<Eigen::Index>(a)];
  return state;
}

VSChainState sample_eta(VSChainState state, const RegressionDesign& design, const VSHypers& hypers,
                        Rng& rng) {
  const double rss = (design.y() - design.x() * state.beta).squaredNorm();
  const double n = static_cast<double>(design.n());
  state.eta = rng.gamma(0.5 * n + hypers.a_eta, 0.5 * rss + hypers.b_eta);
  return state;
}

VSChainState sample_pi(VSChainState state, int q, const VSHypers& hypers, Rng& rng) {
  if (q < 1) throw Error(ErrorKind::validation, "clique count must be positive");
  const int selected = static_cast<int>(std::count(state.gamma_c.begin(), state.gamma_c.end(), 1));
  state.pi = rng.beta(selected + hypers.a_pi, q - selected + hypers.b_pi);
  return state;
}

std::vector<double> g_grid_log_weights(const VSHypers& hypers, int model_size, double eta,
                                       double quad_form) {
  const std::vector<double> grid = hypers.g_prime_grid();
  std::vector<double> logw(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = grid[i] / (1.0 - grid[i]);
    logw[i] = -0.5 * model_size * std::log(g) - eta * quad_form / (2.0 * g);
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double v : logw) total += std::exp(v - top);
  const double log_norm = top + std::log(total);
  for (double& v : logw) v -= log_norm;
  return logw;
}

VSChainState sample_g(VSChainState state, const RegressionDesign& design, const VSHypers& hypers,
                      Rng& rng) {
  const double quad = state.beta.dot(design.xtx() * state.beta);
  const std::vector<double> logw = g_grid_log_weights(hypers, state.model_size(), state.eta, quad);
  const double g_prime = hypers.g_prime_grid()[static_cast<std::size_t>(sample_grid(logw, rng))];
  state.g = g_prime / (1.0 - g_prime);
  return state;
}

void VSMcmcConfig::validate() const {
  if (iterations < 1 || burn_in < 0 || burn_in >= iterations) {
    throw Error(ErrorKind::validation, "need 0 <= burn_in < iterations");
  }
  if (thin < 1) throw Error(ErrorKind::validation, "thin must be >= 1");
}

VSChainState initial_vs_state(const RegressionDesign& design, const CliqueSet& cliques) {
  VSChainState s;
  s.gamma_c.assign(cliques.q(), 0);
  s.gamma.assign(static_cast<std::size_t>(design.p()), 0);
  s.beta = Eigen::VectorXd::Zero(design.p());
  const double n = static_cast<double>(design.n());
  s.eta = design.yty() > 0.0 ? (n - 1.0) / design.yty() : 1.0;
  s.pi = 0.5;
  s.g = std::min(n, 999.0);
  s.alpha_hat = design.alpha_hat();
  return s;
}

PosteriorSummary run_vs_mcmc(const RegressionDesign& design, const CliqueSet& cliques,
                             const VSHypers& hypers, const VSMcmcConfig& config, Rng& rng) {
  config.validate();
  hypers.validate();
  const Eigen::Index p = design.p();
  if (cliques.q() == 0) throw Error(ErrorKind::validation, "clique set is empty");
  node_clique_index(cliques.cliques, static_cast<int>(p));
  const int q = static_cast<int>(cliques.q());

  const int kept = (config.iterations - config.burn_in) / config.thin;
  PosteriorSummary out;
  out.alpha_hat = design.alpha_hat();
  out.x_means = design.x_means();
  RetainedDraws& d = out.draws;
  d.beta = Eigen::MatrixXd::Zero(kept, p);
  d.eta = Eigen::VectorXd::Zero(kept);
  d.pi = Eigen::VectorXd::Zero(kept);
  d.g = Eigen::VectorXd::Zero(kept);
  d.model_size = Eigen::VectorXi::Zero(kept);
  d.gamma_c = Eigen::MatrixXi::Zero(kept, q);
  out.var_incl = Eigen::VectorXd::Zero(p);
  out.clique_incl = Eigen::VectorXd::Zero(q);

  VSChainState state = initial_vs_state(design, cliques);
  int row = 0;
  for (int it = 1; it <= config.iterations; ++it) {
    try {
      for (int k = 0; k < q; ++k) {
        state = sample_clique_indicator(k, std::move(state), design, cliques, hypers, rng);
      }
      state = sample_beta(std::move(state), design, rng);
      state = sample_eta(std::move(state), design, hypers, rng);
      state = sample_pi(std::move(state), q, hypers, rng);
      state = sample_g(std::move(state), design, hypers, rng);
    } catch (const Error& e) {
      throw Error(e.kind(), "selection sampler iteration " + std::to_string(it) + ": " + e.what());
    }
    if (config.observer) config.observer(it, state);
    if (it > config.burn_in && (it - config.burn_in) % config.thin == 0 && row < kept) {
      d.beta.row(row) = state.beta.transpose();
      d.eta[row] = state.eta;
      d.pi[row] = state.pi;
      d.g[row] = state.g;
      d.model_size[row] = state.model_size();
      for (int k = 0; k < q; ++k) d.gamma_c(row, k) = state.gamma_c[static_cast<std::size_t>(k)];
      for (Eigen::Index j = 0; j < p; ++j) out.var_incl[j] += state.gamma[static_cast<std::size_t>(j)];
      ++row;
    }
  }
  out.var_incl /= static_cast<double>(kept);
  out.clique_incl = d.gamma_c.cast<double>().colwise().mean().transpose();
  out.beta_mean = d.beta.colwise().mean().transpose();
  out.rejected_proposals = state.rejected_proposals;
  if (state.rejected_proposals > 0) {
    std::clog << "warning: " << state.rejected_proposals
              << " clique proposals rejected (model size >= n - 1 or collinear design)\n";
  }
  return out;
}

PosteriorSummary run_vs_mcmc(const MixedDataset& data, const Eigen::VectorXd& y,
                             const CliqueSet& cliques, const VSHypers& hypers,
                             const VSMcmcConfig& config, Rng& rng) {
  if (y.size() != data.n()) {
    throw Error(ErrorKind::validation, "response has " + std::to_string(y.size()) +
                                           " rows but the dataset has " + std::to_string(data.n()));
  }
  return run_vs_mcmc(RegressionDesign(data.values(), y), cliques, hypers, config, rng);
}

PredictiveInterval predict_bma(const PosteriorSummary& summary,
                               const Eigen::Ref<const Eigen::VectorXd>& x_star) {
  const Eigen::Index m = summary.draws.beta.rows();
  if (m == 0) throw Error(ErrorKind::empty_chain, "no retained draws to predict from");
  if (x_star.size() != summary.draws.beta.cols()) {
    throw Error(ErrorKind::validation, "prediction point has the wrong dimension");
  }
  const Eigen::VectorXd centered = x_star - summary.x_means;
  const Eigen::VectorXd mu = (summary.draws.beta * centered).array() + summary.alpha_hat;
  const Eigen::VectorXd sd = summary.draws.eta.array().rsqrt();

  PredictiveInterval out;
  out.mean = mu.mean();
  const auto mixture_cdf = [&](double y) {
    double total = 0.0;
    for (Eigen::Index t = 0; t < m; ++t) total += normal_cdf((y - mu[t]) / sd[t]);
    return total / static_cast<double>(m);
  };
  const double lo = (mu - 10.0 * sd).minCoeff();
  const double hi = (mu + 10.0 * sd).maxCoeff();
  const auto quantile = [&](double level) {
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        [&](double y) { return mixture_cdf(y) - level; }, lo, hi,
        boost::math::tools::eps_tolerance<double>(44), max_iter);
    return 0.5 * (bracket.first + bracket.second);
  };
  out.lower95 = quantile(0.025);
  out.upper95 = quantile(0.975);
  return out;
}

std::vector<int> fdr_threshold(const Eigen::Ref<const Eigen::VectorXd>& probs, double alpha) {
  const auto p = static_cast<std::size_t>(probs.size());
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return probs[a] > probs[b]; });
  std::size_t keep = 0;
  double running = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    running += 1.0 - probs[order[k]];
    if (running / static_cast<double>(k + 1) <= alpha) keep = k + 1;
  }
  std::vector<int> selected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(selected.begin(), selected.end());
  return selected;
}

}  // namespace bvssl
