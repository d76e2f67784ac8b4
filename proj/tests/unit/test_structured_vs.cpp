#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bvssl/error.hpp"
#include "bvssl/structured_vs.hpp"
#include "oracles/oracles.hpp"

using namespace bvssl;

namespace {

struct Problem {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

Problem make_problem(int n, int p, const std::vector<double>& beta, std::uint64_t seed, double rho = 0.3) {
  Rng rng(seed);
  Problem pr{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    const double f = rng.normal();
    for (int j = 0; j < p; ++j) pr.x(i, j) = std::sqrt(rho) * f + std::sqrt(1.0 - rho) * rng.normal();
    double mu = 1.0;
    for (int j = 0; j < p; ++j) mu += beta[static_cast<std::size_t>(j)] * pr.x(i, j);
    pr.y[i] = mu + rng.normal();
  }
  return pr;
}

CliqueSet clique_set(std::vector<std::vector<int>> cliques, int p) {
  CliqueSet s;
  s.cliques = std::move(cliques);
  s.node_index = node_clique_index(s.cliques, p);
  return s;
}

CliqueSet singletons(int p) {
  std::vector<std::vector<int>> c;
  for (int j = 0; j < p; ++j) c.push_back({j});
  return clique_set(c, p);
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(v.size() - 1);
  return m;
}

}  // namespace

TEST_CASE("R squared examples") {
  Eigen::MatrixXd x(3, 1);
  x << -1, 0, 1;
  Eigen::VectorXd y(3);
  y << -2, 1, 1;
  CHECK(r_squared(x, y) == doctest::Approx(0.75));
  CHECK(r_squared(x, x.col(0)) == doctest::Approx(1.0));
  Eigen::VectorXd orth(3);
  orth << 1, -2, 1;
  CHECK(r_squared(x, orth) == doctest::Approx(0.0).scale(1.0));
  CHECK(r_squared(Eigen::MatrixXd(3, 0), y) == 0.0);
  Eigen::MatrixXd twin(3, 2);
  twin << -1, -2, 0, 0, 1, 2;
  try {
    r_squared(twin, y);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::collinearity);
  }
}

TEST_CASE("cached R squared matches the normal-equation oracle") {
  const Problem pr = make_problem(50, 6, {1.0, 0.0, -0.5, 0.0, 0.3, 0.0}, 3);
  const RegressionDesign d(pr.x, pr.y);
  const std::vector<std::vector<int>> models{{0}, {1, 2}, {0, 2, 4}, {0, 1, 2, 3, 4, 5}, {}};
  for (const auto& m : models) {
    CHECK(r_squared(d, m) == doctest::Approx(oracle::r_squared(pr.x, pr.y, m)).epsilon(1e-10));
  }
  Eigen::MatrixXd dup = pr.x;
  dup.col(1) = 2.0 * dup.col(0);
  const RegressionDesign bad(dup, pr.y);
  CHECK_THROWS_AS(r_squared(bad, {0, 1}), Error);
}

TEST_CASE("hyper-g marginal matches direct integration over g") {
  for (int n : {20, 101}) {
    for (int p : {1, 2, 5}) {
      for (double r2 : {0.0, 0.1, 0.5, 0.8}) {
        for (double a : {3.0, 4.0}) {
          const double ours = log_hyper_g_marginal(p, r2, n, a);
          const double ref = oracle::log_hyper_g_bf(p, r2, n, a);
          CHECK(ours == doctest::Approx(ref).epsilon(1e-7));
        }
      }
    }
  }
  CHECK(log_hyper_g_marginal(0, 0.0, 50, 4.0) == 0.0);
}

TEST_CASE("clique weight example") {
  // Single clique {0, 1} of p = 2, n = 101; both weights from first principles.
  Rng rng(5);
  Eigen::MatrixXd x(101, 2);
  Eigen::VectorXd y(101);
  for (int i = 0; i < 101; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y[i] = x(i, 0) - x(i, 1) + rng.normal();
  }
  const RegressionDesign d(x, y);
  const CliqueSet cs = clique_set({{0, 1}}, 2);
  VSChainState s = initial_vs_state(d, cs);
  s.pi = 0.3;
  VSHypers h;
  const CliqueWeight w = clique_weight(0, s, d, cs, h);
  const double r2 = oracle::r_squared(x, y, {0, 1});
  CHECK(w.log_plus ==
        doctest::Approx(std::log(2.0 / 4.0) + oracle::log_hyp2f1(50.0, 1.0, 3.0, r2) + std::log(0.3)));
  CHECK(w.log_minus == doctest::Approx(std::log(0.7)));
  // Reference value of the marginal term at R^2 = 0.5.
  CHECK(log_hyper_g_marginal(2, 0.5, 101, 4.0) ==
        doctest::Approx(std::log(0.5) + oracle::log_hyp2f1(50.0, 1.0, 3.0, 0.5)));
  const double prob = w.inclusion_probability();
  CHECK(prob == doctest::Approx(1.0 / (1.0 + std::exp(w.log_minus - w.log_plus))));
}

TEST_CASE("inclusion probability is stable for extreme weights") {
  CliqueWeight w{1000.0, 0.0};
  CHECK(w.inclusion_probability() == 1.0);
  w = {0.0, 1000.0};
  CHECK(w.inclusion_probability() == 0.0);
  w = {-2.0, -2.0};
  CHECK(w.inclusion_probability() == 0.5);
}

TEST_CASE("oversized proposals are rejected and counted") {
  const Problem pr = make_problem(4, 3, {1, 1, 1}, 1);
  const RegressionDesign d(pr.x, pr.y);
  const CliqueSet cs = clique_set({{0, 1, 2}}, 3);
  VSChainState s = initial_vs_state(d, cs);
  CHECK_THROWS_AS(clique_weight(0, s, d, cs, VSHypers{}), Error);
  Rng rng(1);
  s = sample_clique_indicator(0, s, d, cs, VSHypers{}, rng);
  CHECK(s.gamma_c[0] == 0);
  CHECK(s.rejected_proposals == 1);
}

TEST_CASE("clique indicator implies every member variable") {
  const CliqueSet cs = clique_set({{0, 1, 2}, {2, 3}}, 4);
  CHECK(variables_from_cliques({1, 0}, cs, 4) == std::vector<int>{1, 1, 1, 0});
  CHECK(variables_from_cliques({0, 1}, cs, 4) == std::vector<int>{0, 0, 1, 1});
  // OR rule: switching off clique 1 keeps node 2 through clique 0.
  CHECK(variables_from_cliques({1, 1}, cs, 4, 1, false) == std::vector<int>{1, 1, 1, 0});
  CHECK(variables_from_cliques({0, 0}, cs, 4, 1, true) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("pi conditional is Beta") {
  VSChainState s;
  s.gamma_c = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  Rng rng(2);
  std::vector<double> draws;
  for (int t = 0; t < 40000; ++t) draws.push_back(sample_pi(s, 10, VSHypers{}, rng).pi);
  const Moments m = moments(draws);
  CHECK(m.mean == doctest::Approx(4.0 / 12.0).epsilon(0.01));
  CHECK(m.var == doctest::Approx(32.0 / (144.0 * 13.0)).epsilon(0.04));
}

TEST_CASE("eta conditional is Gamma") {
  // n = 100 and residual sum of squares 90 give Gamma(50.01, 45.01).
  Eigen::MatrixXd x(100, 1);
  Eigen::VectorXd y(100);
  for (int i = 0; i < 100; ++i) {
    x(i, 0) = i;
    y[i] = (i % 2 ? -1.0 : 1.0) * std::sqrt(0.9);
  }
  const RegressionDesign d90(x, y);
  REQUIRE(d90.yty() == doctest::Approx(90.0));
  VSChainState s = initial_vs_state(d90, singletons(1));
  Rng rng(3);
  std::vector<double> draws;
  for (int t = 0; t < 40000; ++t) draws.push_back(sample_eta(s, d90, VSHypers{}, rng).eta);
  const Moments m = moments(draws);
  CHECK(m.mean == doctest::Approx(50.01 / 45.01).epsilon(0.01));
  CHECK(m.var == doctest::Approx(50.01 / (45.01 * 45.01)).epsilon(0.05));
}

TEST_CASE("coefficients at g = 1 shrink least squares by half") {
  const Problem pr = make_problem(80, 3, {1.0, -2.0, 0.5}, 4);
  const RegressionDesign d(pr.x, pr.y);
  const CliqueSet cs = singletons(3);
  VSChainState s = initial_vs_state(d, cs);
  s.gamma_c = {1, 0, 1};
  s.gamma = variables_from_cliques(s.gamma_c, cs, 3);
  s.g = 1.0;
  s.eta = 2.0;
  Eigen::MatrixXd xa(80, 2);
  xa << d.x().col(0), d.x().col(2);
  const Eigen::VectorXd ols = (xa.transpose() * xa).ldlt().solve(xa.transpose() * d.y());
  Rng rng(4);
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) {
    const VSChainState out = sample_beta(s, d, rng);
    REQUIRE(out.beta[1] == 0.0);
    sum += Eigen::Vector2d(out.beta[0], out.beta[2]);
  }
  sum /= draws;
  CHECK(sum[0] == doctest::Approx(0.5 * ols[0]).epsilon(0.02));
  CHECK(sum[1] == doctest::Approx(0.5 * ols[1]).epsilon(0.05));
}

TEST_CASE("g grid weights") {
  VSHypers h;
  const std::vector<double> grid = h.g_prime_grid();
  CHECK(grid.size() == 1000);
  CHECK(grid.front() == doctest::Approx(0.01));
  CHECK(grid.back() == doctest::Approx(0.999));
  const std::vector<double> flat = g_grid_log_weights(h, 0, 1.0, 0.0);
  double total = 0.0;
  for (double w : flat) {
    CHECK(w == doctest::Approx(flat.front()));
    total += std::exp(w);
  }
  CHECK(total == doctest::Approx(1.0));
  const std::vector<double> strong = g_grid_log_weights(h, 1, 1.0, 1000.0);
  total = 0.0;
  for (double w : strong) total += std::exp(w);
  CHECK(total == doctest::Approx(1.0));
  const auto mode = std::max_element(strong.begin(), strong.end()) - strong.begin();
  CHECK(grid[static_cast<std::size_t>(mode)] >= 0.9);
  CHECK_THROWS_AS(VSHypers{2.0}.validate(), Error);
}

TEST_CASE("g update depends on the design only through the quadratic form") {
  const Problem pr = make_problem(30, 2, {1.0, -1.0}, 13);
  const RegressionDesign d(pr.x, pr.y);
  const RegressionDesign scaled(3.0 * pr.x, pr.y);
  const Eigen::Vector2d beta(0.7, -0.4);
  const double q1 = beta.dot(d.xtx() * beta);
  const Eigen::Vector2d beta_scaled = beta / 3.0;
  const double q2 = beta_scaled.dot(scaled.xtx() * beta_scaled);
  const auto w1 = g_grid_log_weights(VSHypers{}, 2, 1.3, q1);
  const auto w2 = g_grid_log_weights(VSHypers{}, 2, 1.3, q2);
  REQUIRE(w1.size() == w2.size());
  for (std::size_t i = 0; i < w1.size(); ++i) CHECK(w1[i] == doctest::Approx(w2[i]).epsilon(1e-12));
}

TEST_CASE("sampler reproduces exact clique posteriors on a small problem") {
  const Problem pr = make_problem(40, 4, {0.45, 0.0, 0.0, -0.35}, 21, 0.2);
  const CliqueSet cs = clique_set({{0, 1, 2}, {2, 3}}, 4);
  VSHypers h;
  VSMcmcConfig cfg;
  cfg.iterations = 22000;
  cfg.burn_in = 2000;
  Rng rng(8);
  const PosteriorSummary s = run_vs_mcmc(RegressionDesign(pr.x, pr.y), cs, h, cfg, rng);
  const oracle::Enumeration e = oracle::enumerate_cliques(pr.x, pr.y, cs.cliques, h.a, h.a_pi, h.b_pi);
  for (int k = 0; k < 2; ++k) CHECK(std::abs(s.clique_incl[k] - e.clique_incl[static_cast<std::size_t>(k)]) < 0.03);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(s.var_incl[j] - e.var_incl[static_cast<std::size_t>(j)]) < 0.03);
}

TEST_CASE("singleton cliques reproduce the independent-selection posterior") {
  const Problem pr = make_problem(50, 5, {0.5, 0.0, -0.3, 0.0, 0.0}, 31);
  VSHypers h;
  VSMcmcConfig cfg;
  cfg.iterations = 22000;
  cfg.burn_in = 2000;
  Rng rng(9);
  const CliqueSet cs = singletons(5);
  const PosteriorSummary s = run_vs_mcmc(RegressionDesign(pr.x, pr.y), cs, h, cfg, rng);
  const oracle::Enumeration e = oracle::enumerate_cliques(pr.x, pr.y, cs.cliques, h.a, h.a_pi, h.b_pi);
  for (int j = 0; j < 5; ++j) {
    CHECK(std::abs(s.var_incl[j] - e.var_incl[static_cast<std::size_t>(j)]) < 0.03);
    CHECK(s.var_incl[j] == s.clique_incl[j]);
  }
}

TEST_CASE("variable inclusion dominates its cliques and chains are reproducible") {
  const Problem pr = make_problem(60, 6, {0.8, 0.0, 0.4, 0.0, 0.0, -0.6}, 41);
  const CliqueSet cs = clique_set({{0, 1}, {1, 2, 3}, {3, 4}, {5}}, 6);
  VSMcmcConfig cfg;
  cfg.iterations = 1500;
  cfg.burn_in = 500;
  cfg.thin = 2;
  int calls = 0;
  cfg.observer = [&](int, const VSChainState& st) {
    ++calls;
    REQUIRE(st.gamma == variables_from_cliques(st.gamma_c, cs, 6));
    for (int j = 0; j < 6; ++j) {
      if (!st.gamma[static_cast<std::size_t>(j)]) REQUIRE(st.beta[j] == 0.0);
    }
    REQUIRE(st.eta > 0.0);
    REQUIRE(st.pi > 0.0);
    REQUIRE(st.pi < 1.0);
  };
  Rng a(10);
  const PosteriorSummary s1 = run_vs_mcmc(RegressionDesign(pr.x, pr.y), cs, VSHypers{}, cfg, a);
  CHECK(calls == 1500);
  CHECK(s1.draws.beta.rows() == 500);
  for (std::size_t k = 0; k < cs.q(); ++k) {
    for (int j : cs.cliques[k]) CHECK(s1.var_incl[j] >= s1.clique_incl[static_cast<Eigen::Index>(k)] - 1e-12);
  }
  cfg.observer = nullptr;
  Rng b(10);
  const PosteriorSummary s2 = run_vs_mcmc(RegressionDesign(pr.x, pr.y), cs, VSHypers{}, cfg, b);
  CHECK(s1.var_incl == s2.var_incl);
  CHECK(s1.draws.beta == s2.draws.beta);
}

TEST_CASE("null model prediction is the mean with a normal interval") {
  PosteriorSummary s;
  const int m = 100;
  s.draws.beta = Eigen::MatrixXd::Zero(m, 2);
  s.draws.eta = Eigen::VectorXd::Constant(m, 4.0);
  s.alpha_hat = 3.5;
  s.x_means = Eigen::Vector2d(1.0, -1.0);
  const PredictiveInterval pi = predict_bma(s, Eigen::Vector2d(10.0, 7.0));
  CHECK(pi.mean == 3.5);
  CHECK(pi.lower95 == doctest::Approx(3.5 - 1.959963984540054 / 2.0).epsilon(1e-9));
  CHECK(pi.upper95 == doctest::Approx(3.5 + 1.959963984540054 / 2.0).epsilon(1e-9));
  CHECK_THROWS_AS(predict_bma(s, Eigen::Vector3d::Zero()), Error);
  s.draws.beta.resize(0, 2);
  s.draws.eta.resize(0);
  try {
    predict_bma(s, Eigen::Vector2d::Zero());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::empty_chain);
  }
}

TEST_CASE("predictive interval covers the mixture quantiles") {
  PosteriorSummary s;
  s.draws.beta.resize(2, 1);
  s.draws.beta << -1.0, 1.0;
  s.draws.eta = Eigen::Vector2d(1.0, 1.0);
  s.x_means = Eigen::VectorXd::Zero(1);
  const PredictiveInterval pi = predict_bma(s, Eigen::VectorXd::Constant(1, 1.0));
  CHECK(pi.mean == doctest::Approx(0.0).scale(1.0));
  const auto phi = [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); };
  const auto cdf = [&](double y) { return 0.5 * (phi(y + 1.0) + phi(y - 1.0)); };
  CHECK(cdf(pi.lower95) == doctest::Approx(0.025).epsilon(1e-9));
  CHECK(cdf(pi.upper95) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(pi.upper95 == doctest::Approx(-pi.lower95));
}

TEST_CASE("FDR selection example") {
  CHECK(fdr_threshold(Eigen::Vector4d(0.99, 0.98, 0.9, 0.5), 0.1) == std::vector<int>{0, 1, 2});
  CHECK(fdr_threshold(Eigen::Vector3d(0.3, 0.2, 0.6), 0.1).empty());
  Eigen::VectorXd probs(5);
  probs << 0.5, 0.95, 0.1, 0.9, 0.98;
  CHECK(fdr_threshold(probs, 0.1) == std::vector<int>{1, 3, 4});
  CHECK(fdr_threshold(probs, 0.01) == std::vector<int>{});
  CHECK(fdr_threshold(probs, 0.2) == std::vector<int>{0, 1, 3, 4});
  CHECK(fdr_threshold(probs, 1.0).size() == 5);
}

TEST_CASE("FDR selection grows with the level") {
  Rng rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd probs(20);
    for (int j = 0; j < 20; ++j) probs[j] = rng.uniform();
    std::vector<int> prev;
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.05) {
      const std::vector<int> cur = fdr_threshold(probs, alpha);
      REQUIRE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      double mean = 0.0;
      for (int j : cur) mean += 1.0 - probs[j];
      if (!cur.empty()) REQUIRE(mean / cur.size() <= alpha + 1e-12);
      prev = cur;
    }
  }
}
