#include "bvssl/simbench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "bvssl/error.hpp"

namespace bvssl {
namespace {

constexpr int kBlockSize = 4;
constexpr int kArBlock = 8;
constexpr double kStrongCorr = 0.95;
constexpr double kModerateCorr = 0.7;
constexpr double kEdgeTolerance = 1e-4;

const double kCoefA[] = {0.3, -0.7, 1.1, -0.05, 0.1, 0.2, -1.2, 1.5};
const double kCoefB[] = {0.3, 0.7, 1.1, 0.05, -0.1, -0.2, -1.2, -1.5};

// Diagonal 1, three 4x4 exchangeable blocks (0.95, 0.7, 0.7), identity after.
Eigen::MatrixXd block_matrix(int p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p);
  const double off[] = {kStrongCorr, kModerateCorr, kModerateCorr};
  for (int b = 0; b < 3; ++b) {
    for (int i = 0; i < kBlockSize; ++i) {
      for (int j = 0; j < kBlockSize; ++j) {
        if (i != j) m(b * kBlockSize + i, b * kBlockSize + j) = off[b];
      }
    }
  }
  return m;
}

// 0.95^|i-j| on the first eight coordinates, identity after.
Eigen::MatrixXd ar_matrix(int p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p);
  for (int i = 0; i < kArBlock; ++i) {
    for (int j = 0; j < kArBlock; ++j) m(i, j) = std::pow(kStrongCorr, std::abs(i - j));
  }
  return m;
}

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& m) {
  const Eigen::LLT<Eigen::MatrixXd> chol(m);
  if (chol.info() != Eigen::Success) {
    throw Error(ErrorKind::construction, "matrix is not positive definite");
  }
  return chol.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

struct Sweep {
  int positives = 0;
  int negatives = 0;
  // Cumulative (tp, fp) after each group of tied scores, best score first.
  std::vector<std::pair<int, int>> steps;
};

Sweep sweep_scores(const Eigen::Ref<const Eigen::VectorXd>& scores, const std::vector<int>& truth) {
  if (static_cast<std::size_t>(scores.size()) != truth.size()) {
    throw Error(ErrorKind::validation, "scores and truth differ in length");
  }
  Sweep s;
  for (int t : truth) (t ? s.positives : s.negatives) += 1;
  if (s.positives == 0 || s.negatives == 0) {
    throw Error(ErrorKind::undefined_metric, "truth needs at least one positive and one negative");
  }
  std::vector<int> order(truth.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
  int tp = 0;
  int fp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (truth[static_cast<std::size_t>(order[k])] ? tp : fp) += 1;
    if (k + 1 == order.size() || scores[order[k + 1]] != scores[order[k]]) s.steps.emplace_back(tp, fp);
  }
  return s;
}

}  // namespace

CaseId parse_case_id(const std::string& text) {
  if (text == "Ia" || text == "I(a)" || text == "ia") return CaseId::Ia;
  if (text == "Ib" || text == "I(b)" || text == "ib") return CaseId::Ib;
  if (text == "Ic" || text == "I(c)" || text == "ic") return CaseId::Ic;
  if (text == "Id" || text == "I(d)" || text == "id") return CaseId::Id;
  throw Error(ErrorKind::validation, "unknown simulation case '" + text + "' (use Ia, Ib, Ic, Id)");
}

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::Ia: return "Ia";
    case CaseId::Ib: return "Ib";
    case CaseId::Ic: return "Ic";
    case CaseId::Id: return "Id";
  }
  return "?";
}

SimCase make_sim_case(CaseId id, int p, int n_train, int n_test) {
  if (p < 14) throw Error(ErrorKind::validation, "simulation cases need p >= 14");
  if (n_train < 2 || n_test < 1) throw Error(ErrorKind::validation, "sample sizes too small");
  SimCase c;
  c.id = id;
  c.p = p;
  c.n_train = n_train;
  c.n_test = n_test;
  switch (id) {
    case CaseId::Ia: c.sigma_truth = inverse_spd(block_matrix(p)); break;
    case CaseId::Ib: c.sigma_truth = block_matrix(p); break;
    case CaseId::Ic: c.sigma_truth = inverse_spd(ar_matrix(p)); break;
    case CaseId::Id: c.sigma_truth = ar_matrix(p); break;
  }
  if (Eigen::LLT<Eigen::MatrixXd>(c.sigma_truth).info() != Eigen::Success) {
    throw Error(ErrorKind::construction, "true covariance is not positive definite");
  }
  const double* coef = (id == CaseId::Ia || id == CaseId::Ic) ? kCoefA : kCoefB;
  c.beta_truth = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < 8; ++j) c.beta_truth[j] = coef[j];
  c.beta_truth[p - 2] = 1.0;
  c.beta_truth[p - 1] = -1.0;
  c.gamma_truth.assign(static_cast<std::size_t>(p), 0);
  for (int j = 0; j < p; ++j) c.gamma_truth[static_cast<std::size_t>(j)] = c.beta_truth[j] != 0.0 ? 1 : 0;
  for (int j = 4; j < 13; ++j) c.ordinal_cols.push_back(j);
  c.ordinal_cutpoints = {-1.5, -0.5, 0.5, 1.5};
  return c;
}

Eigen::MatrixXi true_graph(const Eigen::MatrixXd& sigma) {
  const Eigen::MatrixXd precision = inverse_spd(sigma);
  const Eigen::Index p = sigma.rows();
  Eigen::MatrixXi g = Eigen::MatrixXi::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j && std::abs(precision(i, j)) > kEdgeTolerance) g(i, j) = 1;
    }
  }
  return g;
}

SimData generate_case(const SimCase& c, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::MatrixXd chol = c.sigma_truth.llt().matrixL();
  const int levels = static_cast<int>(c.ordinal_cutpoints.size()) + 1;
  std::vector<ColumnSpec> columns(static_cast<std::size_t>(c.p));
  std::vector<bool> ordinal(static_cast<std::size_t>(c.p), false);
  for (int j : c.ordinal_cols) ordinal[static_cast<std::size_t>(j)] = true;
  for (int j = 0; j < c.p; ++j) {
    auto& col = columns[static_cast<std::size_t>(j)];
    col.name = "x" + std::to_string(j + 1);
    col.kind = ordinal[static_cast<std::size_t>(j)] ? ColumnKind::ordinal : ColumnKind::continuous;
    col.levels = ordinal[static_cast<std::size_t>(j)] ? levels : 0;
  }
  const auto draw = [&](int rows, Eigen::VectorXd& y) {
    Eigen::MatrixXd codes(rows, c.p);
    Eigen::MatrixXd observed(rows, c.p);
    for (int i = 0; i < rows; ++i) {
      const Eigen::VectorXd latent = chol * rng.standard_normal_vector(c.p);
      for (int j = 0; j < c.p; ++j) {
        if (ordinal[static_cast<std::size_t>(j)]) {
          int code = 0;
          for (double cut : c.ordinal_cutpoints) code += latent[j] > cut ? 1 : 0;
          observed(i, j) = code;
          codes(i, j) = code + 1;
        } else {
          observed(i, j) = codes(i, j) = latent[j];
        }
      }
    }
    y = observed * c.beta_truth;
    for (int i = 0; i < rows; ++i) y[i] += c.noise_sd * rng.normal();
    return MixedDataset(codes, columns);
  };
  SimData out;
  out.train = draw(c.n_train, out.y_train);
  out.test = draw(c.n_test, out.y_test);
  out.graph = true_graph(c.sigma_truth);
  return out;
}

CurveSummary roc_prc_auc(const Eigen::Ref<const Eigen::VectorXd>& scores,
                         const std::vector<int>& truth) {
  const Sweep s = sweep_scores(scores, truth);
  CurveSummary out;
  out.roc.push_back({0.0, 0.0});
  double prev_fpr = 0.0;
  double prev_tpr = 0.0;
  double prev_recall = 0.0;
  for (const auto& [tp, fp] : s.steps) {
    const double tpr = static_cast<double>(tp) / s.positives;
    const double fpr = static_cast<double>(fp) / s.negatives;
    const double precision = static_cast<double>(tp) / (tp + fp);
    out.auc_roc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
    out.auc_prc += (tpr - prev_recall) * precision;
    out.roc.push_back({fpr, tpr});
    out.prc.push_back({tpr, precision});
    prev_fpr = fpr;
    prev_tpr = tpr;
    prev_recall = tpr;
  }
  return out;
}

double power_at_fdr(const Eigen::Ref<const Eigen::VectorXd>& scores, const std::vector<int>& truth,
                    double level) {
  const Sweep s = sweep_scores(scores, truth);
  double power = 0.0;
  for (const auto& [tp, fp] : s.steps) {
    const double specificity = 1.0 - static_cast<double>(fp) / s.negatives;
    if (specificity >= 1.0 - level - 1e-12) power = static_cast<double>(tp) / s.positives;
  }
  return power;
}

std::vector<int> median_probability_model(const Eigen::Ref<const Eigen::VectorXd>& incl) {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < incl.size(); ++j) {
    if (incl[j] > 0.5) out.push_back(static_cast<int>(j));
  }
  return out;
}

SimMetrics evaluate_replicate(const MethodOutput& output, const std::vector<int>& truth,
                              const Eigen::Ref<const Eigen::VectorXd>& y_test, CurveSummary* curves) {
  if (static_cast<std::size_t>(output.scores.size()) != truth.size()) {
    throw Error(ErrorKind::incomplete_method, "method produced no inclusion score per variable");
  }
  if (output.predictions.size() != static_cast<std::size_t>(y_test.size())) {
    throw Error(ErrorKind::incomplete_method, "method produced no prediction per test row");
  }
  SimMetrics m;
  CurveSummary c = roc_prc_auc(output.scores, truth);
  m.auc_roc = c.auc_roc;
  m.auc_prc = c.auc_prc;
  m.power_at_10 = power_at_fdr(output.scores, truth, 0.10);
  m.ms = static_cast<int>(output.selected.size());
  for (int j : output.selected) m.fp += truth[static_cast<std::size_t>(j)] ? 0 : 1;
  double sq = 0.0;
  int covered = 0;
  for (Eigen::Index i = 0; i < y_test.size(); ++i) {
    const PredictiveInterval& pred = output.predictions[static_cast<std::size_t>(i)];
    sq += (y_test[i] - pred.mean) * (y_test[i] - pred.mean);
    covered += (pred.lower95 <= y_test[i] && y_test[i] <= pred.upper95) ? 1 : 0;
  }
  m.mspe = sq / static_cast<double>(y_test.size());
  m.cov95 = static_cast<double>(covered) / static_cast<double>(y_test.size());
  if (curves) *curves = std::move(c);
  return m;
}

Eigen::MatrixXi misspecify_graph(const Eigen::MatrixXi& truth, int count, Rng& rng) {
  const Eigen::Index p = truth.rows();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
  }
  if (count < 0 || static_cast<std::size_t>(count) > pairs.size()) {
    throw Error(ErrorKind::validation, "cannot flip " + std::to_string(count) + " of " +
                                           std::to_string(pairs.size()) + " vertex pairs");
  }
  Eigen::MatrixXi out = truth;
  for (int k = 0; k < count; ++k) {
    const auto remaining = pairs.size() - static_cast<std::size_t>(k);
    const auto pick = static_cast<std::size_t>(k) +
                      std::min(remaining - 1, static_cast<std::size_t>(rng.uniform() * remaining));
    std::swap(pairs[static_cast<std::size_t>(k)], pairs[pick]);
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    out(i, j) = out(j, i) = 1 - out(i, j);
  }
  return out;
}

ReplicateResult run_replicate(const SimCase& c, const BenchConfig& config, int replicate) {
  const auto r = static_cast<std::uint64_t>(replicate);
  const SimData data = generate_case(c, derive_seed(config.seed, 2 * r));
  Rng rng(derive_seed(config.seed, 2 * r + 1));

  PriorGraph prior = PriorGraph::empty(c.p);
  if (config.prior_mode == PriorMode::truth) {
    prior = PriorGraph::from_adjacency(data.graph, config.kappa);
  } else if (config.prior_mode == PriorMode::misspecified) {
    Rng prior_rng(derive_seed(config.seed ^ 0x5DEECE66DULL, r));
    prior = PriorGraph::from_adjacency(misspecify_graph(data.graph, config.misspecified_edges, prior_rng),
                                       config.kappa);
  }
  const PipelineResult fit = config.method == MethodKind::ssvs
                                 ? run_independent_selection(data.train, data.y_train, config.pipeline, rng)
                                 : run_pipeline(data.train, data.y_train, prior, config.pipeline, rng);

  MethodOutput output;
  output.scores = fit.posterior.var_incl;
  output.selected = median_probability_model(fit.posterior.var_incl);
  output.predictions = fit.predict(data.test);

  ReplicateResult result;
  result.replicate = replicate;
  result.metrics = evaluate_replicate(output, c.gamma_truth, data.y_test, &result.curves);
  result.var_incl = fit.posterior.var_incl;
  result.estimated_graph = fit.graph.estimate.adjacency;
  return result;
}

std::vector<ReplicateResult> run_benchmark(const SimCase& c, const BenchConfig& config) {
  if (config.replicates < 1) throw Error(ErrorKind::validation, "need at least one replicate");
  std::vector<ReplicateResult> results(static_cast<std::size_t>(config.replicates));
  const int workers = std::max(1, std::min(config.threads, config.replicates));
  if (workers == 1) {
    for (int r = 0; r < config.replicates; ++r) results[static_cast<std::size_t>(r)] = run_replicate(c, config, r);
    return results;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < config.replicates; r = next++) {
        try {
          results[static_cast<std::size_t>(r)] = run_replicate(c, config, r);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

SweepResult belief_sweep(const SimCase& c, const std::vector<double>& kappa_grid,
                         const BenchConfig& config) {
  SweepResult out;
  for (double kappa : kappa_grid) {
    BenchConfig run = config;
    run.kappa = kappa;
    run.method = MethodKind::bvs_sl;
    run.prior_mode = config.misspecified_edges > 0 ? PriorMode::misspecified : PriorMode::truth;
    const std::vector<ReplicateResult> reps = run_benchmark(c, run);
    SweepEntry mean{kappa, -1, 0.0, 0.0};
    for (const ReplicateResult& rep : reps) {
      out.entries.push_back({kappa, rep.replicate, rep.metrics.auc_roc, rep.metrics.auc_prc});
      mean.auc_roc += rep.metrics.auc_roc / static_cast<double>(reps.size());
      mean.auc_prc += rep.metrics.auc_prc / static_cast<double>(reps.size());
    }
    out.means.push_back(mean);
  }
  return out;
}

}  // namespace bvssl
