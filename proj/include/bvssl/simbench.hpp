#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvssl/mixed_latent.hpp"
#include "bvssl/pipeline.hpp"
#include "bvssl/structured_vs.hpp"

namespace bvssl {

enum class CaseId { Ia, Ib, Ic, Id };

CaseId parse_case_id(const std::string& text);
std::string to_string(CaseId id);

/// One simulation scenario: block-structured Gaussian covariates, nine of
/// which are thresholded into 0-4 codes, and a sparse linear response.
struct SimCase {
  CaseId id = CaseId::Ia;
  int p = 24;
  int n_train = 100;
  int n_test = 100;
  Eigen::MatrixXd sigma_truth;
  std::vector<int> gamma_truth;
  Eigen::VectorXd beta_truth;
  std::vector<int> ordinal_cols;
  std::vector<double> ordinal_cutpoints;
  double noise_sd = 1.0;
};

/// Builds the scenario; throws Error(construction) if the covariance is not
/// positive definite.
SimCase make_sim_case(CaseId id, int p = 24, int n_train = 100, int n_test = 100);

/// Edges with |Sigma^{-1}(i,j)| > 1e-4.
Eigen::MatrixXi true_graph(const Eigen::MatrixXd& sigma);

struct SimData {
  MixedDataset train;
  Eigen::VectorXd y_train;
  MixedDataset test;
  Eigen::VectorXd y_test;
  Eigen::MatrixXi graph;
};

SimData generate_case(const SimCase& sim_case, std::uint64_t seed);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct CurveSummary {
  double auc_roc = 0.0;
  double auc_prc = 0.0;
  /// (false positive rate, true positive rate) per distinct threshold.
  std::vector<CurvePoint> roc;
  /// (recall, precision) per distinct threshold.
  std::vector<CurvePoint> prc;
};

/// Trapezoidal ROC area and step-interpolated precision-recall area over the
/// threshold sweep of `scores`; tied scores enter together.
CurveSummary roc_prc_auc(const Eigen::Ref<const Eigen::VectorXd>& scores,
                         const std::vector<int>& truth);

/// Sensitivity at the most lenient threshold whose specificity is still
/// >= 1 - level.
double power_at_fdr(const Eigen::Ref<const Eigen::VectorXd>& scores, const std::vector<int>& truth,
                    double level = 0.10);

struct SimMetrics {
  double mspe = 0.0;
  double auc_roc = 0.0;
  double auc_prc = 0.0;
  double power_at_10 = 0.0;
  int ms = 0;
  int fp = 0;
  double cov95 = 0.0;
};

/// What a method hands to the evaluator.
struct MethodOutput {
  Eigen::VectorXd scores;
  std::vector<int> selected;
  std::vector<PredictiveInterval> predictions;
};

SimMetrics evaluate_replicate(const MethodOutput& output, const std::vector<int>& truth,
                              const Eigen::Ref<const Eigen::VectorXd>& y_test,
                              CurveSummary* curves = nullptr);

enum class PriorMode { none, truth, misspecified };
enum class MethodKind { bvs_sl, ssvs };

struct BenchConfig {
  PipelineConfig pipeline;
  MethodKind method = MethodKind::bvs_sl;
  PriorMode prior_mode = PriorMode::none;
  double kappa = 50.0;
  /// Number of flipped pairs for PriorMode::misspecified.
  int misspecified_edges = 0;
  int replicates = 5;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ReplicateResult {
  int replicate = 0;
  SimMetrics metrics;
  CurveSummary curves;
  Eigen::VectorXd var_incl;
  Eigen::MatrixXi estimated_graph;
};

/// Flips `count` distinct vertex pairs of a symmetric adjacency.
Eigen::MatrixXi misspecify_graph(const Eigen::MatrixXi& truth, int count, Rng& rng);

/// Point model by the median-probability rule.
std::vector<int> median_probability_model(const Eigen::Ref<const Eigen::VectorXd>& incl);

ReplicateResult run_replicate(const SimCase& sim_case, const BenchConfig& config, int replicate);
std::vector<ReplicateResult> run_benchmark(const SimCase& sim_case, const BenchConfig& config);

struct SweepEntry {
  double kappa = 0.0;
  int replicate = 0;
  double auc_roc = 0.0;
  double auc_prc = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  /// Per-kappa means, in kappa-grid order.
  std::vector<SweepEntry> means;
};

/// Pipeline AUCs across a belief grid using the true graph (or a
/// misspecified copy) as the prior. Replicate r uses the same data and chain
/// seeds for every kappa.
SweepResult belief_sweep(const SimCase& sim_case, const std::vector<double>& kappa_grid,
                         const BenchConfig& config);

}  // namespace bvssl
