#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bvssl/random.hpp"

namespace bvssl {

enum class ColumnKind { continuous, ordinal };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  /// Number of ordered levels M (ordinal columns only).
  int levels = 0;
};

/// Per-column affine map applied to continuous columns (ordinal columns keep
/// center 0, scale 1).
struct Standardization {
  Eigen::VectorXd center;
  Eigen::VectorXd scale;
};

/// n x p covariate matrix with per-column kind. Ordinal entries hold integer
/// category codes 1..M. Immutable after construction; safe to share across
/// chains.
class MixedDataset {
 public:
  MixedDataset() = default;
  /// Validates every invariant; throws Error(validation) naming the cell.
  MixedDataset(Eigen::MatrixXd values, std::vector<ColumnSpec> columns);

  Eigen::Index n() const { return values_.rows(); }
  Eigen::Index p() const { return values_.cols(); }
  const Eigen::MatrixXd& values() const { return values_; }
  const std::vector<ColumnSpec>& columns() const { return columns_; }
  const ColumnSpec& column(Eigen::Index j) const { return columns_[static_cast<std::size_t>(j)]; }
  bool is_ordinal(Eigen::Index j) const { return column(j).kind == ColumnKind::ordinal; }
  std::vector<Eigen::Index> ordinal_columns() const;
  bool standardized() const { return standardized_; }
  const Standardization& standardization() const { return standardization_; }

  /// Continuous columns centered and scaled to unit sd with this dataset's
  /// own moments. Constant columns are centered only.
  MixedDataset standardize() const;
  /// Applies an existing map (e.g. training moments applied to test rows).
  MixedDataset standardize_with(const Standardization& map) const;

 private:
  Eigen::MatrixXd values_;
  std::vector<ColumnSpec> columns_;
  bool standardized_ = false;
  Standardization standardization_;
};

/// Latent Gaussian representation: continuous columns copy the observed
/// values, ordinal columns carry latent z with per-column cutpoints
/// D_0 = -inf < D_1 < ... < D_M = +inf.
struct LatentState {
  Eigen::MatrixXd z;
  /// cutpoints[j] has M+1 entries for ordinal column j, empty otherwise.
  std::vector<std::vector<double>> cutpoints;
};

struct ConditionalNormal {
  double mean = 0.0;
  double variance = 1.0;
};

/// Full conditional of coordinate j of a N(0, omega^-1) vector given the rest.
ConditionalNormal conditional_latent_params(const Eigen::MatrixXd& omega,
                                            const Eigen::Ref<const Eigen::VectorXd>& row,
                                            Eigen::Index j);

/// Anchored cutpoint for the lowest interior threshold of an ordinal column:
/// the standard-normal quantile of the (smoothed) share of category 1.
double anchor_cutpoint(const MixedDataset& data, Eigen::Index j);

/// Starting state: cutpoints at normal quantiles of the cumulative category
/// shares (D_1 at the anchor), latent values at their bracket midpoints.
LatentState initial_latent_state(const MixedDataset& data);

/// Redraws every ordinal latent from its truncated full conditional.
LatentState sample_latent(LatentState state, const MixedDataset& data,
                          const Eigen::MatrixXd& omega, Rng& rng);

/// Uniform update of the free cutpoints D_2..D_{M-1}; D_1 stays anchored.
LatentState update_cutpoints(LatentState state, const MixedDataset& data, Rng& rng);

/// Throws Error(invariant_violation) if any ordinal cell leaves its bracket
/// or any cutpoint vector is not strictly increasing.
void check_latent_invariants(const LatentState& state, const MixedDataset& data);
/// Non-throwing count of violated brackets and non-monotone cutpoints.
std::size_t count_latent_violations(const LatentState& state, const MixedDataset& data);

}  // namespace bvssl
