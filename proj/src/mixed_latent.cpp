#include "bvssl/mixed_latent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bvssl/error.hpp"

namespace bvssl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int category_of(double code) { return static_cast<int>(std::lround(code)); }

std::vector<double> category_shares(const MixedDataset& data, Eigen::Index j) {
  const int levels = data.column(j).levels;
  std::vector<double> counts(static_cast<std::size_t>(levels), 0.5);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    counts[static_cast<std::size_t>(category_of(data.values()(i, j)) - 1)] += 1.0;
  }
  const double total = static_cast<double>(data.n()) + 0.5 * levels;
  for (double& c : counts) c /= total;
  return counts;
}

}  // namespace

MixedDataset::MixedDataset(Eigen::MatrixXd values, std::vector<ColumnSpec> columns)
    : values_(std::move(values)), columns_(std::move(columns)) {
  if (static_cast<Eigen::Index>(columns_.size()) != values_.cols()) {
    throw Error(ErrorKind::validation, "column spec count does not match matrix width");
  }
  for (Eigen::Index j = 0; j < p(); ++j) {
    const ColumnSpec& spec = column(j);
    if (spec.kind == ColumnKind::ordinal && spec.levels < 2) {
      throw Error(ErrorKind::validation,
                  "ordinal column '" + spec.name + "' needs at least 2 levels");
    }
    for (Eigen::Index i = 0; i < n(); ++i) {
      const double v = values_(i, j);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite value at row " << i + 1 << ", column '" << spec.name << "'";
        throw Error(ErrorKind::validation, msg.str());
      }
      if (spec.kind == ColumnKind::ordinal &&
          (v != std::round(v) || v < 1.0 || v > static_cast<double>(spec.levels))) {
        std::ostringstream msg;
        msg << "ordinal code " << v << " at row " << i + 1 << ", column '" << spec.name
            << "' is outside 1.." << spec.levels;
        throw Error(ErrorKind::validation, msg.str());
      }
    }
  }
  standardization_.center = Eigen::VectorXd::Zero(p());
  standardization_.scale = Eigen::VectorXd::Ones(p());
}

std::vector<Eigen::Index> MixedDataset::ordinal_columns() const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index j = 0; j < p(); ++j) {
    if (is_ordinal(j)) out.push_back(j);
  }
  return out;
}

MixedDataset MixedDataset::standardize() const {
  Standardization map;
  map.center = Eigen::VectorXd::Zero(p());
  map.scale = Eigen::VectorXd::Ones(p());
  for (Eigen::Index j = 0; j < p(); ++j) {
    if (is_ordinal(j) || n() == 0) continue;
    const double mean = values_.col(j).mean();
    double ss = (values_.col(j).array() - mean).square().sum();
    const double sd = n() > 1 ? std::sqrt(ss / static_cast<double>(n() - 1)) : 0.0;
    map.center[j] = mean;
    map.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return standardize_with(map);
}

MixedDataset MixedDataset::standardize_with(const Standardization& map) const {
  MixedDataset out = *this;
  for (Eigen::Index j = 0; j < p(); ++j) {
    if (is_ordinal(j)) continue;
    out.values_.col(j) = (values_.col(j).array() - map.center[j]) / map.scale[j];
  }
  out.standardization_ = map;
  out.standardized_ = true;
  return out;
}

ConditionalNormal conditional_latent_params(const Eigen::MatrixXd& omega,
                                            const Eigen::Ref<const Eigen::VectorXd>& row,
                                            Eigen::Index j) {
  if (j < 0 || j >= omega.rows()) {
    throw Error(ErrorKind::domain, "conditional coordinate out of range");
  }
  const double wjj = omega(j, j);
  if (!(wjj > 0.0)) {
    throw Error(ErrorKind::invalid_precision, "non-positive precision diagonal at coordinate " +
                                                  std::to_string(j + 1));
  }
  const double cross = omega.row(j).dot(row) - wjj * row[j];
  return {-cross / wjj, 1.0 / wjj};
}

double anchor_cutpoint(const MixedDataset& data, Eigen::Index j) {
  return normal_quantile(category_shares(data, j).front());
}

LatentState initial_latent_state(const MixedDataset& data) {
  LatentState state;
  state.z = data.values();
  state.cutpoints.assign(static_cast<std::size_t>(data.p()), {});
  for (Eigen::Index j : data.ordinal_columns()) {
    const int levels = data.column(j).levels;
    const std::vector<double> shares = category_shares(data, j);
    std::vector<double>& cut = state.cutpoints[static_cast<std::size_t>(j)];
    cut.assign(static_cast<std::size_t>(levels) + 1, 0.0);
    cut.front() = -kInf;
    cut.back() = kInf;
    double cumulative = 0.0;
    for (int l = 1; l < levels; ++l) {
      cumulative += shares[static_cast<std::size_t>(l - 1)];
      cut[static_cast<std::size_t>(l)] = normal_quantile(cumulative);
    }
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const auto l = static_cast<std::size_t>(category_of(data.values()(i, j)));
      const double lo = cut[l - 1];
      const double hi = cut[l];
      double z = 0.0;
      if (std::isinf(lo)) {
        z = hi - 0.5;
      } else if (std::isinf(hi)) {
        z = lo + 0.5;
      } else {
        z = 0.5 * (lo + hi);
      }
      state.z(i, j) = z;
    }
  }
  return state;
}

LatentState sample_latent(LatentState state, const MixedDataset& data,
                          const Eigen::MatrixXd& omega, Rng& rng) {
  const std::vector<Eigen::Index> ordinal = data.ordinal_columns();
  if (ordinal.empty()) return state;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j : ordinal) {
      const std::vector<double>& cut = state.cutpoints[static_cast<std::size_t>(j)];
      const auto l = static_cast<std::size_t>(category_of(data.values()(i, j)));
      const double lo = cut[l - 1];
      const double hi = cut[l];
      if (!(lo < hi)) {
        std::ostringstream msg;
        msg << "empty truncation interval [" << lo << ", " << hi << ") for column " << j + 1
            << ", category " << l;
        throw Error(ErrorKind::invariant_violation, msg.str());
      }
      const Eigen::VectorXd row = state.z.row(i).transpose();
      const ConditionalNormal cond = conditional_latent_params(omega, row, j);
      state.z(i, j) = rng.truncated_normal(cond.mean, std::sqrt(cond.variance), lo, hi);
    }
  }
  return state;
}

LatentState update_cutpoints(LatentState state, const MixedDataset& data, Rng& rng) {
  for (Eigen::Index j : data.ordinal_columns()) {
    const int levels = data.column(j).levels;
    if (levels <= 2) continue;
    std::vector<double> level_max(static_cast<std::size_t>(levels) + 1, -kInf);
    std::vector<double> level_min(static_cast<std::size_t>(levels) + 1, kInf);
    std::vector<bool> seen(static_cast<std::size_t>(levels) + 1, false);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const auto l = static_cast<std::size_t>(category_of(data.values()(i, j)));
      const double z = state.z(i, j);
      level_max[l] = std::max(level_max[l], z);
      level_min[l] = std::min(level_min[l], z);
      seen[l] = true;
    }
    std::vector<double>& cut = state.cutpoints[static_cast<std::size_t>(j)];
    for (int l = 2; l < levels; ++l) {
      const auto ul = static_cast<std::size_t>(l);
      const double z_lower = seen[ul] ? level_max[ul] : cut[ul - 1];
      const double z_upper = seen[ul + 1] ? level_min[ul + 1] : cut[ul + 1];
      if (z_lower > z_upper) {
        std::ostringstream msg;
        msg << "cutpoint bounds crossed in column " << j + 1 << " at level " << l << " ("
            << z_lower << " > " << z_upper << ")";
        throw Error(ErrorKind::data_corruption, msg.str());
      }
      cut[ul] = z_lower + rng.uniform_open() * (z_upper - z_lower);
    }
  }
  return state;
}

std::size_t count_latent_violations(const LatentState& state, const MixedDataset& data) {
  std::size_t violations = 0;
  for (Eigen::Index j : data.ordinal_columns()) {
    const std::vector<double>& cut = state.cutpoints[static_cast<std::size_t>(j)];
    for (std::size_t l = 1; l < cut.size(); ++l) {
      if (!(cut[l - 1] < cut[l])) ++violations;
    }
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const auto l = static_cast<std::size_t>(category_of(data.values()(i, j)));
      const double z = state.z(i, j);
      if (!(cut[l - 1] <= z && z < cut[l])) ++violations;
    }
  }
  return violations;
}

void check_latent_invariants(const LatentState& state, const MixedDataset& data) {
  const std::size_t violations = count_latent_violations(state, data);
  if (violations > 0) {
    throw Error(ErrorKind::invariant_violation,
                std::to_string(violations) + " latent bracket/cutpoint violations");
  }
}

}  // namespace bvssl
