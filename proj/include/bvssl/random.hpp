#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace bvssl {

/// Random stream for one chain. Wraps a 64-bit Mersenne twister; every
/// sampler takes an `Rng&` so that runs are reproducible from a seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  double normal();
  /// Gamma with shape/rate parameterization (mean shape / rate).
  double gamma(double shape, double rate);
  /// Beta draw, clamped into the open unit interval.
  double beta(double a, double b);
  bool bernoulli(double p);
  /// Inverse-Gaussian (Wald) draw with the given mean and shape.
  double inverse_gaussian(double mean, double shape);
  /// Normal(mean, sd^2) truncated to [lower, upper); infinite bounds allowed.
  double truncated_normal(double mean, double sd, double lower, double upper);
  Eigen::VectorXd standard_normal_vector(Eigen::Index size);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Standard normal CDF and its inverse.
double normal_cdf(double x);
double normal_quantile(double p);

/// Seed for replicate/chain `stream` derived from a master seed (SplitMix64
/// finalizer), so parallel work gets independent, reproducible streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace bvssl
