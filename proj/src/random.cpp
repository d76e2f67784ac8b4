#include "bvssl/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/erf.hpp>

namespace bvssl {
namespace {

constexpr double kTailCut = 4.0;

// Robert (1995) exponential-proposal rejection sampler for N(0,1) on
// [lower, upper) with lower >= kTailCut.
double right_tail_normal(Rng& rng, double lower, double upper) {
  const double alpha = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  if (alpha * (upper - lower) < 1.0) {
    // Narrow window: uniform proposal, acceptance >= exp(-1) here.
    for (;;) {
      const double z = lower + (upper - lower) * rng.uniform();
      if (std::log(rng.uniform_open()) <= 0.5 * (lower * lower - z * z)) return z;
    }
  }
  for (;;) {
    const double z = lower - std::log(rng.uniform_open()) / alpha;
    if (z >= upper) continue;
    const double d = z - alpha;
    if (std::log(rng.uniform_open()) <= -0.5 * d * d) return z;
  }
}

}  // namespace

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::uniform_open() {
  double u = 0.0;
  do {
    u = uniform();
  } while (u <= 0.0);
  return u;
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

double Rng::gamma(double shape, double rate) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  double draw = x / (x + y);
  if (!(x + y > 0.0)) draw = a / (a + b);
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::clamp(draw, lo, hi);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::inverse_gaussian(double mean, double shape) {
  // Michael, Schucany & Haas; the root is written in a cancellation-free form
  // so that very large means (tiny |omega|) stay accurate.
  const double nu = normal();
  const double y = nu * nu;
  if (y == 0.0) return mean;
  const double my = mean * y;
  const double s = std::sqrt(4.0 * mean * shape * y + my * my);
  const double root = mean * (4.0 * shape * mean * y) / ((s + my) * (s + my));
  return (uniform() <= mean / (mean + root)) ? root : mean * mean / root;
}

double Rng::truncated_normal(double mean, double sd, double lower, double upper) {
  const double a = (lower - mean) / sd;
  const double b = (upper - mean) / sd;
  double z = 0.0;
  if (a >= kTailCut) {
    z = right_tail_normal(*this, a, b);
  } else if (b <= -kTailCut) {
    z = -right_tail_normal(*this, -b, -a);
  } else if (a > 0.0) {
    // Right of the mode: work with upper-tail probabilities.
    const double qa = normal_cdf(-a);
    const double qb = normal_cdf(-b);
    z = -normal_quantile(qa - uniform_open() * (qa - qb));
  } else {
    const double pa = normal_cdf(a);
    const double pb = normal_cdf(b);
    z = normal_quantile(pa + uniform_open() * (pb - pa));
  }
  double x = mean + sd * std::clamp(z, a, b);
  if (x >= upper) x = std::nextafter(upper, -std::numeric_limits<double>::infinity());
  if (x < lower) x = lower;
  return x;
}

Eigen::VectorXd Rng::standard_normal_vector(Eigen::Index size) {
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = normal();
  return v;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace bvssl
