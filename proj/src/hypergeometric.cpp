#include "bvssl/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvssl/error.hpp"

namespace bvssl {
namespace {

constexpr long kMaxTerms = 20'000'000;
constexpr double kRescale = 1e250;
const double kLogRescale = std::log(kRescale);
constexpr double kTolerance = 1e-17;

}  // namespace

double log_gauss_2f1(double a, double b, double c, double z) {
  if (!(z >= 0.0 && z < 1.0)) {
    throw Error(ErrorKind::domain, "2F1 argument z must lie in [0, 1)");
  }
  if (!(c > 0.0)) throw Error(ErrorKind::domain, "2F1 parameter c must be positive");
  if (z == 0.0) return 0.0;

  double log_scale = 0.0;
  double term = 1.0;
  double sum = 1.0;
  for (long k = 0; k < kMaxTerms; ++k) {
    const double kk = static_cast<double>(k);
    const double ratio = z * (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0));
    term *= ratio;
    if (term == 0.0) return std::log(sum) + log_scale;  // terminating series
    sum += term;
    if (std::max(std::abs(sum), std::abs(term)) > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      log_scale += kLogRescale;
    }
    const double r = std::max(std::abs(ratio), z);
    if (r < 1.0 && std::abs(term) * r / (1.0 - r) <= kTolerance * std::abs(sum)) {
      if (!(sum > 0.0)) throw Error(ErrorKind::domain, "2F1 series sums to a non-positive value");
      return std::log(sum) + log_scale;
    }
  }
  throw Error(ErrorKind::accuracy, "2F1 series failed to converge");
}

double gauss_2f1(double a, double b, double c, double z) {
  return std::exp(log_gauss_2f1(a, b, c, z));
}

}  // namespace bvssl
