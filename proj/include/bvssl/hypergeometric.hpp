#pragma once

namespace bvssl {

/// Natural log of the Gauss hypergeometric function 2F1(a, b; c; z) for
/// z in [0, 1). Summed as a rescaled power series, so arguments whose value
/// overflows a double (large a, z near 1) are still representable.
/// Throws Error(domain) outside [0, 1) or for c <= 0, and Error(accuracy)
/// if the series does not converge within the term budget.
double log_gauss_2f1(double a, double b, double c, double z);

/// exp(log_gauss_2f1(...)); +inf when the value exceeds double range.
double gauss_2f1(double a, double b, double c, double z);

}  // namespace bvssl
