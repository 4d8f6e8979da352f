#pragma once

namespace medineq {

/// Standard normal CDF, evaluated through erfc so that both tails keep
/// full relative precision.
double normal_cdf(double x);

/// Inverse of the standard normal CDF on the open interval (0, 1).
///
/// A rational starting approximation is polished by one Halley step
/// against `normal_cdf`; the result satisfies |Phi(x) - p| <= 1e-12 and is
/// exactly antisymmetric for arguments p and 1 - p whenever 1 - p is
/// representable. Throws ValidationError outside (0, 1).
double inverse_normal_cdf(double p);

/// Regularized lower incomplete gamma function P(alpha, x).
double regularized_lower_gamma(double alpha, double x);

/// Regularized upper incomplete gamma function Q(alpha, x) = 1 - P(alpha, x),
/// computed directly (not by subtraction) for x in the upper tail.
double regularized_upper_gamma(double alpha, double x);

/// Solves P(alpha, x) = p for x.
///
/// Uses a closed-form starting guess followed by a Newton iteration
/// safeguarded by a shrinking bisection bracket. For p > 1/2 the upper
/// function Q is matched instead so that quantiles deep in the right tail
/// keep their precision. Throws ValidationError for alpha <= 0 or p outside
/// (0, 1), and ComputationError after 200 iterations without convergence.
double inverse_regularized_gamma(double alpha, double p);

}  // namespace medineq
