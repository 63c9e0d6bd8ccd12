#pragma once

namespace vofde {

/// Gamma function for s > 0. Throws DomainError for s <= 0 or non-finite s.
double gamma(double s);

/// Unregularized lower incomplete gamma function
///   γ(s, x) = ∫_0^x t^{s-1} e^{-t} dt,   s > 0, x >= 0.
/// Throws DomainError on invalid arguments and ConvergenceError when the
/// underlying series / continued fraction fails to converge.
double lower_incomplete_gamma(double s, double x);

}  // namespace vofde
