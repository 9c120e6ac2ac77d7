#pragma once

#include <functional>
#include <span>

namespace qfid {

using Integrand = std::function<double(double)>;

/// Adaptive Simpson quadrature with absolute tolerance `tolerance`.
double adaptive_simpson(const Integrand& f, double a, double b, double tolerance,
                        int max_depth = 48);

/// Integrates f over [a, b] where f may carry integrable (e.g. logarithmic)
/// singularities at a and/or b. Uses the substitution
/// x = a + (b - a)(3u^2 - 2u^3), whose Jacobian vanishes at both ends, and
/// never evaluates f exactly at an endpoint. Bisection stops at depth
/// `max_depth` in u, which bounds the work when f is only known to rounding
/// accuracy next to an endpoint.
inline constexpr int kSingularMaxDepth = 30;
double integrate_endpoint_singular(const Integrand& f, double a, double b, double tolerance,
                                   int max_depth = kSingularMaxDepth);

/// Splits [a, b] at `breakpoints` (points outside (a, b) are ignored) and
/// integrates each piece with integrate_endpoint_singular. The tolerance is
/// shared evenly between pieces.
double integrate_piecewise(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints, double tolerance);

}  // namespace qfid
