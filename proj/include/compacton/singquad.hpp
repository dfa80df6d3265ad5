#pragma once

#include <cstddef>
#include <functional>

namespace compacton {

/// Default absolute tolerance of the singular quadrature.
inline constexpr double kDefaultQuadTol = 1e-12;

/// Evaluation point handed to an integrand. Besides the abscissa it carries
/// the distances to both interval ends, computed without cancellation, so
/// integrands like 1/sqrt(1 - z^q) can be evaluated accurately next to z = 1.
struct QuadPoint {
    double x;
    double from_left;
    double from_right;
};

/// Integrand on the open interval (a, b) with algebraic end blow-up
/// |x - a|^{-left_exponent} and |b - x|^{-right_exponent}, both exponents in [0, 1).
struct SingularIntegrand {
    std::function<double(const QuadPoint&)> evaluator;
    double a = 0.0;
    double b = 1.0;
    double left_exponent = 0.0;
    double right_exponent = 0.0;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
};

/// Default relative tolerance; the sum of Gauss-Kronrod roundoff floors of
/// positive integrands sits near 1e-14 relative, so smaller values cannot be met.
inline constexpr double kDefaultRelTol = 5e-14;

/// Integrates f over (a, b). Each half interval is mapped by x = a + u^n
/// (resp. b - u^n) with n = 1/(1 - exponent) so the singular end becomes
/// bounded, then refined adaptively with Gauss-Kronrod 7/15 panels until the
/// summed error estimate is below max(tol, rel_tol |I|). Throws ConvergenceError carrying the
/// last estimate if the panel budget runs out.
QuadratureResult integrate_singular_detailed(const SingularIntegrand& f,
                                             double tol = kDefaultQuadTol,
                                             double rel_tol = kDefaultRelTol);

double integrate_singular(const SingularIntegrand& f, double tol = kDefaultQuadTol,
                          double rel_tol = kDefaultRelTol);

/// Convenience overload for integrands that only need the abscissa.
double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          double left_exponent, double right_exponent,
                          double tol = kDefaultQuadTol);

/// Adaptive Gauss-Kronrod 7/15 on [a, b] for a smooth integrand, starting
/// from a single panel; cheap on short intervals.
double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        double tol = kDefaultQuadTol, double rel_tol = kDefaultRelTol);

/// Root of a monotone g on [lo, hi] with g(lo) * g(hi) <= 0. Illinois-style
/// false position, falling back to bisection whenever the bracket stops
/// shrinking fast enough; the bracket is never lost. Returns once the bracket
/// is narrower than tol or g vanishes exactly.
double bracket_root(const std::function<double(double)>& g, double lo, double hi,
                    double tol);

}  // namespace compacton
