#pragma once

#include <cstddef>
#include <vector>

namespace compacton {

/// Values sorted in decreasing order and placed centre-out, alternating right
/// and left of index (N-1)/2. Throws PreconditionError on negative entries.
std::vector<double> symmetric_decreasing_rearrange(const std::vector<double>& v);

/// v equals its rearrangement up to ties.
bool is_bell_shaped(const std::vector<double>& v);

/// N0[v] = 1/4 sum (v')^2 h + omega sum v h, with zero Dirichlet ghosts.
double grid_objective(const std::vector<double>& v, double h, double omega);
/// sum v^{p/2} h.
double grid_constraint(const std::vector<double>& v, double h, double p);

struct MinimizationOptions {
    double X = 0.0;             ///< half-width of the domain; <= 0 selects 1.5 L of the normalised wave
    std::size_t N = 2001;       ///< odd, >= 101
    std::size_t max_iter = 5000;
    double tol = 1e-14;         ///< relative objective decrease that ends the iteration
};

struct ConvergenceEntry {
    std::size_t iteration;
    double objective;
    double step;
};

struct MinimizationResult {
    double p = 0.0;
    double omega = 0.0;
    double X = 0.0;
    double h = 0.0;
    std::vector<double> x;
    std::vector<double> v;
    double m_est = 0.0;   ///< objective at the final iterate
    std::size_t iterations = 0;
    bool converged = false;
    bool monotone = true;  ///< every accepted objective was <= its predecessor
    std::vector<ConvergenceEntry> log;
};

/// Minimises N0 over bell-shaped v >= 0 with sum v^{p/2} h = 1.
///
/// Each step is a Sobolev-preconditioned gradient step projected onto the
/// tangent space of the constraint, restricted to the free set
/// {v > 0} or {gradient < 0}; the trial point is clamped at zero, rearranged
/// and renormalised, and accepted only if the objective does not increase
/// (otherwise the step halves).
MinimizationResult minimize(double p, double omega, const MinimizationOptions& options = {});

/// c = 1/2 sum (v')^2 h + omega sum v h on the minimiser. Throws
/// ConvergenceError carrying the value if the minimisation did not converge.
double oracle_c(const MinimizationResult& result);

/// max |-1/2 v'' + omega - c v^{p/2-1}| over grid points whose neighbours lie
/// inside supp v and with |x| <= interior_fraction * (support half-width).
double euler_lagrange_residual(const MinimizationResult& result, double c,
                               double interior_fraction = 1.0);

}  // namespace compacton
