#pragma once

#include "compacton/frame.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace compacton {

/// Symmetric tridiagonal matrix of a Dirichlet finite-difference operator:
/// diagonal 2/h^2 + shift - W(t_i), off-diagonal -1/h^2.
struct TridiagonalSystem {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;
    double h = 0.0;

    static TridiagonalSystem from_operator(const SchrodingerOperator& op);

    std::size_t size() const { return diagonal.size(); }

    /// Number of eigenvalues strictly below sigma (Sturm sequence of the LDL^T pivots).
    std::size_t count_below(double sigma) const;

    /// Gershgorin enclosure [lo, hi] of the spectrum.
    std::pair<double, double> bounds() const;

    /// k-th smallest eigenvalue (k = 0 is the lowest) by Sturm bisection.
    double eigenvalue(std::size_t k, double tol) const;

    std::vector<double> apply(const std::vector<double>& v) const;

    /// Solves (A - sigma) x = rhs by Gaussian elimination with partial pivoting.
    /// Exactly zero pivots are replaced by a roundoff-sized value, which is
    /// what inverse iteration needs.
    std::vector<double> solve_shifted(double sigma, const std::vector<double>& rhs) const;
};

/// Grid inner product sum a_i b_i h.
double grid_inner(const std::vector<double>& a, const std::vector<double>& b, double h);
double grid_norm(const std::vector<double>& a, double h);
/// |<a, b>| / (|a| |b|).
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Lowest part of the spectrum of a discretized operator.
struct SpectralReport {
    OperatorKind kind = OperatorKind::plus;
    UniformGrid grid;
    std::vector<double> eigenvalues;                ///< ascending
    std::vector<std::vector<double>> eigenvectors;  ///< sum v^2 h = 1, largest entry positive
    double tol_zero = 0.0;                          ///< band treated as zero
    std::size_t negative_count = 0;                 ///< eigenvalues below -tol_zero (whole spectrum)
    std::size_t zero_index = 0;                     ///< index of the smallest |lambda|
    double lambda0 = 0.0;                           ///< eigenvalues[zero_index]
    double kernel_residual = 0.0;                   ///< |A k| / |k| for the analytic kernel candidate
    double kernel_cosine = 0.0;                     ///< similarity of that candidate with the zero-mode eigenvector
};

/// Default absolute tolerance of the eigenvalue bisection.
inline constexpr double kEigenTol = 1e-12;

/// The m algebraically smallest eigenpairs. Eigenvalues by Sturm bisection,
/// eigenvectors by two steps of shifted inverse iteration, orthogonalized
/// against the ones already found.
SpectralReport lowest_eigenpairs(const SchrodingerOperator& op, std::size_t m,
                                 double tol = kEigenTol);

/// |A v| / |v| in the grid norm.
double residual_norm(const SchrodingerOperator& op, const std::vector<double>& v);

/// Solves A g = rhs on the complement of the kernel direction and returns g
/// orthogonal to kernel. Throws PreconditionError unless rhs is orthogonal to
/// kernel to roundoff (|<rhs, k>| <= 1e-8 |rhs| |k|).
std::vector<double> kernel_projected_solve(const SchrodingerOperator& op,
                                           const std::vector<double>& rhs,
                                           const std::vector<double>& kernel);

/// Discrete quadratic form v^T A v h.
double form_value(const SchrodingerOperator& op, const std::vector<double>& v);

/// Grid doubling (N -> 2N - 1) until the two smallest eigenvalues move by less
/// than tol, or N would exceed max_points.
struct RefinementResult {
    SpectralReport report;
    std::vector<std::size_t> points;                ///< N at each level
    std::vector<std::pair<double, double>> lowest;  ///< two smallest eigenvalues per level
    bool converged = false;
};

RefinementResult refine_until_stable(const TravelingFrame& frame, OperatorKind kind, double T,
                                     std::size_t N0, std::size_t max_points, std::size_t m = 3,
                                     double tol = 1e-7);

}  // namespace compacton
