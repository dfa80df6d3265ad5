#pragma once

#include "compacton/frame.hpp"
#include "compacton/profile.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace compacton {

enum class Model { kdv, nls };
enum class Verdict { stable, unstable, marginal };

const char* to_string(Model model);
const char* to_string(Verdict verdict);
/// Accepts "kdv"/"degenerate-KdV" and "nls"/"degenerate-NLS"; throws DomainError otherwise.
Model parse_model(const std::string& text);

/// D = -1/2 d/domega int phi^2 in closed form,
///   -(p/2)^{3/(p-2)} (8 - p) / (2 (p - 2)) omega^{3/(p-2) - 3/2} int_0^1 z^2 / sqrt(1 - z^{p-2}) dz.
/// Exactly zero at p = 8.
double slope_D(double p, double omega);

/// Central difference -(M(omega + delta) - M(omega - delta)) / (4 delta) of the
/// quadrature mass. delta <= 0 selects 1e-4 omega.
double slope_D_fd(double p, double omega, double delta = 0.0);

/// Operator route <g, phi^{3/2}> h with L+ g = phi^{3/2} solved orthogonally to
/// the kernel; the conjugate of <H+^{-1} phi, phi> in the original variable.
double slope_D_operator(double p, double omega, double T = 0.0,
                        std::size_t N = kDefaultGridPoints);

/// Band |D| <= 1e-9 (1 + M) in which the verdict is "marginal".
double marginal_tolerance(double mass);

struct StabilityOptions {
    double T = 0.0;                        ///< <= 0: default truncation
    std::size_t N = kDefaultGridPoints;
    bool compute_numeric_slope = true;     ///< also run slope_D_operator
    bool verify_minus = false;             ///< recompute n(H-) instead of taking it as 0
};

struct StabilityReport {
    Model model = Model::kdv;
    WaveParams params;
    double half_support = 0.0;
    double amplitude = 0.0;
    double mass = 0.0;
    double D = 0.0;
    double D_numeric = 0.0;  ///< NaN when not computed
    double D_tol = 0.0;
    double negative_eigenvalue = 0.0;  ///< -zeta^2 of L+
    double zero_eigenvalue = 0.0;      ///< discrete kernel eigenvalue of L+
    double tol_zero = 0.0;
    double grid_T = 0.0;
    std::size_t grid_N = 0;
    std::size_t n_Hplus = 0;
    std::size_t n_Hminus = 0;
    std::size_t n_D = 0;
    std::size_t k_Ham = 0;
    std::size_t k_r = 0;
    std::size_t k_c = 0;
    std::size_t k_i = 0;
    bool index_formula_applicable = true;
    bool theorem_stable = false;  ///< classification including the threshold p = 8
    Verdict verdict = Verdict::stable;
    std::string note;
    std::string scope_note;
};

/// Index count k_Ham = n(H+) + n(H-) - n(D) and the resulting verdict. Throws
/// InconsistencyError when the discretized L+ does not have exactly one
/// negative eigenvalue (or L- has any, with verify_minus).
StabilityReport verdict(double p, double omega, Model model,
                        const StabilityOptions& options = {});

struct SweepRow {
    double p = 0.0;
    double omega = 0.0;
    std::optional<StabilityReport> report;
    std::string error;  ///< non-empty when the row failed
};

/// Location of a sign change of D in p at fixed omega.
struct ThresholdBracket {
    double omega = 0.0;
    double p_lo = 0.0;
    double p_hi = 0.0;
    bool on_grid = false;  ///< D vanished at a grid point
};

struct SweepTable {
    Model model = Model::kdv;
    std::vector<SweepRow> rows;  ///< p-major, in grid order
    std::vector<ThresholdBracket> thresholds;
};

/// Worker count from COMPACTON_WORKERS, else the hardware concurrency (at least 1).
std::size_t default_workers();

/// One report per (p, omega); rows run concurrently but are returned in grid
/// order. Sign changes of D between neighbouring p values are bisected to a
/// bracket of width 1e-9.
SweepTable sweep(const std::vector<double>& p_grid, const std::vector<double>& omega_grid,
                 Model model, const StabilityOptions& options = {}, std::size_t workers = 0);

}  // namespace compacton
