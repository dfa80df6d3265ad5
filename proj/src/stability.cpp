#include "compacton/stability.hpp"

#include "compacton/errors.hpp"
#include "compacton/singquad.hpp"
#include "compacton/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace compacton {

namespace {

constexpr double kThresholdWidth = 1e-9;

double mass_moment(double p) {
    const double q = p - 2.0;
    SingularIntegrand f{[q](const QuadPoint& pt) {
                            const double base = -std::expm1(q * std::log1p(-pt.from_right));
                            return pt.x * pt.x / std::sqrt(base);
                        },
                        0.0, 1.0, 0.0, 0.5};
    return integrate_singular(f, 1e-14);
}

const char* kScopeNote =
    "verdict computed for one Dirichlet discretization of the transformed operators; "
    "it does not quantify over self-adjoint extensions";

}  // namespace

const char* to_string(Model model) {
    return model == Model::kdv ? "degenerate-KdV" : "degenerate-NLS";
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::stable: return "stable";
        case Verdict::unstable: return "unstable";
        case Verdict::marginal: return "marginal";
    }
    return "unknown";
}

Model parse_model(const std::string& text) {
    if (text == "kdv" || text == "KdV" || text == "degenerate-KdV") return Model::kdv;
    if (text == "nls" || text == "NLS" || text == "degenerate-NLS") return Model::nls;
    throw DomainError("unknown model '" + text + "' (expected kdv or nls)");
}

double slope_D(double p, double omega) {
    WaveParams{p, omega, 1.0}.validate();
    const double D = -std::pow(0.5 * p, 3.0 / (p - 2.0)) * (8.0 - p) / (2.0 * (p - 2.0)) *
                     std::pow(omega, 3.0 / (p - 2.0) - 1.5) * mass_moment(p);
    return D == 0.0 ? 0.0 : D;
}

double slope_D_fd(double p, double omega, double delta) {
    WaveParams{p, omega, 1.0}.validate();
    if (delta <= 0.0) delta = 1e-4 * omega;
    if (!(delta < omega)) throw DomainError("slope_D_fd: delta must be smaller than omega");
    const double up = build_profile({p, omega + delta, 1.0}).functionals().I2;
    const double down = build_profile({p, omega - delta, 1.0}).functionals().I2;
    return -0.5 * (up - down) / (2.0 * delta);
}

double slope_D_operator(double p, double omega, double T, std::size_t N) {
    const auto frame = build_frame(build_profile({p, omega, 1.0}));
    const auto op = assemble_plus(frame, T, N);
    const auto g = kernel_projected_solve(op, op.phi_three_halves, op.kernel_candidate);
    return grid_inner(g, op.phi_three_halves, op.grid.h);
}

double marginal_tolerance(double mass) { return 1e-9 * (1.0 + std::abs(mass)); }

StabilityReport verdict(double p, double omega, Model model, const StabilityOptions& options) {
    StabilityReport rep;
    rep.model = model;
    rep.params = {p, omega, 1.0};
    rep.params.validate();
    const auto profile = build_profile(rep.params);
    rep.half_support = profile.half_support();
    rep.amplitude = profile.amplitude();
    rep.mass = profile.functionals().I2;
    rep.D = slope_D(p, omega);
    rep.D_tol = marginal_tolerance(rep.mass);

    const auto frame = build_frame(profile);
    const auto op = assemble_plus(frame, options.T, options.N);
    const auto spec = lowest_eigenpairs(op, 3);
    rep.grid_T = op.grid.T;
    rep.grid_N = op.grid.N;
    rep.tol_zero = spec.tol_zero;
    rep.negative_eigenvalue = spec.eigenvalues[0];
    rep.zero_eigenvalue = spec.lambda0;
    rep.n_Hplus = spec.negative_count;
    if (rep.n_Hplus != 1)
        throw InconsistencyError("discretized L+ has " + std::to_string(rep.n_Hplus) +
                                 " negative eigenvalues, expected exactly 1");
    if (options.verify_minus) {
        const auto minus = lowest_eigenpairs(assemble_minus(frame, options.T, options.N), 2);
        rep.n_Hminus = minus.negative_count;
        if (rep.n_Hminus != 0)
            throw InconsistencyError("discretized L- has " + std::to_string(rep.n_Hminus) +
                                     " negative eigenvalues, expected none");
    }

    if (options.compute_numeric_slope) {
        const auto g = kernel_projected_solve(op, op.phi_three_halves, op.kernel_candidate);
        rep.D_numeric = grid_inner(g, op.phi_three_halves, op.grid.h);
    } else {
        rep.D_numeric = std::numeric_limits<double>::quiet_NaN();
    }

    rep.n_D = rep.D < -rep.D_tol ? 1 : 0;
    rep.k_Ham = rep.n_Hplus + rep.n_Hminus - rep.n_D;
    const char* structure =
        model == Model::kdv
            ? "KdV: the generalized kernel is spanned by H+^{-1} phi once the speed correction vanishes"
            : "NLS: the generalized kernel adds (H+^{-1} phi, 0) to Ker H";
    if (std::abs(rep.D) <= rep.D_tol) {
        rep.verdict = Verdict::marginal;
        rep.index_formula_applicable = false;
        rep.theorem_stable = true;
        rep.note = std::string(structure) +
                   "; D = 0 makes the 1x1 pairing singular, so the index count degenerates "
                   "(formally n(D) = 0); the threshold p = 8 is classified as stable";
    } else if (rep.n_D == 1) {
        rep.verdict = Verdict::stable;
        rep.theorem_stable = true;
        rep.note = std::string(structure) + "; n(D) = 1 so k_Ham = 0";
    } else {
        rep.verdict = Verdict::unstable;
        rep.theorem_stable = false;
        rep.k_r = 1;
        rep.note = std::string(structure) +
                   "; n(D) = 0 so k_Ham = 1, realized by one real unstable pair (k_c = k_i = 0 by parity)";
    }
    rep.scope_note = kScopeNote;
    return rep;
}

std::size_t default_workers() {
    if (const char* env = std::getenv("COMPACTON_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepTable sweep(const std::vector<double>& p_grid, const std::vector<double>& omega_grid,
                 Model model, const StabilityOptions& options, std::size_t workers) {
    SweepTable table;
    table.model = model;
    for (double p : p_grid)
        for (double w : omega_grid) table.rows.push_back({p, w, std::nullopt, {}});
    if (table.rows.empty()) return table;

    if (workers == 0) workers = default_workers();
    workers = std::min(workers, table.rows.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < table.rows.size(); i = next++) {
            auto& row = table.rows[i];
            try {
                row.report = verdict(row.p, row.omega, model, options);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // thresholds from the closed-form slope, which is cheap and exact in sign
    std::vector<double> ps(p_grid);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    for (double w : omega_grid) {
        std::vector<double> D(ps.size(), std::numeric_limits<double>::quiet_NaN());
        std::vector<bool> zero(ps.size(), false);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            try {
                D[i] = slope_D(ps[i], w);
                zero[i] = std::abs(D[i]) <=
                          marginal_tolerance(build_profile({ps[i], w, 1.0}).functionals().I2);
            } catch (const std::exception&) {
                // the row error is already recorded
            }
        }
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (zero[i]) {
                table.thresholds.push_back({w, ps[i], ps[i], true});
                continue;
            }
            if (i + 1 >= ps.size() || zero[i + 1] || !std::isfinite(D[i]) ||
                !std::isfinite(D[i + 1]) || (D[i] < 0.0) == (D[i + 1] < 0.0))
                continue;
            double lo = ps[i], hi = ps[i + 1];
            const bool lo_negative = D[i] < 0.0;
            while (hi - lo > kThresholdWidth) {
                const double mid = 0.5 * (lo + hi);
                const double dm = slope_D(mid, w);
                if (dm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((dm < 0.0) == lo_negative)
                    lo = mid;
                else
                    hi = mid;
            }
            table.thresholds.push_back({w, lo, hi, false});
        }
    }
    return table;
}

}  // namespace compacton
