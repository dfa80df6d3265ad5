#include "compacton/spectrum.hpp"

#include "compacton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace compacton {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kZeroFloor = 1e-10;
constexpr double kZeroFactor = 10.0;

void check_size(const SchrodingerOperator& op, const std::vector<double>& v, const char* what) {
    if (v.size() != op.grid.N)
        throw PreconditionError(std::string(what) + ": vector length " +
                                std::to_string(v.size()) + " does not match grid size " +
                                std::to_string(op.grid.N));
}

void normalize_with_sign(std::vector<double>& v, double h) {
    const double n = grid_norm(v, h);
    if (!(n > 0.0)) throw ConvergenceError("eigenvector collapsed to zero", 0.0);
    std::size_t big = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[big])) big = i;
    const double s = (v[big] < 0.0 ? -1.0 : 1.0) / n;
    for (double& x : v) x *= s;
}

}  // namespace

TridiagonalSystem TridiagonalSystem::from_operator(const SchrodingerOperator& op) {
    TridiagonalSystem sys;
    const std::size_t n = op.grid.N;
    sys.h = op.grid.h;
    const double inv_h2 = 1.0 / (sys.h * sys.h);
    sys.diagonal.resize(n);
    for (std::size_t i = 0; i < n; ++i) sys.diagonal[i] = 2.0 * inv_h2 + op.shift - op.potential[i];
    sys.off_diagonal.assign(n - 1, -inv_h2);
    return sys;
}

std::size_t TridiagonalSystem::count_below(double sigma) const {
    const std::size_t n = size();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(diagonal[i]));
    for (double b : off_diagonal) scale = std::max(scale, std::abs(b));
    const double pivmin = kEps * std::max(scale, std::numeric_limits<double>::min());
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        d = diagonal[i] - sigma - (i > 0 ? off_diagonal[i - 1] * off_diagonal[i - 1] / d : 0.0);
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
    }
    return count;
}

std::pair<double, double> TridiagonalSystem::bounds() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off_diagonal[i - 1]);
        if (i + 1 < n) r += std::abs(off_diagonal[i]);
        lo = std::min(lo, diagonal[i] - r);
        hi = std::max(hi, diagonal[i] + r);
    }
    return {lo, hi};
}

double TridiagonalSystem::eigenvalue(std::size_t k, double tol) const {
    if (k >= size()) throw PreconditionError("eigenvalue index out of range");
    auto [lo, hi] = bounds();
    const double span = std::max(std::abs(lo), std::abs(hi));
    for (int it = 0; it < 200; ++it) {
        if (hi - lo <= std::max(tol, 4.0 * kEps * span)) break;
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> TridiagonalSystem::apply(const std::vector<double>& v) const {
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diagonal[i] * v[i];
        if (i > 0) s += off_diagonal[i - 1] * v[i - 1];
        if (i + 1 < n) s += off_diagonal[i] * v[i + 1];
        out[i] = s;
    }
    return out;
}

std::vector<double> TridiagonalSystem::solve_shifted(double sigma,
                                                     const std::vector<double>& rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw PreconditionError("solve_shifted: size mismatch");
    std::vector<double> d(n), du(off_diagonal), dl(off_diagonal), du2(n, 0.0), b(rhs);
    for (std::size_t i = 0; i < n; ++i) d[i] = diagonal[i] - sigma;
    double scale = 0.0;
    for (double x : d) scale = std::max(scale, std::abs(x));
    for (double x : du) scale = std::max(scale, std::abs(x));
    const double tiny = kEps * std::max(scale, std::numeric_limits<double>::min());

    // elimination with row interchanges; the fill-in lands in du2
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = tiny;
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            const double tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = tmp;
            const double tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n - 2; k-- > 0;)
        b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / d[k];
    return b;
}

double grid_inner(const std::vector<double>& a, const std::vector<double>& b, double h) {
    if (a.size() != b.size()) throw PreconditionError("grid_inner: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * h;
}

double grid_norm(const std::vector<double>& a, double h) { return std::sqrt(grid_inner(a, a, h)); }

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = grid_norm(a, 1.0), nb = grid_norm(b, 1.0);
    if (!(na > 0.0) || !(nb > 0.0)) return 0.0;
    return std::abs(grid_inner(a, b, 1.0)) / (na * nb);
}

double residual_norm(const SchrodingerOperator& op, const std::vector<double>& v) {
    check_size(op, v, "residual_norm");
    const auto sys = TridiagonalSystem::from_operator(op);
    return grid_norm(sys.apply(v), op.grid.h) / grid_norm(v, op.grid.h);
}

SpectralReport lowest_eigenpairs(const SchrodingerOperator& op, std::size_t m, double tol) {
    if (m < 1) throw PreconditionError("lowest_eigenpairs: m must be at least 1");
    if (!(tol > 0.0)) throw PreconditionError("lowest_eigenpairs: tol must be positive");
    const auto sys = TridiagonalSystem::from_operator(op);
    const std::size_t n = sys.size();
    m = std::min(m, n);
    const double h = op.grid.h;

    SpectralReport rep;
    rep.kind = op.kind;
    rep.grid = op.grid;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double lambda = sys.eigenvalue(k, tol);
        std::vector<double> v(n);
        for (double& x : v) x = unit(rng);
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (const auto& u : rep.eigenvectors) {
                const double c = grid_inner(v, u, h);
                for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
            }
            v = sys.solve_shifted(lambda, v);
            const double nv = grid_norm(v, h);
            if (!std::isfinite(nv) || !(nv > 0.0))
                throw ConvergenceError("inverse iteration stagnated", lambda);
            for (double& x : v) x /= nv;
        }
        for (const auto& u : rep.eigenvectors) {
            const double c = grid_inner(v, u, h);
            for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
        }
        normalize_with_sign(v, h);
        rep.eigenvalues.push_back(lambda);
        rep.eigenvectors.push_back(std::move(v));
    }

    rep.kernel_residual = residual_norm(op, op.kernel_candidate);
    rep.tol_zero = std::max(kZeroFactor * rep.kernel_residual, kZeroFloor);
    rep.negative_count = sys.count_below(-rep.tol_zero);
    rep.zero_index = 0;
    for (std::size_t k = 1; k < m; ++k)
        if (std::abs(rep.eigenvalues[k]) < std::abs(rep.eigenvalues[rep.zero_index]))
            rep.zero_index = k;
    rep.lambda0 = rep.eigenvalues[rep.zero_index];
    rep.kernel_cosine = cosine_similarity(rep.eigenvectors[rep.zero_index], op.kernel_candidate);
    return rep;
}

std::vector<double> kernel_projected_solve(const SchrodingerOperator& op,
                                           const std::vector<double>& rhs,
                                           const std::vector<double>& kernel) {
    check_size(op, rhs, "kernel_projected_solve");
    check_size(op, kernel, "kernel_projected_solve");
    const double h = op.grid.h;
    const double kn = grid_norm(kernel, h);
    if (!(kn > 0.0)) throw PreconditionError("kernel_projected_solve: zero kernel vector");
    const double overlap = grid_inner(rhs, kernel, h);
    if (std::abs(overlap) > 1e-8 * grid_norm(rhs, h) * kn)
        throw PreconditionError("kernel_projected_solve: rhs is not orthogonal to the kernel "
                                "(overlap " + std::to_string(overlap) + ")");
    const auto sys = TridiagonalSystem::from_operator(op);
    auto g = sys.solve_shifted(0.0, rhs);
    const double c = grid_inner(g, kernel, h) / (kn * kn);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= c * kernel[i];
    for (double x : g)
        if (!std::isfinite(x)) throw ConvergenceError("kernel_projected_solve: singular system", 0.0);
    return g;
}

double form_value(const SchrodingerOperator& op, const std::vector<double>& v) {
    check_size(op, v, "form_value");
    const auto sys = TridiagonalSystem::from_operator(op);
    return grid_inner(v, sys.apply(v), op.grid.h);
}

RefinementResult refine_until_stable(const TravelingFrame& frame, OperatorKind kind, double T,
                                     std::size_t N0, std::size_t max_points, std::size_t m,
                                     double tol) {
    if (T <= 0.0) T = default_truncation(frame, kind);
    m = std::max<std::size_t>(m, 2);
    RefinementResult out;
    std::size_t N = N0;
    while (true) {
        out.report = lowest_eigenpairs(assemble(frame, kind, T, N), m);
        out.points.push_back(N);
        out.lowest.emplace_back(out.report.eigenvalues[0], out.report.eigenvalues[1]);
        const std::size_t k = out.lowest.size();
        if (k >= 2) {
            const auto& a = out.lowest[k - 2];
            const auto& b = out.lowest[k - 1];
            if (std::abs(a.first - b.first) < tol && std::abs(a.second - b.second) < tol) {
                out.converged = true;
                break;
            }
        }
        if (2 * N - 1 > max_points) break;
        N = 2 * N - 1;
    }
    return out;
}

}  // namespace compacton
