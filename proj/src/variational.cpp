#include "compacton/variational.hpp"

#include "compacton/errors.hpp"
#include "compacton/profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace compacton {

namespace {

constexpr double kMaxStep = 100.0;
constexpr double kMinStep = 1e-16;
constexpr std::size_t kMinIterations = 20;

std::vector<double> laplacian(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> out(n);
    const double inv = 1.0 / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = i > 0 ? v[i - 1] : 0.0;
        const double r = i + 1 < n ? v[i + 1] : 0.0;
        out[i] = (l - 2.0 * v[i] + r) * inv;
    }
    return out;
}

// (I - theta D2) restricted to the free set, identity elsewhere; Thomas algorithm.
std::vector<double> precondition(const std::vector<double>& r, const std::vector<char>& free,
                                 double theta, double h) {
    const std::size_t n = r.size();
    const double off = -theta / (h * h);
    const double diag = 1.0 + 2.0 * theta / (h * h);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    double prev_c = 0.0, prev_d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = (i > 0 && free[i] && free[i - 1]) ? off : 0.0;
        const double b = free[i] ? diag : 1.0;
        const double up = (i + 1 < n && free[i] && free[i + 1]) ? off : 0.0;
        const double rhs = free[i] ? r[i] : 0.0;
        const double denom = b - a * prev_c;
        c[i] = up / denom;
        d[i] = (rhs - a * prev_d) / denom;
        prev_c = c[i];
        prev_d = d[i];
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void renormalize(std::vector<double>& v, double h, double p) {
    const double s = grid_constraint(v, h, p);
    if (!(s > 0.0)) throw ConvergenceError("minimize: iterate collapsed to zero", 0.0);
    const double f = std::pow(s, -2.0 / p);
    for (double& x : v) x *= f;
}

double dirichlet_sum(const std::vector<double>& v, double h) {
    double s = 0.0;
    double prev = 0.0;
    for (double x : v) {
        s += (x - prev) * (x - prev);
        prev = x;
    }
    s += prev * prev;
    return s / h;
}

}  // namespace

std::vector<double> symmetric_decreasing_rearrange(const std::vector<double>& v) {
    for (double x : v)
        if (x < 0.0 || std::isnan(x))
            throw PreconditionError("symmetric_decreasing_rearrange: negative entry");
    const std::size_t n = v.size();
    std::vector<double> s(v);
    std::sort(s.begin(), s.end(), std::greater<>());
    std::vector<double> out(n);
    if (n == 0) return out;
    const std::size_t c = (n - 1) / 2;
    std::size_t right = c + 1;
    std::size_t left = c;  // next free slot is left - 1
    out[c] = s[0];
    bool go_right = true;
    for (std::size_t j = 1; j < n; ++j) {
        const bool can_right = right < n;
        const bool can_left = left > 0;
        if ((go_right && can_right) || !can_left) {
            out[right++] = s[j];
        } else {
            out[--left] = s[j];
        }
        go_right = !go_right;
    }
    return out;
}

bool is_bell_shaped(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return true;
    for (double x : v)
        if (x < 0.0) return false;
    const std::size_t c = (n - 1) / 2;
    for (std::size_t i = c; i + 1 < n; ++i)
        if (v[i + 1] > v[i]) return false;
    for (std::size_t i = c; i > 0; --i)
        if (v[i - 1] > v[i]) return false;
    return true;
}

double grid_objective(const std::vector<double>& v, double h, double omega) {
    double mass = 0.0;
    for (double x : v) mass += x;
    return 0.25 * dirichlet_sum(v, h) + omega * mass * h;
}

double grid_constraint(const std::vector<double>& v, double h, double p) {
    double s = 0.0;
    for (double x : v) s += std::pow(x, 0.5 * p);
    return s * h;
}

MinimizationResult minimize(double p, double omega, const MinimizationOptions& options) {
    WaveParams{p, omega, 1.0}.validate();
    if (options.N < 101 || options.N % 2 == 0)
        throw DomainError("minimize: N must be odd and at least 101");
    const double Lc = scale_normalized(p, omega).half_support();
    const double X = options.X > 0.0 ? options.X : 1.5 * Lc;
    if (!(X > Lc))
        throw DomainError("minimize: domain half-width X must exceed the support " +
                          std::to_string(Lc));

    MinimizationResult res;
    res.p = p;
    res.omega = omega;
    res.X = X;
    const std::size_t n = options.N;
    res.h = 2.0 * X / static_cast<double>(n - 1);
    const double h = res.h;
    res.x.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        res.x[i] = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * h;

    // truncated cosine bump on 0.9 X
    std::vector<double> v(n, 0.0);
    const double width = 0.9 * X;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(res.x[i]) < width) v[i] = std::cos(0.5 * M_PI * res.x[i] / width);
    renormalize(v, h, p);

    const double theta = (Lc / M_PI) * (Lc / M_PI);
    double f = grid_objective(v, h, omega);
    double tau = 1.0;
    res.log.push_back({0, f, 0.0});
    std::vector<char> free(n);
    std::vector<double> grad(n), cgrad(n), trial(n);
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        const auto lap = laplacian(v, h);
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] = -0.5 * lap[i] + omega;
            cgrad[i] = 0.5 * p * std::pow(v[i], 0.5 * p - 1.0);
            free[i] = (v[i] > 0.0 || grad[i] < 0.0) ? 1 : 0;
        }
        const auto mg = precondition(grad, free, theta, h);
        const auto mc = precondition(cgrad, free, theta, h);
        const double denom = dot(cgrad, mc);
        const double lambda = denom > 0.0 ? dot(cgrad, mg) / denom : 0.0;

        double fn = f;
        bool accepted = false;
        while (tau >= kMinStep) {
            for (std::size_t i = 0; i < n; ++i)
                trial[i] = std::max(0.0, v[i] - tau * (mg[i] - lambda * mc[i]));
            trial = symmetric_decreasing_rearrange(trial);
            renormalize(trial, h, p);
            fn = grid_objective(trial, h, omega);
            if (fn <= f) {
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        res.iterations = it;
        if (!accepted) {
            // no descent left at roundoff level
            res.converged = it > kMinIterations;
            break;
        }
        const double rel = (f - fn) / f;
        if (fn > f) res.monotone = false;
        v.swap(trial);
        f = fn;
        res.log.push_back({it, f, tau});
        tau = std::min(2.0 * tau, kMaxStep);
        if (rel < options.tol && it > kMinIterations) {
            res.converged = true;
            break;
        }
    }
    res.v = std::move(v);
    res.m_est = f;
    return res;
}

double oracle_c(const MinimizationResult& result) {
    double mass = 0.0;
    for (double x : result.v) mass += x;
    const double c = 0.5 * dirichlet_sum(result.v, result.h) + result.omega * mass * result.h;
    if (!result.converged)
        throw ConvergenceError("oracle_c: minimisation did not converge", c);
    return c;
}

double euler_lagrange_residual(const MinimizationResult& result, double c,
                               double interior_fraction) {
    const auto& v = result.v;
    const std::size_t n = v.size();
    double support = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] > 0.0) support = std::max(support, std::abs(result.x[i]));
    const auto lap = laplacian(v, result.h);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(v[i - 1] > 0.0 && v[i] > 0.0 && v[i + 1] > 0.0)) continue;
        if (std::abs(result.x[i]) > interior_fraction * support) continue;
        const double r = -0.5 * lap[i] + result.omega - c * std::pow(v[i], 0.5 * result.p - 1.0);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace compacton
