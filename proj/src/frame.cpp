#include "compacton/frame.hpp"

#include "compacton/errors.hpp"
#include "compacton/singquad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace compacton {

namespace {

constexpr double kWeakPotential = 1e-12;
constexpr double kBoundStateDecay = 1e-6;
constexpr int kMaxNewton = 60;

// g(r) = 2 r / sqrt(1 - e^{-q r^2}); even extension is irrelevant since r >= 0.
double time_density(double r, double q) {
    const double r2 = r * r;
    if (r2 < 1e-300) return 2.0 / std::sqrt(q);
    return 2.0 * r / std::sqrt(-std::expm1(-q * r2));
}

}  // namespace

TravelingFrame::TravelingFrame(CompactonProfile profile)
    : profile_(std::move(profile)),
      q_(profile_.params().p - 2.0),
      sqrt_omega_(std::sqrt(profile_.params().omega)) {}

TravelingFrame build_frame(const CompactonProfile& profile) { return TravelingFrame(profile); }

double TravelingFrame::rho_of_scaled_time(double tau) const {
    if (tau <= 0.0) return 0.0;
    const double q = q_;
    auto g = [q](double r) { return time_density(r, q); };
    // G is convex, so Newton from the left overshoots once and then descends monotonically
    double rho = 0.0;
    double G = 0.0;
    for (int it = 0; it < kMaxNewton; ++it) {
        const double step = (tau - G) / g(rho);
        const double next = std::max(0.0, rho + step);
        G += integrate_smooth(g, rho, next, 1e-15 * std::max(1.0, std::abs(step) * g(next)));
        rho = next;
        if (std::abs(tau - G) <= 4e-16 * std::max(1.0, tau) ||
            std::abs(step) <= 1e-16 * std::max(1.0, rho))
            return rho;
    }
    throw ConvergenceError("TravelingFrame: inversion of t did not converge", rho);
}

double TravelingFrame::rho_of_level(double u) const {
    if (u >= 1.0) return 0.0;
    return std::sqrt(-std::log(u));
}

FramePoint TravelingFrame::make_point(double t, double rho) const {
    FramePoint pt;
    pt.t = t;
    pt.rho = rho;
    const double r2 = rho * rho;
    pt.phi = profile_.amplitude() * std::exp(-r2);
    pt.level_power = std::exp(-q_ * r2);
    const double slope = sqrt_omega_ * std::sqrt(-std::expm1(-q_ * r2));
    pt.dphi = t > 0.0 ? -slope : (t < 0.0 ? slope : 0.0);
    return pt;
}

double TravelingFrame::t_of_phi(double phi) const {
    const double u = phi / profile_.amplitude();
    if (!(u > 0.0)) return std::numeric_limits<double>::infinity();
    const double rho = rho_of_level(u);
    const double q = q_;
    return integrate_smooth([q](double r) { return time_density(r, q); }, 0.0, rho,
                            1e-15 * std::max(1.0, rho * rho)) /
           sqrt_omega_;
}

double TravelingFrame::t_of_x(double x) const {
    const double L = profile_.half_support();
    const double ax = std::abs(x);
    if (ax >= L) return std::copysign(std::numeric_limits<double>::infinity(), x);
    if (ax == 0.0) return 0.0;
    const double q = q_;
    const double ell = profile_.amplitude() / sqrt_omega_;
    auto g = [q](double r) { return time_density(r, q); };
    double rho;
    if (ax <= 0.5 * L) {
        // x(rho) = ell int_0^rho e^{-r^2} g(r) dr, inverted by Newton from the left
        auto xg = [q](double r) { return std::exp(-r * r) * time_density(r, q); };
        const double target = ax / ell;
        rho = 0.0;
        double X = 0.0;
        int it = 0;
        for (; it < kMaxNewton; ++it) {
            const double step = (target - X) / xg(rho);
            const double next = std::max(0.0, rho + step);
            X += integrate_smooth(xg, rho, next, 1e-16 * std::max(1.0, std::abs(step)));
            rho = next;
            if (std::abs(target - X) <= 4e-16 * std::max(1.0, target) ||
                std::abs(step) <= 1e-16 * std::max(1.0, rho))
                break;
        }
        if (it == kMaxNewton)
            throw ConvergenceError("TravelingFrame: inversion of x did not converge", rho);
    } else {
        rho = rho_of_level(profile_.phi(ax) / profile_.amplitude());
    }
    const double t = integrate_smooth(g, 0.0, rho, 1e-15 * std::max(1.0, rho * rho)) /
                     sqrt_omega_;
    return std::copysign(t, x);
}

double TravelingFrame::phi_at(double t) const { return point(t).phi; }

FramePoint TravelingFrame::point(double t) const {
    return make_point(t, rho_of_scaled_time(sqrt_omega_ * std::abs(t)));
}

double TravelingFrame::edge_gap(double t) const {
    const auto pt = point(t);
    return profile_.edge_distance(pt.phi);
}

double TravelingFrame::x_of_t(double t) const {
    const auto pt = point(t);
    const double L = profile_.half_support();
    double ax;
    if (pt.rho * pt.rho < std::log(2.0)) {
        const double q = q_;
        const double ell = profile_.amplitude() / sqrt_omega_;
        ax = ell * integrate_smooth(
                       [q](double r) { return std::exp(-r * r) * time_density(r, q); }, 0.0,
                       pt.rho, 1e-16);
    } else {
        ax = L - profile_.edge_distance(pt.phi);
    }
    return std::copysign(ax, t);
}

std::vector<FramePoint> TravelingFrame::sample(const std::vector<double>& ts) const {
    std::vector<std::size_t> order(ts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&ts](std::size_t a, std::size_t b) {
        return std::abs(ts[a]) < std::abs(ts[b]);
    });

    const double q = q_;
    auto g = [q](double r) { return time_density(r, q); };
    std::vector<FramePoint> out(ts.size());
    double rho = 0.0;
    double G = 0.0;
    double last_abs = -1.0;
    double last_rho = 0.0;
    for (std::size_t idx : order) {
        const double t = ts[idx];
        if (!std::isfinite(t)) throw PreconditionError("TravelingFrame::sample: non-finite t");
        const double tau = sqrt_omega_ * std::abs(t);
        if (std::abs(t) == last_abs) {
            out[idx] = make_point(t, last_rho);
            continue;
        }
        // march from the previous converged point; G is convex in rho
        int it = 0;
        for (; it < kMaxNewton; ++it) {
            if (std::abs(tau - G) <= 4e-16 * std::max(1.0, tau)) break;
            const double step = (tau - G) / g(rho);
            const double next = std::max(0.0, rho + step);
            G += integrate_smooth(g, rho, next, 1e-15 * std::max(1e-3, std::abs(step) * g(next)));
            rho = next;
            if (std::abs(step) <= 1e-16 * std::max(1.0, rho)) break;
        }
        if (it == kMaxNewton)
            throw ConvergenceError("TravelingFrame::sample: inversion of t did not converge", rho);
        last_abs = std::abs(t);
        last_rho = rho;
        out[idx] = make_point(t, rho);
    }
    return out;
}

double UniformGrid::t(std::size_t i) const {
    return (static_cast<double>(i) - 0.5 * static_cast<double>(N - 1)) * h;
}

std::vector<double> UniformGrid::points() const {
    std::vector<double> out(N);
    for (std::size_t i = 0; i < N; ++i) out[i] = t(i);
    return out;
}

UniformGrid make_grid(double T, std::size_t N) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw DomainError("grid half-width T must be a finite positive real");
    if (N < 3) throw DomainError("grid needs at least 3 points");
    return {T, N, 2.0 * T / static_cast<double>(N - 1)};
}

const char* to_string(OperatorKind kind) { return kind == OperatorKind::plus ? "plus" : "minus"; }

double potential_coefficient(OperatorKind kind, const WaveParams& params) {
    const double p = params.p;
    if (kind == OperatorKind::plus) return params.gamma * (2.0 * p * p - 5.0 * p + 3.0) / (2.0 * p);
    return 3.0 * params.gamma * (p + 1.0) / (2.0 * p);
}

double potential_shift(OperatorKind kind, const WaveParams& params) {
    return (kind == OperatorKind::plus ? 0.25 : 2.25) * params.omega;
}

double SchrodingerOperator::scale() const {
    double w = 0.0;
    for (double v : potential) w = std::max(w, v);
    return w + shift;
}

double default_truncation(const TravelingFrame& frame, OperatorKind kind) {
    const auto& prof = frame.profile();
    const auto& params = prof.params();
    const double q = params.p - 2.0;
    const double kappa = potential_coefficient(kind, params);
    const double peak = kappa * std::pow(prof.amplitude(), q);
    const double threshold = kWeakPotential * params.omega;

    double T = 0.0;
    if (peak >= threshold) {
        // W = peak e^{-q rho^2} crosses the threshold at rho^2 = ln(peak / threshold) / q
        const double rho2 = std::log(peak / threshold) / q;
        T = frame.t_of_phi(prof.amplitude() * std::exp(-rho2));
        for (int guard = 0; kappa * std::pow(frame.phi_at(T), q) >= threshold; ++guard) {
            if (guard > 200) throw ConvergenceError("default_truncation: W does not decay", T);
            T *= 1.01;
        }
    }
    const double decay = std::log(1.0 / kBoundStateDecay) /
                         std::sqrt(potential_shift(kind, params));
    return std::max(T, decay);
}

SchrodingerOperator assemble(const TravelingFrame& frame, OperatorKind kind, double T,
                             std::size_t N) {
    if (T <= 0.0) T = default_truncation(frame, kind);
    SchrodingerOperator op;
    op.kind = kind;
    op.params = frame.profile().params();
    op.shift = potential_shift(kind, op.params);
    op.kappa = potential_coefficient(kind, op.params);
    op.grid = make_grid(T, N);

    const auto pts = frame.sample(op.grid.points());
    const double peak = op.kappa * std::pow(frame.profile().amplitude(), op.params.p - 2.0);
    op.potential.resize(N);
    op.phi.resize(N);
    op.kernel_candidate.resize(N);
    op.phi_three_halves.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const auto& pt = pts[i];
        op.potential[i] = peak * pt.level_power;
        op.phi[i] = pt.phi;
        op.phi_three_halves[i] = pt.phi * std::sqrt(pt.phi);
        op.kernel_candidate[i] = kind == OperatorKind::plus ? std::sqrt(pt.phi) * pt.dphi
                                                            : op.phi_three_halves[i];
    }
    return op;
}

SchrodingerOperator assemble_plus(const TravelingFrame& frame, double T, std::size_t N) {
    return assemble(frame, OperatorKind::plus, T, N);
}

SchrodingerOperator assemble_minus(const TravelingFrame& frame, double T, std::size_t N) {
    return assemble(frame, OperatorKind::minus, T, N);
}

}  // namespace compacton
