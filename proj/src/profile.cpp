#include "compacton/profile.hpp"

#include "compacton/errors.hpp"
#include "compacton/singquad.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace compacton {

namespace {

constexpr double kIntegralTol = 1e-14;

// 1 - w^q for w = 1 - d, accurate when d is tiny.
double one_minus_power_near_one(double d, double q) {
    return -std::expm1(q * std::log1p(-d));
}

// 1 - w^q, accurate when w is close to 0 or when w is not close to 1.
double one_minus_power(double w, double q) {
    if (w <= 0.0) return 1.0;
    return -std::expm1(q * std::log(w));
}

// int_0^1 w^k (1 - w^q)^{s} dw for s = +1/2 or -1/2.
double unit_moment(double k, double q, bool sqrt_in_denominator) {
    SingularIntegrand f{
        [=](const QuadPoint& pt) {
            const double base = one_minus_power_near_one(pt.from_right, q);
            const double wk = k == 0.0 ? 1.0 : std::pow(pt.x, k);
            return sqrt_in_denominator ? wk / std::sqrt(base) : wk * std::sqrt(base);
        },
        0.0, 1.0, 0.0, 0.5};
    return integrate_singular(f, kIntegralTol);
}

// Integrals in the variable z = Q / Q0 used by the closed forms.
double z_integral_inverse_root(double p) {
    const double h = 0.5 * (p - 2.0);
    SingularIntegrand f{[=](const QuadPoint& pt) {
                            const double tail = pt.from_right < 0.5
                                                    ? one_minus_power_near_one(pt.from_right, h)
                                                    : one_minus_power(pt.x, h);
                            return 1.0 / std::sqrt(pt.x * tail);
                        },
                        0.0, 1.0, 0.5, 0.5};
    return integrate_singular(f, kIntegralTol);
}

double z_integral_root(double p) {
    const double h = 0.5 * (p - 2.0);
    SingularIntegrand f{[=](const QuadPoint& pt) {
                            const double tail = pt.from_right < 0.5
                                                    ? one_minus_power_near_one(pt.from_right, h)
                                                    : one_minus_power(pt.x, h);
                            return std::sqrt(pt.x * tail);
                        },
                        0.0, 1.0, 0.5, 0.5};
    return integrate_singular(f, kIntegralTol);
}

double z_integral_first_moment(double p) {
    const double h = 0.5 * (p - 2.0);
    SingularIntegrand f{[=](const QuadPoint& pt) {
                            const double tail = pt.from_right < 0.5
                                                    ? one_minus_power_near_one(pt.from_right, h)
                                                    : one_minus_power(pt.x, h);
                            return std::sqrt(pt.x / tail);
                        },
                        0.0, 1.0, 0.0, 0.5};
    return integrate_singular(f, kIntegralTol);
}

void validate_p_omega(double p, double omega) {
    WaveParams{p, omega, 1.0}.validate();
}

}  // namespace

void WaveParams::validate() const {
    if (!std::isfinite(p) || !(p > 2.0))
        throw DomainError("p must be a finite real > 2 (got " + std::to_string(p) + ")");
    if (!std::isfinite(omega) || !(omega > 0.0))
        throw DomainError("omega must be a finite real > 0 (got " + std::to_string(omega) +
                          ")");
    if (!std::isfinite(gamma) || !(gamma > 0.0))
        throw DomainError("gamma must be a finite real > 0 (got " + std::to_string(gamma) +
                          ")");
}

double amplitude_closed_form(const WaveParams& params) {
    params.validate();
    return std::pow(params.p * params.omega / (2.0 * params.gamma), 1.0 / (params.p - 2.0));
}

CompactonProfile::CompactonProfile(const WaveParams& params) : params_(params) {
    params_.validate();
    amplitude_ = amplitude_closed_form(params_);
    length_scale_ = amplitude_ / std::sqrt(params_.omega);
    half_support_ = length_scale_ * unit_moment(0.0, params_.p - 2.0, true);
}

CompactonProfile build_profile(const WaveParams& params) { return CompactonProfile(params); }

double CompactonProfile::abscissa(double phi) const {
    const double u = phi / amplitude_;
    if (u >= 1.0) return 0.0;
    if (u <= 0.0) return half_support_;
    const double q = params_.p - 2.0;
    SingularIntegrand f{[=](const QuadPoint& pt) {
                            return 1.0 / std::sqrt(one_minus_power_near_one(pt.from_right, q));
                        },
                        u, 1.0, 0.0, 0.5};
    return length_scale_ * integrate_singular(f, kIntegralTol);
}

double CompactonProfile::edge_distance(double phi) const {
    const double u = phi / amplitude_;
    if (u <= 0.0) return 0.0;
    if (u > 0.5) return half_support_ - abscissa(phi);
    const double q = params_.p - 2.0;
    SingularIntegrand f{[=](const QuadPoint& pt) {
                            return 1.0 / std::sqrt(one_minus_power(pt.x, q));
                        },
                        0.0, u, 0.0, 0.0};
    return length_scale_ * integrate_singular(f, kIntegralTol * u);
}

double CompactonProfile::level_from_abscissa(double ax) const {
    const double gap = half_support_ - ax;
    if (gap <= 0.0) return 0.0;
    if (ax <= 0.0) return 1.0;
    if (ax <= 0.5 * half_support_) {
        auto g = [&](double u) { return abscissa(u * amplitude_) - ax; };
        return bracket_root(g, 0.0, 1.0, 1e-15);
    }
    // near the support end x(u) = L - O(u): invert the edge distance directly
    const double guess = gap / length_scale_;
    auto g = [&](double u) { return edge_distance(u * amplitude_) - gap; };
    return bracket_root(g, 0.0, std::min(1.0, 2.0 * guess + 1e-300),
                        1e-15 * std::min(1.0, guess));
}

CompactonProfile::Sample CompactonProfile::sample(double x) const {
    const double ax = std::abs(x);
    if (ax >= half_support_) return {0.0, 0.0};
    const double u = level_from_abscissa(ax);
    const double slope = std::sqrt(params_.omega * one_minus_power(u, params_.p - 2.0));
    return {amplitude_ * u, x > 0.0 ? -slope : (x < 0.0 ? slope : 0.0)};
}

double CompactonProfile::phi(double x) const { return sample(x).phi; }

double CompactonProfile::dphi(double x) const { return sample(x).dphi; }

double CompactonProfile::Q(double x) const {
    const double v = phi(x);
    return v * v;
}

double CompactonProfile::slope_magnitude(double phi) const {
    const double u = std::clamp(phi / amplitude_, 0.0, 1.0);
    return std::sqrt(params_.omega * one_minus_power(u, params_.p - 2.0));
}

double CompactonProfile::phi_times_second_derivative(double phi) const {
    return (2.0 - params_.p) / params_.p * params_.gamma * std::pow(phi, params_.p - 2.0);
}

WaveFunctionals CompactonProfile::functionals() const {
    const double p = params_.p;
    const double q = p - 2.0;
    const double w = params_.omega;
    const double a = amplitude_;
    WaveFunctionals out;
    out.I1 = 2.0 * a * a * a * std::sqrt(w) * unit_moment(2.0, q, false);
    out.I2 = 2.0 * a * a * a / std::sqrt(w) * unit_moment(2.0, q, true);
    out.I3 = 2.0 * std::pow(a, p + 1.0) / std::sqrt(w) * unit_moment(p, q, true);
    out.hamiltonian = 0.5 * out.I1 - out.I3 / p;
    out.c_norm = params_.gamma * std::pow(out.I3, (p - 2.0) / (p + 1.0));
    return out;
}

double half_support_closed_form(double p, double omega) {
    validate_p_omega(p, omega);
    const double prefactor = std::pow(p, 1.0 / (p - 2.0)) /
                             std::pow(2.0, (p - 1.0) / (p - 2.0)) *
                             std::pow(omega, (4.0 - p) / (2.0 * (p - 2.0)));
    return prefactor * z_integral_inverse_root(p);
}

double mass_closed_form(double p, double omega) {
    validate_p_omega(p, omega);
    return 2.0 * std::pow(0.5 * p, 3.0 / (p - 2.0)) *
           std::pow(omega, 3.0 / (p - 2.0) - 0.5) * unit_moment(2.0, p - 2.0, true);
}

double c_coefficient(double p, double omega) {
    validate_p_omega(p, omega);
    const double bracket = 2.0 * z_integral_root(p) + z_integral_first_moment(p);
    return std::pow(0.5 * p, 3.0 / (p + 1.0)) *
           std::pow(omega, (p + 4.0) / (2.0 * (p + 1.0))) *
           std::pow(bracket, (p - 2.0) / (p + 1.0));
}

double c_coefficient_from_wave(double p, double omega) {
    const auto f = build_profile({p, omega, 1.0}).functionals();
    return std::pow(f.I3, (p - 2.0) / (p + 1.0));
}

CompactonProfile scale_normalized(double p, double omega) {
    return build_profile({p, omega, c_coefficient(p, omega)});
}

ScaledProfile::ScaledProfile(CompactonProfile base, double amplitude_factor, double dilation)
    : base_(std::move(base)), amplitude_factor_(amplitude_factor), dilation_(dilation) {}

ScaledProfile normalized_by_scaling(double p, double omega) {
    validate_p_omega(p, omega);
    return ScaledProfile(scale_normalized(p, 1.0), std::pow(omega, 1.0 / (2.0 * (p + 1.0))),
                         std::pow(omega, p / (2.0 * p + 2.0)));
}

NaturalToNormalized relate_natural_wave(double p, double omega) {
    const auto f = build_profile({p, omega, 1.0}).functionals();
    NaturalToNormalized out{};
    out.amplitude_factor = std::pow(f.I3, -1.0 / (p + 1.0));
    out.dilation = 1.0 / out.amplitude_factor;
    out.exponent = (p + 4.0) / (2.0 * (p + 1.0) * (p - 2.0));
    out.constant = out.dilation * std::pow(omega, -out.exponent);
    return out;
}

}  // namespace compacton
