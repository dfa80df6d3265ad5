#pragma once

#include <vector>

namespace compacton {

/// Parameters of the profile equation
///   -phi (phi phi')' + omega phi - gamma phi^{p-1} = 0.
/// gamma = 1 is the natural travelling/standing wave; gamma = c(omega, p) gives
/// the minimiser of the constrained problem normalised by int phi^p = 1.
struct WaveParams {
    double p = 4.0;
    double omega = 1.0;
    double gamma = 1.0;

    /// Throws DomainError unless p > 2, omega > 0, gamma > 0 (all finite).
    void validate() const;
};

/// Integral functionals of a profile.
struct WaveFunctionals {
    double I1 = 0.0;           ///< int (phi phi')^2
    double I2 = 0.0;           ///< int phi^2, the mass
    double I3 = 0.0;           ///< int phi^p
    double hamiltonian = 0.0;  ///< I1 / 2 - I3 / p
    double c_norm = 0.0;       ///< coefficient of the normalised wave, gamma I3^{(p-2)/(p+1)}

    double mass() const { return I2; }
};

/// The unique bell-shaped compacton of the profile equation, supported on
/// [-L, L]. Evaluation inverts the abscissa integral
///   x(phi) = (phi0 / sqrt(omega)) int_{phi/phi0}^1 dw / sqrt(1 - w^{p-2})
/// by bracketed root finding; near the support end the complementary
/// edge-distance integral is inverted instead, which stays well conditioned.
class CompactonProfile {
public:
    explicit CompactonProfile(const WaveParams& params);

    const WaveParams& params() const { return params_; }
    double half_support() const { return half_support_; }
    double amplitude() const { return amplitude_; }

    double phi(double x) const;
    /// phi'(x): -sqrt(omega - (2 gamma / p) phi^{p-2}) on (0, L), odd, zero off the support.
    double dphi(double x) const;
    double Q(double x) const;

    /// Returns phi and phi' together (one inversion).
    struct Sample {
        double phi;
        double dphi;
    };
    Sample sample(double x) const;

    /// x(phi) in [0, L] for phi in [0, phi0].
    double abscissa(double phi) const;
    /// L - x(phi), computed without subtracting from L.
    double edge_distance(double phi) const;
    /// |phi'| as a function of the profile value.
    double slope_magnitude(double phi) const;
    /// phi phi'' = ((2 - p) / p) gamma phi^{p-2}; never finite-differenced.
    double phi_times_second_derivative(double phi) const;

    WaveFunctionals functionals() const;

private:
    double level_from_abscissa(double ax) const;

    WaveParams params_;
    double amplitude_;
    double half_support_;
    double length_scale_;  // phi0 / sqrt(omega)
};

CompactonProfile build_profile(const WaveParams& params);

/// phi0 = (p omega / (2 gamma))^{1/(p-2)}.
double amplitude_closed_form(const WaveParams& params);

/// Half support at gamma = 1 in the closed (power-law) form
///   L = p^{1/(p-2)} / 2^{(p-1)/(p-2)} omega^{(4-p)/(2(p-2))} int_0^1 dz / sqrt(z - z^{p/2}).
double half_support_closed_form(double p, double omega);

/// Mass of the gamma = 1 wave,
///   2 (p/2)^{3/(p-2)} omega^{3/(p-2) - 1/2} int_0^1 z^2 / sqrt(1 - z^{p-2}) dz.
double mass_closed_form(double p, double omega);

/// Lagrange coefficient c(omega, p) of the normalised problem,
///   (p/2)^{3/(p+1)} omega^{(p+4)/(2(p+1))}
///     (2 int_0^1 sqrt(z - z^{p/2}) dz + int_0^1 z / sqrt(z - z^{p/2}) dz)^{(p-2)/(p+1)}.
double c_coefficient(double p, double omega);

/// Same coefficient from the natural wave: I3(gamma = 1)^{(p-2)/(p+1)}.
double c_coefficient_from_wave(double p, double omega);

/// Normalised minimiser Phi_omega built directly as the gamma = c(omega, p) profile.
CompactonProfile scale_normalized(double p, double omega);

/// Phi_omega obtained from Phi_1 through
///   Phi_omega(x) = omega^{1/(2(p+1))} Phi_1(omega^{p/(2p+2)} x).
class ScaledProfile {
public:
    ScaledProfile(CompactonProfile base, double amplitude_factor, double dilation);

    double phi(double x) const { return amplitude_factor_ * base_.phi(dilation_ * x); }
    double half_support() const { return base_.half_support() / dilation_; }
    double amplitude() const { return amplitude_factor_ * base_.amplitude(); }

    const CompactonProfile& base() const { return base_; }
    double amplitude_factor() const { return amplitude_factor_; }
    double dilation() const { return dilation_; }

private:
    CompactonProfile base_;
    double amplitude_factor_;
    double dilation_;
};

ScaledProfile normalized_by_scaling(double p, double omega);

/// Relation between the natural wave phi_omega and the normalised Phi_omega at
/// the same omega: Phi_omega(x) = A phi_omega(x / A) with A = I3^{-1/(p+1)}.
/// The dilation 1/A behaves like const(p) omega^{(p+4)/(2(p+1)(p-2))}; the
/// constant has no closed form here and is reported numerically.
struct NaturalToNormalized {
    double amplitude_factor;  ///< A
    double dilation;          ///< 1 / A
    double exponent;          ///< (p+4) / (2 (p+1) (p-2))
    double constant;          ///< dilation * omega^{-exponent}
};

NaturalToNormalized relate_natural_wave(double p, double omega);

}  // namespace compacton
