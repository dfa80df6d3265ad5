#pragma once

#include "compacton/profile.hpp"

#include <cstddef>
#include <vector>

namespace compacton {

/// State of the profile at x(t).
struct FramePoint {
    double t = 0.0;
    double rho = 0.0;          ///< sqrt(-ln(phi / phi0)), the marching variable
    double phi = 0.0;          ///< phi(x(t))
    double dphi = 0.0;         ///< phi'(x(t)), derivative in x
    double level_power = 0.0;  ///< (phi / phi0)^{p-2}
};

/// The change of variables t(x) = int_0^x dy / phi(y), mapping (-L, L) onto
/// the real line.
///
/// With phi = phi0 exp(-rho^2) both coordinates become integrals of smooth
/// functions of rho:
///   sqrt(omega) t = int_0^rho g(r) dr,   x = (phi0 / sqrt(omega)) int_0^rho e^{-r^2} g(r) dr,
///   g(r) = 2 r / sqrt(1 - e^{-(p-2) r^2}),
/// which removes both the square-root singularity at the crest and the
/// logarithmic divergence at the support end.
class TravelingFrame {
public:
    explicit TravelingFrame(CompactonProfile profile);

    const CompactonProfile& profile() const { return profile_; }

    /// t >= 0 at which the profile takes the value phi in (0, phi0].
    double t_of_phi(double phi) const;
    /// Odd, increasing; +-infinity at and beyond +-L.
    double t_of_x(double x) const;
    /// x(t), odd, with |x(t)| < L.
    double x_of_t(double t) const;
    /// L - |x(t)|, free of cancellation for large |t|.
    double edge_gap(double t) const;
    double phi_at(double t) const;

    FramePoint point(double t) const;
    /// Samples many points at once; marches through |t| in sorted order so
    /// each point costs one short integration.
    std::vector<FramePoint> sample(const std::vector<double>& ts) const;

private:
    double rho_of_scaled_time(double tau) const;
    double rho_of_level(double u) const;
    FramePoint make_point(double t, double rho) const;

    CompactonProfile profile_;
    double q_;           // p - 2
    double sqrt_omega_;
};

TravelingFrame build_frame(const CompactonProfile& profile);

/// Uniform symmetric grid t_i = (i - (N-1)/2) h on [-T, T]; t_{N-1-i} = -t_i exactly.
struct UniformGrid {
    double T = 0.0;
    std::size_t N = 0;
    double h = 0.0;

    double t(std::size_t i) const;
    std::vector<double> points() const;
};

UniformGrid make_grid(double T, std::size_t N);

enum class OperatorKind { plus, minus };

const char* to_string(OperatorKind kind);

/// Default number of grid points of the discretized operators.
inline constexpr std::size_t kDefaultGridPoints = 4001;

/// -d^2/dt^2 + shift - W(t), with W(t) = kappa phi^{p-2}(x(t)), sampled on a grid.
///   plus:  shift = omega / 4,   kappa = gamma (2p^2 - 5p + 3) / (2p), kernel sqrt(phi) phi'
///   minus: shift = 9 omega / 4, kappa = 3 gamma (p + 1) / (2p),       kernel phi^{3/2}
struct SchrodingerOperator {
    OperatorKind kind = OperatorKind::plus;
    WaveParams params;
    double shift = 0.0;
    double kappa = 0.0;
    UniformGrid grid;
    std::vector<double> potential;         ///< W(t_i)
    std::vector<double> phi;               ///< phi(x(t_i))
    std::vector<double> kernel_candidate;  ///< analytic zero mode sampled on the grid
    std::vector<double> phi_three_halves;  ///< phi^{3/2}(x(t_i))

    /// max W + shift, the scale of the diagonal.
    double scale() const;
};

double potential_coefficient(OperatorKind kind, const WaveParams& params);
double potential_shift(OperatorKind kind, const WaveParams& params);

/// Smallest T with W(T) < 1e-12 omega (checked by evaluation), enlarged if
/// needed so that a bound state at the bottom of the gap has decayed by 1e-6.
double default_truncation(const TravelingFrame& frame, OperatorKind kind);

/// T <= 0 selects default_truncation.
SchrodingerOperator assemble(const TravelingFrame& frame, OperatorKind kind, double T = 0.0,
                             std::size_t N = kDefaultGridPoints);
SchrodingerOperator assemble_plus(const TravelingFrame& frame, double T = 0.0,
                                  std::size_t N = kDefaultGridPoints);
SchrodingerOperator assemble_minus(const TravelingFrame& frame, double T = 0.0,
                                   std::size_t N = kDefaultGridPoints);

}  // namespace compacton
