#include "compacton/errors.hpp"
#include "compacton/frame.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace compacton;

namespace {

// p = 4: phi = sqrt(2 omega) cos(x / sqrt 2), so t(x) = artanh(sin(x / sqrt 2)) / sqrt(omega).
double cosine_t_of_x(double x, double omega) {
    return std::atanh(std::sin(x / std::sqrt(2.0))) / std::sqrt(omega);
}

double cosine_x_of_t(double t, double omega) {
    return std::sqrt(2.0) * std::asin(std::tanh(std::sqrt(omega) * t));
}

// Least-squares slope of log|y| against t.
double fitted_rate(const std::vector<double>& t, const std::vector<double>& y) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double n = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double ly = std::log(y[i]);
        st += t[i];
        sy += ly;
        stt += t[i] * t[i];
        sty += t[i] * ly;
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace

TEST(Frame, SechProfileAlongTheFrame) {
    for (double p : {2.5, 3.0, 4.0, 6.0, 10.0}) {
        for (double omega : {0.5, 1.0, 2.0}) {
            const auto frame = build_frame(build_profile({p, omega, 1.0}));
            std::vector<double> ts;
            for (int i = -40; i <= 40; ++i) ts.push_back(0.25 * i);
            const auto pts = frame.sample(ts);
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const double ref = oracle::sech_phi(ts[i], p, omega);
                EXPECT_NEAR(pts[i].phi, ref, 1e-12 * std::max(1.0, ref))
                    << "p " << p << " omega " << omega << " t " << ts[i];
                EXPECT_DOUBLE_EQ(pts[i].t, ts[i]);
            }
        }
    }
}

TEST(Frame, SampleMatchesPointwiseEvaluation) {
    const auto frame = build_frame(build_profile({6.0, 1.3, 1.0}));
    const std::vector<double> ts = {3.0, -0.5, 0.0, 12.0, -7.25, 0.5, 1e-9};
    const auto pts = frame.sample(ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto single = frame.point(ts[i]);
        EXPECT_NEAR(pts[i].phi, single.phi, 1e-13 * single.phi + 1e-300);
        EXPECT_NEAR(pts[i].dphi, single.dphi, 1e-12 * std::abs(single.dphi) + 1e-15);
    }
}

TEST(Frame, TimeOfAbscissaAgainstCosineClosedForm) {
    for (double omega : {0.5, 1.0, 4.0}) {
        const auto frame = build_frame(build_profile({4.0, omega, 1.0}));
        const double L = M_PI / std::sqrt(2.0);
        for (int i = -45; i <= 45; ++i) {
            const double x = 0.9 * L * i / 45.0;
            const double ref = cosine_t_of_x(x, omega);
            EXPECT_NEAR(frame.t_of_x(x), ref, 1e-8 * std::max(1.0, std::abs(ref))) << x;
        }
    }
}

TEST(Frame, TimeOfAbscissaAgainstDenseQuadrature) {
    // t(x) = int_0^x dy / phi(y), midpoint rule on a fine mesh away from the edge
    const auto prof = build_profile({7.0, 1.0, 1.0});
    const auto frame = build_frame(prof);
    const double L = prof.half_support();
    for (double frac : {0.1, 0.45, 0.9}) {
        const double x = frac * L;
        const double m1 = oracle::midpoint([&](double y) { return 1.0 / prof.phi(y); }, 0.0, x, 2000);
        const double m2 = oracle::midpoint([&](double y) { return 1.0 / prof.phi(y); }, 0.0, x, 4000);
        const double ref = (4.0 * m2 - m1) / 3.0;
        EXPECT_NEAR(frame.t_of_x(x), ref, 1e-8 * std::max(1.0, ref)) << frac;
        EXPECT_NEAR(frame.t_of_x(-x), -ref, 1e-8 * std::max(1.0, ref));
    }
}

TEST(Frame, AbscissaOfTimeAgainstCosineClosedForm) {
    const auto frame = build_frame(build_profile({4.0, 2.0, 1.0}));
    for (double t : {0.0, 0.1, 1.0, 3.0, 8.0, -2.5}) {
        EXPECT_NEAR(frame.x_of_t(t), cosine_x_of_t(t, 2.0), 1e-12);
    }
    // edge gap far out: L - x = sqrt 2 (pi/2 - asin(tanh s)) = sqrt 2 acos(tanh s)
    for (double t : {5.0, 10.0, 15.0}) {
        const double s = std::sqrt(2.0) * t;
        const double ref = std::sqrt(2.0) * std::atan(1.0 / std::sinh(s));
        EXPECT_NEAR(frame.edge_gap(t), ref, 1e-10 * ref) << t;
    }
}

TEST(Frame, RoundTrips) {
    for (double p : {3.0, 5.0, 9.0}) {
        const auto prof = build_profile({p, 1.7, 1.0});
        const auto frame = build_frame(prof);
        const double L = prof.half_support();
        for (double frac : {-0.95, -0.5, 0.0, 0.01, 0.3, 0.8, 0.99}) {
            const double x = frac * L;
            EXPECT_NEAR(frame.x_of_t(frame.t_of_x(x)), x, 1e-11 * L) << p << " " << frac;
        }
        for (double t : {-6.0, -1.0, 0.0, 0.2, 2.0, 9.0}) {
            EXPECT_NEAR(frame.t_of_x(frame.x_of_t(t)), t, 1e-9 * std::max(1.0, std::abs(t)));
        }
        for (double u : {0.01, 0.4, 0.999}) {
            const double phi = u * prof.amplitude();
            EXPECT_NEAR(frame.phi_at(frame.t_of_phi(phi)), phi, 1e-12 * prof.amplitude());
        }
    }
}

TEST(Frame, OddnessAndMonotonicity) {
    const auto frame = build_frame(build_profile({5.0, 1.0, 1.0}));
    double prev = -1e300;
    for (int i = -60; i <= 60; ++i) {
        const double t = 0.2 * i;
        const double x = frame.x_of_t(t);
        EXPECT_EQ(x, -frame.x_of_t(-t));
        EXPECT_GT(x, prev);
        prev = x;
    }
}

TEST(Frame, BeyondSupportIsInfinite) {
    const auto prof = build_profile({4.0, 1.0, 1.0});
    const auto frame = build_frame(prof);
    EXPECT_TRUE(std::isinf(frame.t_of_x(prof.half_support())));
    EXPECT_GT(frame.t_of_x(2.0 * prof.half_support()), 0.0);
    EXPECT_LT(frame.t_of_x(-prof.half_support()), 0.0);
}

TEST(Frame, EdgeGapDecaysAtRateSqrtOmega) {
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        for (double omega : {1.0, 2.0}) {
            const auto frame = build_frame(build_profile({p, omega, 1.0}));
            std::vector<double> ts, gap;
            for (int i = 0; i <= 50; ++i) {
                ts.push_back(5.0 + 0.1 * i);
                gap.push_back(frame.edge_gap(ts.back()));
            }
            EXPECT_NEAR(fitted_rate(ts, gap), -std::sqrt(omega), 0.05 * std::sqrt(omega));
        }
    }
}

TEST(Frame, PotentialDecaysAtRateQSqrtOmega) {
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        const double omega = 1.0;
        const auto frame = build_frame(build_profile({p, omega, 1.0}));
        const double kappa = potential_coefficient(OperatorKind::plus, {p, omega, 1.0});
        std::vector<double> ts, w;
        for (int i = 0; i <= 50; ++i) {
            ts.push_back(5.0 + 0.1 * i);
            w.push_back(kappa * frame.point(ts.back()).level_power);
        }
        const double rate = (p - 2.0) * std::sqrt(omega);
        EXPECT_NEAR(fitted_rate(ts, w), -rate, 0.05 * rate);
    }
}

TEST(Frame, GridIsExactlySymmetric) {
    const auto g = make_grid(7.3, 101);
    EXPECT_DOUBLE_EQ(g.h, 2.0 * 7.3 / 100.0);
    for (std::size_t i = 0; i < g.N; ++i) EXPECT_EQ(g.t(i), -g.t(g.N - 1 - i));
    EXPECT_EQ(g.t(50), 0.0);
    EXPECT_THROW(make_grid(0.0, 101), DomainError);
    EXPECT_THROW(make_grid(1.0, 2), DomainError);
}

TEST(Frame, PotentialCoefficients) {
    const WaveParams w{5.0, 1.0, 1.0};
    EXPECT_DOUBLE_EQ(potential_coefficient(OperatorKind::plus, w), (50.0 - 25.0 + 3.0) / 10.0);
    EXPECT_DOUBLE_EQ(potential_coefficient(OperatorKind::minus, w), 18.0 / 10.0);
    EXPECT_DOUBLE_EQ(potential_shift(OperatorKind::plus, {5.0, 2.0, 1.0}), 0.5);
    EXPECT_DOUBLE_EQ(potential_shift(OperatorKind::minus, {5.0, 2.0, 1.0}), 4.5);
    // minus - plus = (4 - p) gamma for every p
    for (double p : {2.5, 3.0, 7.0, 12.0}) {
        const WaveParams v{p, 1.0, 1.0};
        EXPECT_NEAR(potential_coefficient(OperatorKind::minus, v) -
                        potential_coefficient(OperatorKind::plus, v),
                    4.0 - p, 1e-14 * p * p);
    }
}

TEST(Frame, AssembledOperatorShape) {
    for (double p : {3.0, 6.0, 10.0}) {
        const WaveParams w{p, 1.0, 1.0};
        const auto frame = build_frame(build_profile(w));
        for (auto kind : {OperatorKind::plus, OperatorKind::minus}) {
            const auto op = assemble(frame, kind);
            const std::size_t n = op.grid.N;
            ASSERT_EQ(n, kDefaultGridPoints);
            ASSERT_EQ(op.potential.size(), n);
            const std::size_t mid = (n - 1) / 2;
            // peak W(0) = kappa p omega / (2 gamma)
            EXPECT_NEAR(op.potential[mid], op.kappa * p / 2.0, 1e-13 * op.kappa * p);
            EXPECT_LT(op.potential[0], 1e-10);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_EQ(op.potential[i], op.potential[n - 1 - i]);
                EXPECT_EQ(op.phi[i], op.phi[n - 1 - i]);
            }
            // the minus kernel is even, the plus kernel odd
            if (kind == OperatorKind::minus) {
                EXPECT_EQ(op.kernel_candidate[1], op.kernel_candidate[n - 2]);
            } else {
                EXPECT_EQ(op.kernel_candidate[1], -op.kernel_candidate[n - 2]);
            }
        }
    }
}

TEST(Frame, PotentialDifferenceIdentity) {
    const WaveParams w{7.0, 1.5, 1.0};
    const auto frame = build_frame(build_profile(w));
    const auto plus = assemble_plus(frame, 12.0, 501);
    const auto minus = assemble_minus(frame, 12.0, 501);
    for (std::size_t i = 0; i < plus.grid.N; ++i) {
        const double level = std::pow(plus.phi[i], w.p - 2.0);
        EXPECT_NEAR(minus.potential[i] - plus.potential[i], (4.0 - w.p) * level,
                    1e-12 * (1.0 + level * w.p));
    }
    EXPECT_DOUBLE_EQ(minus.shift - plus.shift, 2.0 * w.omega);
}

TEST(Frame, DefaultTruncationIsLargeEnough) {
    for (double p : {3.0, 4.0, 6.0, 10.0, 12.0}) {
        for (double omega : {0.5, 1.0, 2.0}) {
            const WaveParams w{p, omega, 1.0};
            const auto frame = build_frame(build_profile(w));
            for (auto kind : {OperatorKind::plus, OperatorKind::minus}) {
                const double T = default_truncation(frame, kind);
                const double W = potential_coefficient(kind, w) * frame.point(T).level_power;
                EXPECT_LT(W, 1e-12 * omega);
                EXPECT_GE(std::sqrt(potential_shift(kind, w)) * T, std::log(1e6) - 1e-12);
            }
        }
    }
}
