#include "compacton/errors.hpp"
#include "compacton/profile.hpp"
#include "compacton/variational.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace compacton;

namespace {

const MinimizationResult& solved(double p, double omega) {
    static std::map<std::pair<double, double>, MinimizationResult> cache;
    auto it = cache.find({p, omega});
    if (it == cache.end()) it = cache.emplace(std::make_pair(p, omega), minimize(p, omega)).first;
    return it->second;
}

double power_sum(const std::vector<double>& v, double q) {
    double s = 0.0;
    for (double x : v) s += std::pow(x, q);
    return s;
}

}  // namespace

TEST(Rearrangement, BellShapedInputIsUnchanged) {
    const std::vector<double> v = {0.0, 1.0, 3.0, 5.0, 4.0, 2.0, 0.0};
    EXPECT_TRUE(is_bell_shaped(v));
    EXPECT_EQ(symmetric_decreasing_rearrange(v), v);
}

TEST(Rearrangement, TwoBumpsBecomeOneCentredBump) {
    const std::vector<double> v = {1, 1, 0, 0, 0, 0, 1, 1, 0};
    const auto r = symmetric_decreasing_rearrange(v);
    EXPECT_EQ(r, (std::vector<double>{0, 0, 0, 1, 1, 1, 1, 0, 0}));
    auto a = v, b = r;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
    EXPECT_TRUE(is_bell_shaped(r));
    EXPECT_FALSE(is_bell_shaped(v));
}

TEST(Rearrangement, PreservesPowerSums) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (std::size_t n : {1u, 2u, 10u, 101u}) {
        std::vector<double> v(n);
        for (double& x : v) x = u(rng);
        const auto r = symmetric_decreasing_rearrange(v);
        EXPECT_TRUE(is_bell_shaped(r));
        for (double q : {1.0, 3.0, 2.0})
            EXPECT_NEAR(power_sum(r, q), power_sum(v, q), 1e-12 * power_sum(v, q));
        EXPECT_EQ(symmetric_decreasing_rearrange(r), r);
    }
}

TEST(Rearrangement, DoesNotIncreaseDirichletEnergy) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> v(41);
        for (double& x : v) x = u(rng);
        const auto r = symmetric_decreasing_rearrange(v);
        EXPECT_LE(grid_objective(r, 0.1, 0.0), grid_objective(v, 0.1, 0.0) + 1e-12);
    }
}

TEST(Rearrangement, RejectsNegativeEntries) {
    EXPECT_THROW(symmetric_decreasing_rearrange({1.0, -0.5}), PreconditionError);
}

TEST(Variational, MinimizerMatchesNormalizedWaveAtPFour) {
    const auto& r = solved(4.0, 1.0);
    ASSERT_TRUE(r.converged);
    const auto ref = scale_normalized(4.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.v.size(); ++i) {
        const double phi = ref.phi(r.x[i]);
        worst = std::max(worst, std::abs(r.v[i] - phi * phi));
    }
    EXPECT_LT(worst, 1e-3);
}

TEST(Variational, ObjectiveMatchesClosedFormMinimizer) {
    for (double p : {3.0, 4.0, 6.0}) {
        const auto& r = solved(p, 1.0);
        const auto ref = scale_normalized(p, 1.0);
        std::vector<double> v(r.v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double phi = ref.phi(r.x[i]);
            v[i] = phi * phi;
        }
        const double target = grid_objective(v, r.h, 1.0);
        EXPECT_NEAR(r.m_est, target, 1e-5 * target) << p;
        EXPECT_LE(r.m_est, target * (1.0 + 1e-9));
    }
}

TEST(Variational, OracleCoefficient) {
    for (double p : {3.0, 4.0, 6.0}) {
        const auto& r = solved(p, 1.0);
        const double c = oracle_c(r);
        EXPECT_GT(c, 0.0);
        EXPECT_NEAR(c, c_coefficient(p, 1.0), 0.01 * c_coefficient(p, 1.0)) << p;
        EXPECT_LT(euler_lagrange_residual(r, c, 0.9), 1e-3) << p;
    }
}

TEST(Variational, OracleCoefficientScaling) {
    const double p = 4.0;
    const double ratio = oracle_c(solved(p, 4.0)) / oracle_c(solved(p, 1.0));
    EXPECT_NEAR(ratio, std::pow(4.0, (p + 4.0) / (2.0 * (p + 1.0))), 1e-3 * ratio);
}

TEST(Variational, IterationInvariants) {
    const auto& r = solved(4.0, 1.0);
    EXPECT_TRUE(r.monotone);
    for (std::size_t i = 1; i < r.log.size(); ++i) EXPECT_LE(r.log[i].objective, r.log[i - 1].objective);
    EXPECT_TRUE(is_bell_shaped(r.v));
    EXPECT_NEAR(grid_constraint(r.v, r.h, 4.0), 1.0, 1e-12);
    EXPECT_EQ(r.log.back().objective, r.m_est);
}

TEST(Variational, SupportEmerges) {
    for (double p : {3.0, 4.0, 6.0}) {
        const auto& r = solved(p, 1.0);
        const double Lc = scale_normalized(p, 1.0).half_support();
        const double vmax = *std::max_element(r.v.begin(), r.v.end());
        for (std::size_t i = 0; i < r.v.size(); ++i)
            if (std::abs(r.x[i]) > 1.1 * Lc) EXPECT_LT(r.v[i], 1e-6 * vmax) << p << " " << r.x[i];
    }
}

TEST(Variational, NonConvergenceIsFlagged) {
    MinimizationOptions o;
    o.N = 201;
    o.max_iter = 3;
    const auto r = minimize(4.0, 1.0, o);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 3u);
    try {
        oracle_c(r);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.last_estimate(), 0.0);
    }
}

TEST(Variational, DomainChecks) {
    MinimizationOptions o;
    o.N = 100;
    EXPECT_THROW(minimize(4.0, 1.0, o), DomainError);
    o.N = 201;
    o.X = 0.5;
    EXPECT_THROW(minimize(4.0, 1.0, o), DomainError);
    EXPECT_THROW(minimize(2.0, 1.0), DomainError);
}
