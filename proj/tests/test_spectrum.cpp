#include "compacton/errors.hpp"
#include "compacton/spectrum.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace compacton;

namespace {

// W(t) is a Poschl-Teller well a^2 nu(nu+1) sech^2(a t), a = (p-2) sqrt(omega) / 2,
// so the bound states are shift - a^2 (nu - n)^2 for n < nu.
//   plus:  nu = (p-1)/(p-2)
//   minus: nu = 3/(p-2)
double poschl_teller_level(OperatorKind kind, double p, double omega, int n) {
    const double q = p - 2.0;
    const double a2 = 0.25 * q * q * omega;
    const double nu = kind == OperatorKind::plus ? (p - 1.0) / q : 3.0 / q;
    const double shift = kind == OperatorKind::plus ? 0.25 * omega : 2.25 * omega;
    return shift - a2 * (nu - n) * (nu - n);
}

SchrodingerOperator free_operator(double shift, double T, std::size_t N) {
    SchrodingerOperator op;
    op.shift = shift;
    op.grid = make_grid(T, N);
    op.potential.assign(N, 0.0);
    op.phi.assign(N, 0.0);
    op.kernel_candidate.assign(N, 1.0);
    op.phi_three_halves.assign(N, 0.0);
    return op;
}

struct Cached {
    TravelingFrame frame;
    SchrodingerOperator plus, minus;
};

const Cached& cached(double p) {
    static std::map<double, Cached> cache;
    auto it = cache.find(p);
    if (it == cache.end()) {
        auto frame = build_frame(build_profile({p, 1.0, 1.0}));
        auto plus = assemble_plus(frame);
        auto minus = assemble_minus(frame);
        it = cache.emplace(p, Cached{std::move(frame), std::move(plus), std::move(minus)}).first;
    }
    return it->second;
}

}  // namespace

TEST(Spectrum, FreeOperatorMatchesDiscreteSine) {
    const double shift = 0.3;
    const auto op = free_operator(shift, 5.0, 101);
    const auto sys = TridiagonalSystem::from_operator(op);
    const double h = op.grid.h;
    for (std::size_t k = 0; k < 5; ++k) {
        const double s = std::sin(M_PI * (k + 1) / (2.0 * 102.0));
        EXPECT_NEAR(sys.eigenvalue(k, 1e-13), shift + 4.0 * s * s / (h * h), 1e-11);
    }
    EXPECT_EQ(sys.count_below(shift), 0u);
    const auto b = sys.bounds();
    EXPECT_LE(b.first, shift + 1e-12);
    EXPECT_GE(b.second, shift + 4.0 / (h * h) - 1e-9);
}

TEST(Spectrum, SturmCountAgainstDenseJacobi) {
    const auto& c = cached(5.0);
    const auto op = assemble_plus(c.frame, 10.0, 121);
    const auto sys = TridiagonalSystem::from_operator(op);
    const std::size_t n = sys.size();
    std::vector<double> dense(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        dense[i * n + i] = sys.diagonal[i];
        if (i + 1 < n) dense[i * n + i + 1] = dense[(i + 1) * n + i] = sys.off_diagonal[i];
    }
    const auto ev = oracle::jacobi_eigenvalues(dense, n);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pick(ev.front() - 1.0, ev.back() + 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double sigma = pick(rng);
        const auto expected = static_cast<std::size_t>(
            std::lower_bound(ev.begin(), ev.end(), sigma) - ev.begin());
        EXPECT_EQ(sys.count_below(sigma), expected) << sigma;
    }
    for (std::size_t k : {0u, 1u, 2u, 60u, 120u})
        EXPECT_NEAR(sys.eigenvalue(k, 1e-12), ev[k], 1e-9 * std::max(1.0, std::abs(ev[k])));
}

TEST(Spectrum, PlusBoundStatesArePoschlTeller) {
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        const auto& c = cached(p);
        const auto rep = lowest_eigenpairs(c.plus, 3);
        const double scale = c.plus.scale();
        const double h = c.plus.grid.h;
        EXPECT_NEAR(rep.eigenvalues[0], poschl_teller_level(OperatorKind::plus, p, 1.0, 0),
                    10.0 * h * h * scale) << p;
        EXPECT_NEAR(poschl_teller_level(OperatorKind::plus, p, 1.0, 1), 0.0, 1e-14);
        EXPECT_EQ(rep.negative_count, 1u) << p;
        EXPECT_EQ(rep.zero_index, 1u);
        EXPECT_LT(std::abs(rep.lambda0), 10.0 * h * h * scale);
        EXPECT_LE(std::abs(rep.lambda0), rep.tol_zero);
        EXPECT_GT(rep.kernel_cosine, 1.0 - 1e-6) << p;
        EXPECT_GT(rep.eigenvalues[2], rep.tol_zero);
    }
}

TEST(Spectrum, PlusThirdLevelForFlatWell) {
    // p = 5/2: nu = 3, so a third bound state 3/16 sits below the continuum at 1/4
    const auto frame = build_frame(build_profile({2.5, 1.0, 1.0}));
    const auto rep = lowest_eigenpairs(assemble_plus(frame), 3);
    for (int n = 0; n < 3; ++n)
        EXPECT_NEAR(rep.eigenvalues[n], poschl_teller_level(OperatorKind::plus, 2.5, 1.0, n), 1e-4);
    EXPECT_NEAR(rep.eigenvalues[2], 0.1875, 1e-4);
    EXPECT_EQ(rep.negative_count, 1u);
}

TEST(Spectrum, MinusIsNonNegativeWithPhiThreeHalvesKernel) {
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        const auto& c = cached(p);
        const auto rep = lowest_eigenpairs(c.minus, 2);
        const double h = c.minus.grid.h;
        EXPECT_EQ(rep.negative_count, 0u);
        EXPECT_EQ(rep.zero_index, 0u);
        EXPECT_LT(std::abs(rep.eigenvalues[0]), 10.0 * h * h * c.minus.scale());
        EXPECT_GT(rep.kernel_cosine, 1.0 - 1e-6);
        EXPECT_GT(rep.eigenvalues[1], rep.tol_zero);
        if (p < 5.0) {
            EXPECT_NEAR(rep.eigenvalues[1], poschl_teller_level(OperatorKind::minus, p, 1.0, 1),
                        1e-3);
        }
    }
}

TEST(Spectrum, EigenvectorsAreOrthonormalAndSigned) {
    const auto& c = cached(4.0);
    const auto rep = lowest_eigenpairs(c.plus, 3);
    const double h = c.plus.grid.h;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_NEAR(grid_inner(rep.eigenvectors[i], rep.eigenvectors[j], h), i == j ? 1.0 : 0.0,
                        1e-9);
        EXPECT_LT(residual_norm(c.plus, rep.eigenvectors[i]) - std::abs(rep.eigenvalues[i]), 1e-8);
        const auto& v = rep.eigenvectors[i];
        const auto mx = std::max_element(v.begin(), v.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        });
        EXPECT_GT(*mx, 0.0);
    }
    // ground state is even and positive
    const auto& g = rep.eigenvectors[0];
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(g[i], -1e-12);
}

TEST(Spectrum, DiscretizationErrorIsSecondOrder) {
    const auto frame = build_frame(build_profile({6.0, 1.0, 1.0}));
    const double T = default_truncation(frame, OperatorKind::plus);
    const double exact = poschl_teller_level(OperatorKind::plus, 6.0, 1.0, 0);
    const double e1 = lowest_eigenpairs(assemble_plus(frame, T, 401), 1).eigenvalues[0] - exact;
    const double e2 = lowest_eigenpairs(assemble_plus(frame, T, 801), 1).eigenvalues[0] - exact;
    const double ratio = e1 / e2;
    EXPECT_GE(ratio, 3.0);
    EXPECT_LE(ratio, 5.0);
}

TEST(Spectrum, DeterministicAcrossCalls) {
    const auto& c = cached(3.0);
    const auto a = lowest_eigenpairs(c.plus, 3);
    const auto b = lowest_eigenpairs(c.plus, 3);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(Spectrum, KernelProjectedSolveRejectsKernelRhs) {
    const auto& c = cached(4.0);
    EXPECT_THROW(kernel_projected_solve(c.plus, c.plus.kernel_candidate, c.plus.kernel_candidate),
                 PreconditionError);
}

TEST(Spectrum, KernelProjectedSolveInvertsOnEigenvectors) {
    const auto& c = cached(4.0);
    const auto rep = lowest_eigenpairs(c.plus, 3);
    const auto& k = rep.eigenvectors[1];
    for (std::size_t j : {0u, 2u}) {
        const auto g = kernel_projected_solve(c.plus, rep.eigenvectors[j], k);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(g[i] - rep.eigenvectors[j][i] / rep.eigenvalues[j]));
        EXPECT_LT(worst, 1e-6 / std::abs(rep.eigenvalues[j]));
        EXPECT_NEAR(grid_inner(g, k, c.plus.grid.h), 0.0, 1e-10);
    }
}

TEST(Spectrum, OperatorSlopeSignFollowsThreshold) {
    for (double p : {6.0, 10.0}) {
        const auto& c = cached(p);
        const auto g = kernel_projected_solve(c.plus, c.plus.phi_three_halves, c.plus.kernel_candidate);
        const double d = grid_inner(g, c.plus.phi_three_halves, c.plus.grid.h);
        if (p < 8.0) {
            EXPECT_LT(d, 0.0);
        } else {
            EXPECT_GT(d, 0.0);
        }
    }
}

TEST(Spectrum, FormValueOnEigenvectorIsEigenvalue) {
    const auto& c = cached(6.0);
    const auto rep = lowest_eigenpairs(c.plus, 3);
    for (std::size_t j = 0; j < 3; ++j)
        EXPECT_NEAR(form_value(c.plus, rep.eigenvectors[j]), rep.eigenvalues[j], 1e-9);
    EXPECT_GE(form_value(c.minus, c.minus.phi), 0.0);
}

TEST(Spectrum, FormValueRayleighIdentity) {
    // <L+ phi^{3/2}, phi^{3/2}> = -omega (3p^2 - 10p + 8) / (p + 4) I2
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        const auto& c = cached(p);
        const double I2 = c.frame.profile().functionals().I2;
        const double expected = -(3.0 * p * p - 10.0 * p + 8.0) / (p + 4.0) * I2;
        EXPECT_NEAR(form_value(c.plus, c.plus.phi_three_halves), expected, 0.01 * std::abs(expected))
            << p;
        EXPECT_NEAR(form_value(c.minus, c.minus.phi_three_halves), 0.0, 1e-3 * I2);
    }
}

TEST(Spectrum, SizeMismatchIsRejected) {
    const auto& c = cached(4.0);
    std::vector<double> wrong(7, 1.0);
    EXPECT_THROW(form_value(c.plus, wrong), PreconditionError);
    EXPECT_THROW(lowest_eigenpairs(c.plus, 0), PreconditionError);
}

TEST(Spectrum, RefinementSettles) {
    const auto frame = build_frame(build_profile({4.0, 1.0, 1.0}));
    const auto r = refine_until_stable(frame, OperatorKind::plus, 0.0, 501, 20001, 3, 1e-4);
    ASSERT_TRUE(r.converged);
    ASSERT_GE(r.points.size(), 2u);
    for (std::size_t i = 1; i < r.points.size(); ++i)
        EXPECT_EQ(r.points[i], 2 * r.points[i - 1] - 1);
    EXPECT_NEAR(r.lowest.back().first, -2.0, 1e-3);
    EXPECT_EQ(r.report.negative_count, 1u);

    const auto capped = refine_until_stable(frame, OperatorKind::plus, 0.0, 501, 600, 3, 1e-14);
    EXPECT_FALSE(capped.converged);
    EXPECT_EQ(capped.points.size(), 1u);
}
