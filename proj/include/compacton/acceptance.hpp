#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace compacton {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  ///< worst observed quantity against its bound
    double seconds = 0.0;
};

/// Number of release criteria.
inline constexpr int kCriterionCount = 11;

/// Runs one criterion (1-based). Exceptions inside a criterion yield a failing
/// result carrying the message.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance();

/// Discrepancy between the x-form and the t-form of the quadratic forms of
/// L+ and L- on one random smooth test function supported inside (-0.7L, 0.7L),
/// each discretized with M and 2M intervals.
struct IsometryCheck {
    double plus_coarse = 0.0;
    double plus_fine = 0.0;
    double minus_coarse = 0.0;
    double minus_fine = 0.0;
    double plus_value = 0.0;   ///< fine x-form value of q+
    double minus_value = 0.0;  ///< fine x-form value of q-
    double plus_ratio() const { return plus_coarse / plus_fine; }
    double minus_ratio() const { return minus_coarse / minus_fine; }
};
IsometryCheck conjugation_isometry(double p, double omega, unsigned seed, std::size_t M = 800);

}  // namespace compacton
