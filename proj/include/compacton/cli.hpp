#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace compacton {

/// One invocation of the command-line tool.
struct RunConfig {
    std::string subcommand;  ///< profile, frame, spectrum, stability, sweep, variational, selftest
    double p = 4.0;
    double omega = 1.0;
    double gamma = 1.0;
    double T = 0.0;          ///< <= 0: default truncation
    std::size_t N = 0;       ///< 0: default grid size of the subcommand
    double X = 0.0;          ///< <= 0: default variational domain
    std::string format = "json";
    std::string output;      ///< empty: standard output
    std::string model = "kdv";
    std::string kind = "plus";
    std::size_t count = 3;       ///< eigenpairs reported by spectrum
    std::size_t samples = 201;   ///< sample points of profile and frame
    bool refine = false;
    std::size_t max_points = 64001;
    double p_min = 3.0;
    double p_max = 12.0;
    std::size_t p_steps = 10;
    std::vector<double> omegas;  ///< sweep; empty means {omega}
    std::size_t workers = 0;     ///< 0: COMPACTON_WORKERS or hardware concurrency
    std::size_t max_iter = 5000;
    bool verify_minus = false;
    bool numeric_slope = true;
};

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftestFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitNumerical = 4;

/// Executes the configured pipeline and writes the artifact to config.output
/// or to out. Errors are reported on err as a JSON record.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (flag errors exit with kExitUsage and usage text on err) and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace compacton
