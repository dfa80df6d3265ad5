#include "compacton/cli.hpp"

#include "compacton/acceptance.hpp"
#include "compacton/errors.hpp"
#include "compacton/frame.hpp"
#include "compacton/profile.hpp"
#include "compacton/serialize.hpp"
#include "compacton/spectrum.hpp"
#include "compacton/stability.hpp"
#include "compacton/variational.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace compacton {

namespace {

using Rows = std::vector<std::vector<std::string>>;

struct Artifact {
    Json json;
    std::vector<std::string> header;
    Rows rows;
};

bool wants_csv(const RunConfig& c) {
    if (c.format == "csv") return true;
    if (c.format == "json") return false;
    throw DomainError("unknown format '" + c.format + "' (expected json or csv)");
}

OperatorKind parse_kind(const std::string& s) {
    if (s == "plus" || s == "+") return OperatorKind::plus;
    if (s == "minus" || s == "-") return OperatorKind::minus;
    throw DomainError("unknown operator '" + s + "' (expected plus or minus)");
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {a};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

Json array_of(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
    return a;
}

Artifact do_profile(const RunConfig& c) {
    const auto prof = build_profile({c.p, c.omega, c.gamma});
    if (c.samples < 2) throw DomainError("--samples must be at least 2");
    const auto xs = linspace(-prof.half_support(), prof.half_support(), c.samples);
    std::vector<double> phi, dphi;
    Artifact a;
    a.header = {"x", "phi", "dphi"};
    for (double x : xs) {
        const auto s = prof.sample(x);
        phi.push_back(s.phi);
        dphi.push_back(s.dphi);
        a.rows.push_back({format_double(x), format_double(s.phi), format_double(s.dphi)});
    }
    a.json = profile_record(prof);
    a.json["samples"] = {{"x", array_of(xs)}, {"phi", array_of(phi)}, {"dphi", array_of(dphi)}};
    return a;
}

Artifact do_frame(const RunConfig& c) {
    const WaveParams w{c.p, c.omega, c.gamma};
    const auto frame = build_frame(build_profile(w));
    if (c.samples < 2) throw DomainError("--samples must be at least 2");
    const double T = c.T > 0.0 ? c.T : default_truncation(frame, OperatorKind::plus);
    const auto ts = linspace(-T, T, c.samples);
    const auto pts = frame.sample(ts);
    const double kp = potential_coefficient(OperatorKind::plus, w);
    const double km = potential_coefficient(OperatorKind::minus, w);
    std::vector<double> xs, phi, wp, wm;
    Artifact a;
    a.header = {"t", "x", "phi", "W_plus", "W_minus"};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double x = frame.x_of_t(ts[i]);
        const double level = std::pow(pts[i].phi, c.p - 2.0);
        xs.push_back(x);
        phi.push_back(pts[i].phi);
        wp.push_back(kp * level);
        wm.push_back(km * level);
        a.rows.push_back({format_double(ts[i]), format_double(x), format_double(pts[i].phi),
                          format_double(kp * level), format_double(km * level)});
    }
    a.json["p"] = c.p;
    a.json["omega"] = c.omega;
    a.json["gamma"] = c.gamma;
    a.json["L"] = frame.profile().half_support();
    a.json["T"] = T;
    a.json["plus"] = {{"shift", potential_shift(OperatorKind::plus, w)}, {"kappa", kp}};
    a.json["minus"] = {{"shift", potential_shift(OperatorKind::minus, w)}, {"kappa", km}};
    a.json["samples"] = {{"t", array_of(ts)}, {"x", array_of(xs)}, {"phi", array_of(phi)},
                         {"W_plus", array_of(wp)}, {"W_minus", array_of(wm)}};
    return a;
}

Artifact do_spectrum(const RunConfig& c) {
    const auto kind = parse_kind(c.kind);
    const auto frame = build_frame(build_profile({c.p, c.omega, c.gamma}));
    const std::size_t N = c.N ? c.N : kDefaultGridPoints;
    if (c.count < 1) throw DomainError("--count must be at least 1");
    Artifact a;
    SpectralReport rep;
    Json refinement;
    if (c.refine) {
        const auto r = refine_until_stable(frame, kind, c.T, N, c.max_points, std::max<std::size_t>(c.count, 2));
        rep = r.report;
        Json levels = Json::array();
        for (std::size_t i = 0; i < r.points.size(); ++i)
            levels.push_back({{"N", r.points[i]}, {"lowest", r.lowest[i].first},
                              {"next", r.lowest[i].second}});
        refinement = {{"converged", r.converged}, {"levels", levels}};
    } else {
        rep = lowest_eigenpairs(assemble(frame, kind, c.T, N), c.count);
    }
    const auto op = assemble(frame, kind, rep.grid.T, rep.grid.N);
    a.json = spectral_record(rep, op);
    if (c.refine) a.json["refinement"] = refinement;
    a.header = {"index", "eigenvalue"};
    for (std::size_t k = 0; k < rep.eigenvalues.size(); ++k)
        a.rows.push_back({std::to_string(k), format_double(rep.eigenvalues[k])});
    return a;
}

StabilityOptions stability_options(const RunConfig& c) {
    StabilityOptions o;
    o.T = c.T;
    if (c.N) o.N = c.N;
    o.compute_numeric_slope = c.numeric_slope;
    o.verify_minus = c.verify_minus;
    return o;
}

void require_natural(const RunConfig& c, const char* what) {
    if (c.gamma != 1.0)
        throw DomainError(std::string(what) + " is defined for the natural wave (gamma = 1)");
}

Artifact do_stability(const RunConfig& c) {
    require_natural(c, "stability");
    const auto model = parse_model(c.model);
    const auto rep = verdict(c.p, c.omega, model, stability_options(c));
    Artifact a;
    a.json = stability_record(rep);
    a.header = sweep_columns();
    a.rows.push_back(sweep_row_fields({c.p, c.omega, rep, {}}, model));
    return a;
}

Artifact do_sweep(const RunConfig& c) {
    require_natural(c, "sweep");
    const auto model = parse_model(c.model);
    if (c.p_steps < 1) throw DomainError("--p-steps must be at least 1");
    if (!(c.p_max >= c.p_min)) throw DomainError("--p-max must not be below --p-min");
    const auto ps = linspace(c.p_min, c.p_max, c.p_steps);
    const auto ws = c.omegas.empty() ? std::vector<double>{c.omega} : c.omegas;
    for (double p : ps) WaveParams{p, 1.0, 1.0}.validate();
    for (double w : ws) WaveParams{4.0, w, 1.0}.validate();
    const auto table = sweep(ps, ws, model, stability_options(c), c.workers);
    Artifact a;
    a.json = sweep_record(table);
    a.header = sweep_columns();
    for (const auto& row : table.rows) a.rows.push_back(sweep_row_fields(row, model));
    return a;
}

Artifact do_variational(const RunConfig& c, bool& converged) {
    MinimizationOptions o;
    o.X = c.X;
    if (c.N) o.N = c.N;
    o.max_iter = c.max_iter;
    const auto r = minimize(c.p, c.omega, o);
    converged = r.converged;
    const double co = r.converged ? oracle_c(r) : std::numeric_limits<double>::quiet_NaN();
    Artifact a;
    a.json = minimization_record(r, co, c_coefficient(c.p, c.omega));
    a.header = {"x", "v"};
    for (std::size_t i = 0; i < r.v.size(); ++i)
        a.rows.push_back({format_double(r.x[i]), format_double(r.v[i])});
    return a;
}

std::string render(const Artifact& a, bool csv) {
    std::ostringstream os;
    if (csv) {
        write_csv(os, a.header, a.rows);
    } else {
        os << a.json.dump(2) << '\n';
    }
    return os.str();
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw DomainError("cannot open output file '" + c.output + "'");
    f << text;
}

int report_error(std::ostream& err, const char* type, const std::string& message, int code,
                 const double* estimate = nullptr) {
    Json j;
    j["error"] = type;
    j["message"] = message;
    j["exit_code"] = code;
    if (estimate) j["last_estimate"] = std::isfinite(*estimate) ? Json(*estimate) : Json(nullptr);
    err << j.dump() << '\n';
    return code;
}

int run_selftest(const RunConfig& c, std::ostream& out) {
    std::ostringstream os;
    int failed = 0;
    for (int id = 1; id <= kCriterionCount; ++id) {
        const auto r = run_criterion(id);
        if (!r.pass) ++failed;
        os << (r.pass ? "PASS" : "FAIL") << ' ' << r.id << ' ' << r.name << ": " << r.detail << '\n';
    }
    os << (failed ? "FAILED " : "ALL PASSED ") << (kCriterionCount - failed) << '/' << kCriterionCount
       << '\n';
    emit(c, os.str(), out);
    return failed ? kExitSelftestFailed : kExitOk;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.subcommand == "selftest") return run_selftest(c, out);
        const bool csv = wants_csv(c);
        Artifact a;
        bool converged = true;
        if (c.subcommand == "profile") {
            a = do_profile(c);
        } else if (c.subcommand == "frame") {
            a = do_frame(c);
        } else if (c.subcommand == "spectrum") {
            a = do_spectrum(c);
        } else if (c.subcommand == "stability") {
            a = do_stability(c);
        } else if (c.subcommand == "sweep") {
            a = do_sweep(c);
        } else if (c.subcommand == "variational") {
            a = do_variational(c, converged);
        } else {
            return report_error(err, "UsageError", "unknown subcommand '" + c.subcommand + "'", kExitUsage);
        }
        emit(c, render(a, csv), out);
        if (!converged) {
            const double est = a.json.value("m_est", 0.0);
            return report_error(err, "ConvergenceError",
                                "minimisation did not converge within --max-iter iterations",
                                kExitNumerical, &est);
        }
        return kExitOk;
    } catch (const DomainError& e) {
        return report_error(err, "DomainError", e.what(), kExitDomain);
    } catch (const ConvergenceError& e) {
        const double est = e.last_estimate();
        return report_error(err, "ConvergenceError", e.what(), kExitNumerical, &est);
    } catch (const InconsistencyError& e) {
        return report_error(err, "InconsistencyError", e.what(), kExitNumerical);
    } catch (const PreconditionError& e) {
        return report_error(err, "PreconditionError", e.what(), kExitNumerical);
    } catch (const std::exception& e) {
        return report_error(err, "Error", e.what(), kExitNumerical);
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability analysis of compactons of the degenerate KdV and NLS equations",
                 "compacton"};
    app.require_subcommand(1);
    RunConfig c;
    double omega_single = 1.0;

    auto common = [&](CLI::App* s, bool list_omega) {
        s->add_option("--p", c.p, "nonlinearity exponent, p > 2");
        if (list_omega) {
            s->add_option("--omega", c.omegas, "frequencies (repeat or comma-separate)")
                ->delimiter(',')
                ->expected(1, -1);
        } else {
            s->add_option("--omega", omega_single, "frequency, omega > 0");
        }
        s->add_option("--gamma", c.gamma, "nonlinearity coefficient, gamma > 0");
        s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--output,-o", c.output, "output file (default: standard output)");
    };
    auto grid = [&](CLI::App* s) {
        s->add_option("--T", c.T, "truncation half-width of the t-grid (default: automatic)");
        s->add_option("--N", c.N, "number of grid points");
    };

    auto* profile = app.add_subcommand("profile", "compacton profile and its functionals");
    common(profile, false);
    profile->add_option("--samples", c.samples, "number of sample points on [-L, L]");

    auto* frame = app.add_subcommand("frame", "profile and potentials in the travelling frame");
    common(frame, false);
    frame->add_option("--T", c.T, "sample on [-T, T] (default: truncation of L+)");
    frame->add_option("--samples", c.samples, "number of sample points");

    auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of L+ or L-");
    common(spectrum, false);
    grid(spectrum);
    spectrum->add_option("--kind", c.kind, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
    spectrum->add_option("--count", c.count, "number of eigenpairs");
    spectrum->add_flag("--refine", c.refine, "double the grid until the spectrum settles");
    spectrum->add_option("--max-points", c.max_points, "largest grid considered by --refine");

    auto stab_flags = [&](CLI::App* s) {
        s->add_option("--model", c.model, "kdv or nls");
        s->add_flag("--verify-minus", c.verify_minus, "recompute the negative count of L-");
        s->add_flag("!--no-numeric-slope", c.numeric_slope, "skip the operator route for D");
    };
    auto* stability = app.add_subcommand("stability", "stability verdict for one wave");
    common(stability, false);
    grid(stability);
    stab_flags(stability);

    auto* sweep_cmd = app.add_subcommand("sweep", "stability table over a p grid");
    common(sweep_cmd, true);
    grid(sweep_cmd);
    stab_flags(sweep_cmd);
    sweep_cmd->add_option("--p-min", c.p_min, "smallest p");
    sweep_cmd->add_option("--p-max", c.p_max, "largest p");
    sweep_cmd->add_option("--p-steps", c.p_steps, "number of p values");
    sweep_cmd->add_option("--workers", c.workers, "worker threads (default: COMPACTON_WORKERS or all cores)");

    auto* variational = app.add_subcommand("variational", "constrained minimisation oracle");
    common(variational, false);
    variational->add_option("--X", c.X, "domain half-width (default: 1.5 L)");
    variational->add_option("--N", c.N, "odd number of grid points (default 2001)");
    variational->add_option("--max-iter", c.max_iter, "iteration budget");

    auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
    selftest->add_option("--output,-o", c.output, "output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    c.omega = omega_single;
    return run(c, out, err);
}

}  // namespace compacton
