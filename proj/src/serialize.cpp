#include "compacton/serialize.hpp"

#include "compacton/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace compacton {

namespace {

// JSON has no NaN; non-finite values become null and come back as NaN.
Json number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double read_number(const Json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return v.get<double>();
}

Verdict parse_verdict(const std::string& s) {
    if (s == "stable") return Verdict::stable;
    if (s == "unstable") return Verdict::unstable;
    if (s == "marginal") return Verdict::marginal;
    throw DomainError("unknown verdict '" + s + "'");
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto line = [&os](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << fields[i];
        }
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

Json profile_record(const CompactonProfile& profile) {
    const auto& params = profile.params();
    const auto f = profile.functionals();
    Json j;
    j["p"] = params.p;
    j["omega"] = params.omega;
    j["gamma"] = params.gamma;
    j["L"] = profile.half_support();
    j["phi0"] = profile.amplitude();
    j["I1"] = f.I1;
    j["I2"] = f.I2;
    j["I3"] = f.I3;
    j["hamiltonian"] = f.hamiltonian;
    j["c_norm"] = f.c_norm;
    j["c"] = c_coefficient(params.p, params.omega);
    return j;
}

Json spectral_record(const SpectralReport& report, const SchrodingerOperator& op) {
    Json j;
    j["operator"] = to_string(report.kind);
    j["p"] = op.params.p;
    j["omega"] = op.params.omega;
    j["gamma"] = op.params.gamma;
    j["shift"] = op.shift;
    j["kappa"] = op.kappa;
    j["grid"] = {{"T", report.grid.T}, {"N", report.grid.N}, {"h", report.grid.h}};
    Json ev = Json::array();
    for (double v : report.eigenvalues) ev.push_back(v);
    j["eigenvalues"] = ev;
    j["negative_count"] = report.negative_count;
    j["tol_zero"] = report.tol_zero;
    j["zero_index"] = report.zero_index;
    j["lambda0"] = report.lambda0;
    j["kernel_residual"] = report.kernel_residual;
    j["kernel_cosine"] = report.kernel_cosine;
    return j;
}

Json stability_record(const StabilityReport& r) {
    Json j;
    j["model"] = to_string(r.model);
    j["p"] = r.params.p;
    j["omega"] = r.params.omega;
    j["gamma"] = r.params.gamma;
    j["L"] = r.half_support;
    j["phi0"] = r.amplitude;
    j["mass"] = r.mass;
    j["D"] = r.D;
    j["D_numeric"] = number(r.D_numeric);
    j["D_tol"] = r.D_tol;
    j["negative_eigenvalue"] = r.negative_eigenvalue;
    j["zero_eigenvalue"] = r.zero_eigenvalue;
    j["tol_zero"] = r.tol_zero;
    j["grid"] = {{"T", r.grid_T}, {"N", r.grid_N}};
    j["n_Hplus"] = r.n_Hplus;
    j["n_Hminus"] = r.n_Hminus;
    j["n_D"] = r.n_D;
    j["k_Ham"] = r.k_Ham;
    j["k_r"] = r.k_r;
    j["k_c"] = r.k_c;
    j["k_i"] = r.k_i;
    j["index_formula_applicable"] = r.index_formula_applicable;
    j["theorem_stable"] = r.theorem_stable;
    j["verdict"] = to_string(r.verdict);
    j["note"] = r.note;
    j["scope_note"] = r.scope_note;
    return j;
}

StabilityReport stability_from_json(const Json& j) {
    StabilityReport r;
    r.model = parse_model(j.at("model").get<std::string>());
    r.params = {j.at("p").get<double>(), j.at("omega").get<double>(), j.at("gamma").get<double>()};
    r.half_support = j.at("L").get<double>();
    r.amplitude = j.at("phi0").get<double>();
    r.mass = j.at("mass").get<double>();
    r.D = j.at("D").get<double>();
    r.D_numeric = read_number(j, "D_numeric");
    r.D_tol = j.at("D_tol").get<double>();
    r.negative_eigenvalue = j.at("negative_eigenvalue").get<double>();
    r.zero_eigenvalue = j.at("zero_eigenvalue").get<double>();
    r.tol_zero = j.at("tol_zero").get<double>();
    r.grid_T = j.at("grid").at("T").get<double>();
    r.grid_N = j.at("grid").at("N").get<std::size_t>();
    r.n_Hplus = j.at("n_Hplus").get<std::size_t>();
    r.n_Hminus = j.at("n_Hminus").get<std::size_t>();
    r.n_D = j.at("n_D").get<std::size_t>();
    r.k_Ham = j.at("k_Ham").get<std::size_t>();
    r.k_r = j.at("k_r").get<std::size_t>();
    r.k_c = j.at("k_c").get<std::size_t>();
    r.k_i = j.at("k_i").get<std::size_t>();
    r.index_formula_applicable = j.at("index_formula_applicable").get<bool>();
    r.theorem_stable = j.at("theorem_stable").get<bool>();
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    r.note = j.at("note").get<std::string>();
    r.scope_note = j.at("scope_note").get<std::string>();
    return r;
}

Json sweep_record(const SweepTable& table) {
    Json j;
    j["model"] = to_string(table.model);
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        if (row.report) {
            rows.push_back(stability_record(*row.report));
        } else {
            rows.push_back({{"p", row.p}, {"omega", row.omega}, {"error", row.error}});
        }
    }
    j["rows"] = rows;
    Json th = Json::array();
    for (const auto& t : table.thresholds)
        th.push_back({{"omega", t.omega}, {"p_lo", t.p_lo}, {"p_hi", t.p_hi},
                      {"on_grid", t.on_grid}});
    j["thresholds"] = th;
    return j;
}

Json minimization_record(const MinimizationResult& r, double c_oracle, double c_formula) {
    Json j;
    j["p"] = r.p;
    j["omega"] = r.omega;
    j["X"] = r.X;
    j["N"] = r.v.size();
    j["h"] = r.h;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["monotone"] = r.monotone;
    j["m_est"] = r.m_est;
    j["c_oracle"] = number(c_oracle);
    j["c_formula"] = c_formula;
    Json log = Json::array();
    for (const auto& e : r.log)
        log.push_back({{"iteration", e.iteration}, {"objective", e.objective}});
    j["log"] = log;
    return j;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {"p",    "omega", "L",       "phi0",
                                                  "mass", "D",     "D_numeric", "n_Hplus",
                                                  "k_Ham", "verdict", "model"};
    return cols;
}

std::vector<std::string> sweep_row_fields(const SweepRow& row, Model model) {
    if (!row.report)
        return {format_double(row.p), format_double(row.omega), "", "", "", "", "", "", "",
                "error", to_string(model)};
    const auto& r = *row.report;
    return {format_double(r.params.p), format_double(r.params.omega),
            format_double(r.half_support), format_double(r.amplitude),
            format_double(r.mass), format_double(r.D),
            format_double(r.D_numeric), std::to_string(r.n_Hplus),
            std::to_string(r.k_Ham), to_string(r.verdict),
            to_string(r.model)};
}

}  // namespace compacton
