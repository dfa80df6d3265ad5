#include "compacton/acceptance.hpp"

#include "compacton/frame.hpp"
#include "compacton/profile.hpp"
#include "compacton/spectrum.hpp"
#include "compacton/stability.hpp"
#include "compacton/variational.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace compacton {

namespace {

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            else detail.str("");
            pass = false;
            detail << what;
        }
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

double fitted_log_slope(const std::vector<double>& t, const std::vector<double>& y) {
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

CriterionResult closed_form_p4() {
    Check c;
    double worst_L = 0, worst_phi = 0, worst_mass = 0;
    for (double omega : {0.5, 1.0, 2.0}) {
        const auto prof = build_profile({4.0, omega, 1.0});
        const double L = M_PI / std::sqrt(2.0);
        worst_L = std::max(worst_L, std::abs(prof.half_support() - L));
        for (int i = 0; i <= 1000; ++i) {
            const double x = -L + 2.0 * L * i / 1000.0;
            const double ref = std::sqrt(omega * (1.0 + std::cos(std::sqrt(2.0) * x)));
            worst_phi = std::max(worst_phi, std::abs(prof.phi(x) - ref));
        }
        worst_mass = std::max(worst_mass,
                              std::abs(prof.functionals().I2 - std::sqrt(2.0) * M_PI * omega));
    }
    c.expect(worst_L < 1e-10, "L error " + fmt(worst_L));
    c.expect(worst_phi < 1e-8, "phi sup error " + fmt(worst_phi));
    c.expect(worst_mass < 1e-8, "mass error " + fmt(worst_mass));
    if (c.pass)
        c.detail << "L " << fmt(worst_L) << ", phi " << fmt(worst_phi) << ", mass " << fmt(worst_mass);
    return {1, "closed-form p=4 compacton", c.pass, c.detail.str()};
}

std::vector<WaveParams> random_sample() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> P(2.5, 12.0), W(0.25, 4.0);
    std::vector<WaveParams> out;
    for (int i = 0; i < 20; ++i) {
        double p = P(rng);
        if (p <= 2.5) p = 12.0;  // the sample interval is open at 2.5
        out.push_back({p, W(rng), 1.0});
    }
    return out;
}

CriterionResult pohozaev_suite() {
    Check c;
    double worst = 0.0;
    for (const auto& w : random_sample()) {
        const auto f = build_profile(w).functionals();
        const double p = w.p, om = w.omega;
        const double e1 = std::abs(2.0 * f.I1 + om * f.I2 - f.I3);
        const double e2 = std::abs(f.I1 - (p - 2.0) / (p + 4.0) * om * f.I2);
        const double e3 = std::abs(f.I3 - 3.0 * p * om / (p + 4.0) * f.I2);
        const double rel = std::max({e1, e2, e3}) / f.I3;
        worst = std::max(worst, rel);
        c.expect(rel < 1e-8, "p " + fmt(p) + " omega " + fmt(om) + " relative defect " + fmt(rel));
    }
    if (c.pass) c.detail << "worst relative defect " << fmt(worst);
    return {2, "Pohozaev identities", c.pass, c.detail.str()};
}

CriterionResult amplitude_support() {
    Check c;
    double worst = 0.0;
    for (const auto& w : random_sample()) {
        const auto prof = build_profile(w);
        c.expect(prof.amplitude() == std::pow(w.p * w.omega / 2.0, 1.0 / (w.p - 2.0)),
                 "amplitude mismatch at p " + fmt(w.p));
        const double e = std::abs(prof.half_support() - half_support_closed_form(w.p, w.omega));
        worst = std::max(worst, e);
        c.expect(e < 1e-10, "support error " + fmt(e) + " at p " + fmt(w.p));
    }
    if (c.pass) c.detail << "amplitudes exact, worst support error " << fmt(worst);
    return {3, "amplitude and support formulas", c.pass, c.detail.str()};
}

CriterionResult spectral_facts() {
    Check c;
    double worst_cos = 1.0, worst_zero = 0.0;
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        const auto frame = build_frame(build_profile({p, 1.0, 1.0}));
        const auto plus = assemble_plus(frame);
        const auto rp = lowest_eigenpairs(plus, 3);
        const double band = 10.0 * plus.grid.h * plus.grid.h * plus.scale();
        const std::string at = " at p " + fmt(p);
        c.expect(rp.negative_count == 1, "L+ has " + std::to_string(rp.negative_count) +
                                              " negative eigenvalues" + at);
        c.expect(rp.zero_index == 1 && std::abs(rp.lambda0) < band,
                 "L+ second eigenvalue " + fmt(rp.eigenvalues[1]) + " outside band " + fmt(band) + at);
        c.expect(rp.kernel_cosine > 1.0 - 1e-6, "L+ kernel cosine defect " + fmt(1.0 - rp.kernel_cosine) + at);

        const auto minus = assemble_minus(frame);
        const auto rm = lowest_eigenpairs(minus, 2);
        c.expect(std::abs(rm.eigenvalues[0]) < band,
                 "L- lowest eigenvalue " + fmt(rm.eigenvalues[0]) + at);
        c.expect(rm.kernel_cosine > 1.0 - 1e-6, "L- kernel cosine defect " + fmt(1.0 - rm.kernel_cosine) + at);
        c.expect(rm.negative_count == 0 && rm.eigenvalues[1] > rm.tol_zero,
                 "L- has further nonpositive eigenvalues" + at);
        worst_cos = std::min({worst_cos, rp.kernel_cosine, rm.kernel_cosine});
        worst_zero = std::max({worst_zero, std::abs(rp.lambda0) / band, std::abs(rm.eigenvalues[0]) / band});
    }
    if (c.pass)
        c.detail << "worst kernel cosine defect " << fmt(1.0 - worst_cos)
                 << ", worst |lambda0| / band " << fmt(worst_zero);
    return {4, "spectral facts of L+ and L-", c.pass, c.detail.str()};
}

CriterionResult rayleigh_check() {
    Check c;
    double worst = 0.0;
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        for (double omega : {1.0, 2.0}) {
            const auto prof = build_profile({p, omega, 1.0});
            const auto op = assemble_plus(build_frame(prof));
            const double expected =
                -omega * (3.0 * p * p - 10.0 * p + 8.0) / (p + 4.0) * prof.functionals().I2;
            const double rel = std::abs(form_value(op, op.phi_three_halves) - expected) / std::abs(expected);
            worst = std::max(worst, rel);
            c.expect(rel < 0.01, "relative error " + fmt(rel) + " at p " + fmt(p));
        }
    }
    if (c.pass) c.detail << "worst relative error " << fmt(worst);
    return {5, "Rayleigh quotient on phi^{3/2}", c.pass, c.detail.str()};
}

CriterionResult slope_agreement() {
    Check c;
    double worst_fd = 0.0, worst_op = 0.0;
    for (double p : {3.0, 6.0, 10.0}) {
        for (double omega : {0.5, 1.0, 2.0}) {
            const double d = slope_D(p, omega);
            const double fd = slope_D_fd(p, omega, 1e-4);
            const double op = slope_D_operator(p, omega);
            const double e_fd = std::abs(d - fd);
            const double e_op = std::max(std::abs(op - d) / std::abs(d), std::abs(op - fd) / std::abs(fd));
            worst_fd = std::max(worst_fd, e_fd);
            worst_op = std::max(worst_op, e_op);
            const std::string at = " at p " + fmt(p) + " omega " + fmt(omega);
            c.expect(e_fd < 1e-6, "closed form vs finite difference " + fmt(e_fd) + at);
            c.expect(e_op < 0.02, "operator route relative error " + fmt(e_op) + at);
        }
    }
    if (c.pass)
        c.detail << "closed vs fd " << fmt(worst_fd) << ", operator relative " << fmt(worst_op);
    return {6, "slope routes agree", c.pass, c.detail.str()};
}

CriterionResult threshold_reproduction() {
    Check c;
    std::vector<double> integers, offset;
    for (int i = 0; i < 10; ++i) integers.push_back(3.0 + i);
    for (int i = 0; i < 12; ++i) offset.push_back(3.0 + 9.0 * i / 11.0);
    StabilityOptions opts;
    opts.compute_numeric_slope = false;
    double widest = 0.0;
    for (Model model : {Model::kdv, Model::nls}) {
        const std::string m = std::string(" (") + to_string(model) + ")";
        for (const auto* grid : {&integers, &offset}) {
            const auto table = sweep(*grid, {1.0}, model, opts);
            for (const auto& row : table.rows)
                c.expect(row.report.has_value(), "row p " + fmt(row.p) + " failed: " + row.error + m);
            c.expect(table.thresholds.size() == 1, "expected one sign change" + m);
            for (const auto& b : table.thresholds) {
                c.expect(b.p_lo <= 8.0 && b.p_hi >= 8.0 && b.p_hi - b.p_lo <= 1e-6,
                         "bracket [" + fmt(b.p_lo) + ", " + fmt(b.p_hi) + "]" + m);
                widest = std::max(widest, b.p_hi - b.p_lo);
            }
        }
        for (double p : {3.0, 4.0, 6.0, 7.9})
            c.expect(verdict(p, 1.0, model, opts).verdict == Verdict::stable, "p " + fmt(p) + " not stable" + m);
        for (double p : {8.1, 10.0, 12.0})
            c.expect(verdict(p, 1.0, model, opts).verdict == Verdict::unstable,
                     "p " + fmt(p) + " not unstable" + m);
        const auto r8 = verdict(8.0, 1.0, model, opts);
        c.expect(r8.verdict == Verdict::marginal && r8.theorem_stable, "p 8 not marginal" + m);
    }
    if (c.pass) c.detail << "threshold at 8, widest bracket " << fmt(widest);
    return {7, "stability threshold p = 8", c.pass, c.detail.str()};
}

CriterionResult frame_asymptotics() {
    Check c;
    double worst_x = 0.0, worst_w = 0.0;
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        for (double omega : {1.0, 2.0}) {
            const WaveParams w{p, omega, 1.0};
            const auto frame = build_frame(build_profile(w));
            std::vector<double> ts, gap, pot;
            for (int i = 0; i <= 50; ++i) {
                const double t = 5.0 + 0.1 * i;
                ts.push_back(t);
                gap.push_back(frame.edge_gap(t));
                pot.push_back(potential_coefficient(OperatorKind::plus, w) *
                              std::pow(frame.phi_at(t), p - 2.0));
            }
            const double rx = fitted_log_slope(ts, gap);
            const double rw = fitted_log_slope(ts, pot);
            const double ex = std::abs(rx + std::sqrt(omega)) / std::sqrt(omega);
            const double ew = std::abs(rw + (p - 2.0) * std::sqrt(omega)) / ((p - 2.0) * std::sqrt(omega));
            worst_x = std::max(worst_x, ex);
            worst_w = std::max(worst_w, ew);
            const std::string at = " at p " + fmt(p) + " omega " + fmt(omega);
            c.expect(ex < 0.05, "edge rate error " + fmt(ex) + at);
            c.expect(ew < 0.05, "potential rate error " + fmt(ew) + at);
        }
    }
    if (c.pass) c.detail << "edge rate " << fmt(worst_x) << ", potential rate " << fmt(worst_w);
    return {8, "frame asymptotics", c.pass, c.detail.str()};
}

CriterionResult isometry() {
    Check c;
    double lo = 1e300, hi = 0.0;
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const auto r = conjugation_isometry(6.0, 1.0, seed);
        for (double ratio : {r.plus_ratio(), r.minus_ratio()}) {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            c.expect(ratio >= 3.0 && ratio <= 5.0, "refinement ratio " + fmt(ratio) +
                                                        " for test function " + std::to_string(seed));
        }
    }
    if (c.pass) c.detail << "refinement ratios in [" << fmt(lo) << ", " << fmt(hi) << "]";
    return {9, "conjugation isometry", c.pass, c.detail.str()};
}

CriterionResult variational_oracle() {
    Check c;
    MinimizationOptions o;
    o.N = 2001;
    const auto r = minimize(4.0, 1.0, o);
    c.expect(r.converged, "minimisation did not converge in " + std::to_string(r.iterations) + " steps");
    const auto ref = scale_normalized(4.0, 1.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < r.v.size(); ++i) {
        const double phi = ref.phi(r.x[i]);
        sup = std::max(sup, std::abs(r.v[i] - phi * phi));
    }
    c.expect(sup < 1e-3, "sup error " + fmt(sup));
    double rel = 1.0;
    if (r.converged) {
        const double cf = c_coefficient(4.0, 1.0);
        rel = std::abs(oracle_c(r) - cf) / cf;
    }
    c.expect(rel < 0.01, "c relative error " + fmt(rel));
    bool monotone = r.monotone;
    for (std::size_t i = 1; i < r.log.size(); ++i)
        monotone = monotone && r.log[i].objective <= r.log[i - 1].objective;
    c.expect(monotone, "objective increased");
    if (c.pass)
        c.detail << "sup error " << fmt(sup) << ", c relative " << fmt(rel) << ", "
                 << r.iterations << " monotone steps";
    return {10, "variational oracle", c.pass, c.detail.str()};
}

CriterionResult scaling_laws() {
    Check c;
    double worst_sup = 0.0, worst_exp = 0.0;
    for (double p : {3.0, 4.0, 6.0, 10.0}) {
        for (double omega : {0.25, 16.0}) {
            const auto scaled = normalized_by_scaling(p, omega);
            const auto direct = scale_normalized(p, omega);
            const double L = direct.half_support();
            double sup = 0.0;
            for (int i = 0; i <= 1000; ++i) {
                const double x = -1.05 * L + 2.1 * L * i / 1000.0;
                sup = std::max(sup, std::abs(scaled.phi(x) - direct.phi(x)));
            }
            worst_sup = std::max(worst_sup, sup);
            c.expect(sup < 1e-8, "scaling sup error " + fmt(sup) + " at p " + fmt(p));
        }
        const double e = std::log(c_coefficient_from_wave(p, 4.0) / c_coefficient_from_wave(p, 1.0)) /
                         std::log(4.0);
        const double err = std::abs(e - (p + 4.0) / (2.0 * (p + 1.0)));
        worst_exp = std::max(worst_exp, err);
        c.expect(err < 1e-6, "c exponent error " + fmt(err) + " at p " + fmt(p));
    }
    if (c.pass) c.detail << "sup error " << fmt(worst_sup) << ", exponent error " << fmt(worst_exp);
    return {11, "scaling laws", c.pass, c.detail.str()};
}

// Smooth bump exp(-1 / (1 - s^2)) on |s| < 1.
double bump(double s) {
    const double d = 1.0 - s * s;
    return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

struct TestFunction {
    double a[3], c[3], w[3];
    double operator()(double x) const {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += a[j] * bump((x - c[j]) / w[j]);
        return s;
    }
};

struct FormPair {
    double plus, minus;
};

// Forward differences for the gradient, lumped sums for the potential.
FormPair x_forms(const CompactonProfile& prof, const TestFunction& u, double a, std::size_t M) {
    const double p = prof.params().p, omega = prof.params().omega, gamma = prof.params().gamma;
    const double h = 2.0 * a / static_cast<double>(M);
    double grad = 0.0, pot = 0.0, mass = 0.0, prev = 0.0;
    for (std::size_t i = 0; i <= M; ++i) {
        const double x = -a + h * static_cast<double>(i);
        const double phi = prof.phi(x);
        const double ux = u(x);
        const double F = phi * ux;
        if (i > 0) grad += (F - prev) * (F - prev) / h;
        prev = F;
        pot += std::pow(phi, p - 2.0) * ux * ux * h;
        mass += ux * ux * h;
    }
    return {grad - (p - 2.0) * gamma * pot, grad + 2.0 * omega * mass - 2.0 * gamma * pot};
}

FormPair t_forms(const TravelingFrame& frame, const TestFunction& u, double b, std::size_t M) {
    const auto& prm = frame.profile().params();
    const double h = 2.0 * b / static_cast<double>(M);
    std::vector<double> ts(M + 1);
    for (std::size_t i = 0; i <= M; ++i) ts[i] = -b + h * static_cast<double>(i);
    const auto pts = frame.sample(ts);
    const double kp = potential_coefficient(OperatorKind::plus, prm);
    const double km = potential_coefficient(OperatorKind::minus, prm);
    const double sp = potential_shift(OperatorKind::plus, prm);
    const double sm = potential_shift(OperatorKind::minus, prm);
    double grad = 0.0, plus = 0.0, minus = 0.0, prev = 0.0;
    for (std::size_t i = 0; i <= M; ++i) {
        const double x = frame.x_of_t(ts[i]);
        const double f = std::sqrt(pts[i].phi) * u(x);
        if (i > 0) grad += (f - prev) * (f - prev) / h;
        prev = f;
        const double level = std::pow(pts[i].phi, prm.p - 2.0);
        plus += (sp - kp * level) * f * f * h;
        minus += (sm - km * level) * f * f * h;
    }
    return {grad + plus, grad + minus};
}

}  // namespace

IsometryCheck conjugation_isometry(double p, double omega, unsigned seed, std::size_t M) {
    const auto prof = build_profile({p, omega, 1.0});
    const auto frame = build_frame(prof);
    const double L = prof.half_support();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 2.0), centre(-0.35, 0.35), width(0.1, 0.3);
    TestFunction u{};
    for (int j = 0; j < 3; ++j) {
        u.a[j] = amp(rng);
        u.c[j] = centre(rng) * L;
        u.w[j] = width(rng) * L;
    }
    const double a = 0.7 * L;
    const double b = frame.t_of_x(a);
    const auto xc = x_forms(prof, u, a, M), xf = x_forms(prof, u, a, 2 * M);
    const auto tc = t_forms(frame, u, b, M), tf = t_forms(frame, u, b, 2 * M);
    IsometryCheck r;
    r.plus_coarse = std::abs(xc.plus - tc.plus);
    r.plus_fine = std::abs(xf.plus - tf.plus);
    r.minus_coarse = std::abs(xc.minus - tc.minus);
    r.minus_fine = std::abs(xf.minus - tf.minus);
    r.plus_value = xf.plus;
    r.minus_value = xf.minus;
    return r;
}

CriterionResult run_criterion(int id) {
    static const std::function<CriterionResult()> table[kCriterionCount] = {
        closed_form_p4, pohozaev_suite,    amplitude_support,  spectral_facts,
        rayleigh_check, slope_agreement,   threshold_reproduction, frame_asymptotics,
        isometry,       variational_oracle, scaling_laws};
    if (id < 1 || id > kCriterionCount) return {id, "unknown", false, "no such criterion", 0.0};
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = table[id - 1]();
    } catch (const std::exception& e) {
        r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id));
    return out;
}

}  // namespace compacton
