#include "compacton/singquad.hpp"

#include "compacton/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace compacton {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr std::size_t kMaxPanels = 6000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// One half of the interval, parametrised by the offset s from its own end,
// with s = u^power.
struct Half {
    bool left;
    double power;
    double u_max;
};

struct Panel {
    std::size_t half;
    double u0;
    double u1;
    double value;
    double error;
};

bool finite(const Panel& p) { return std::isfinite(p.value) && std::isfinite(p.error); }

class Integrator {
public:
    Integrator(const SingularIntegrand& f, int initial_panels)
        : f_(f), width_(f.b - f.a), initial_panels_(initial_panels) {}

    double transformed(const Half& h, double u) {
        ++evaluations_;
        const double s = h.power == 1.0 ? u : std::pow(u, h.power);
        const double jac = h.power == 1.0 ? 1.0 : h.power * std::pow(u, h.power - 1.0);
        QuadPoint pt{};
        if (h.left) {
            pt = {f_.a + s, s, width_ - s};
        } else {
            pt = {f_.b - s, width_ - s, s};
        }
        return f_.evaluator(pt) * jac;
    }

    Panel panel(std::size_t half_index, const Half& h, double u0, double u1) {
        const double centre = 0.5 * (u0 + u1);
        const double half_len = 0.5 * (u1 - u0);
        const double fc = transformed(h, centre);
        double resk = fc * kWgk[7];
        double resg = fc * kWg[3];
        double resabs = std::abs(resk);
        std::array<double, 7> f1{}, f2{};
        for (int j = 0; j < 7; ++j) {
            const double dx = half_len * kXgk[j];
            f1[j] = transformed(h, centre - dx);
            f2[j] = transformed(h, centre + dx);
            const double pair = f1[j] + f2[j];
            resk += kWgk[j] * pair;
            resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
            if (j % 2 == 1) resg += kWg[j / 2] * pair;
        }
        const double mean = 0.5 * resk;
        double resasc = kWgk[7] * std::abs(fc - mean);
        for (int j = 0; j < 7; ++j)
            resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

        resk *= half_len;
        resabs *= std::abs(half_len);
        resasc *= std::abs(half_len);
        double err = std::abs((resk - resg * half_len));
        if (resasc != 0.0 && err != 0.0)
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        err = std::max(err, 50.0 * kEps * resabs);
        return {half_index, u0, u1, resk, err};
    }

    QuadratureResult run(double tol, double rel_tol) {
        const double mid = 0.5 * width_;
        std::array<Half, 2> halves{
            Half{true, 1.0 / (1.0 - f_.left_exponent), 0.0},
            Half{false, 1.0 / (1.0 - f_.right_exponent), 0.0}};
        for (auto& h : halves) h.u_max = std::pow(mid, 1.0 / h.power);

        std::vector<Panel> panels;
        panels.reserve(64);
        for (std::size_t k = 0; k < 2; ++k) {
            for (int i = 0; i < initial_panels_; ++i) {
                const double u0 = halves[k].u_max * i / initial_panels_;
                const double u1 = halves[k].u_max * (i + 1) / initial_panels_;
                panels.push_back(panel(k, halves[k], u0, u1));
            }
        }

        auto totals = [&panels] {
            double v = 0.0, e = 0.0;
            for (const auto& p : panels) {
                v += p.value;
                e += p.error;
            }
            return std::pair{v, e};
        };

        auto [value, error] = totals();
        if (!std::isfinite(value) || !std::isfinite(error))
            throw ConvergenceError("integrate_singular: non-finite integrand value", value);
        while (error > std::max(tol, rel_tol * std::abs(value))) {
            if (panels.size() >= kMaxPanels)
                throw ConvergenceError("integrate_singular: panel budget exhausted (error " +
                                           std::to_string(error) + ")",
                                       value);
            auto worst = std::max_element(panels.begin(), panels.end(),
                                          [](const Panel& x, const Panel& y) {
                                              return x.error < y.error;
                                          });
            const Panel w = *worst;
            const double um = 0.5 * (w.u0 + w.u1);
            if (!(um > w.u0 && um < w.u1) ||
                (w.u1 - w.u0) < 8.0 * kEps * std::max(std::abs(w.u0), std::abs(w.u1)))
                throw ConvergenceError("integrate_singular: roundoff limit reached (error " +
                                           std::to_string(error) + ")",
                                       value);
            const Panel a = panel(w.half, halves[w.half], w.u0, um);
            const Panel b = panel(w.half, halves[w.half], um, w.u1);
            if (!finite(a) || !finite(b))
                throw ConvergenceError("integrate_singular: non-finite integrand value", value);
            *worst = a;
            panels.push_back(b);
            std::tie(value, error) = totals();
        }
        return {value, error, evaluations_, panels.size()};
    }

private:
    const SingularIntegrand& f_;
    double width_;
    int initial_panels_;
    std::size_t evaluations_ = 0;
};

}  // namespace

QuadratureResult integrate_singular_detailed(const SingularIntegrand& f, double tol,
                                             double rel_tol) {
    if (!(tol > 0.0) || rel_tol < 0.0)
        throw PreconditionError("integrate_singular: tol must be positive");
    if (!(f.b > f.a)) throw PreconditionError("integrate_singular: empty interval");
    if (!(f.left_exponent >= 0.0 && f.left_exponent < 1.0 && f.right_exponent >= 0.0 &&
          f.right_exponent < 1.0))
        throw PreconditionError("integrate_singular: end exponents must lie in [0, 1)");
    if (!f.evaluator) throw PreconditionError("integrate_singular: missing evaluator");
    // a handful of initial panels per half keeps the error estimate honest
    return Integrator(f, 4).run(tol, rel_tol);
}

double integrate_singular(const SingularIntegrand& f, double tol, double rel_tol) {
    return integrate_singular_detailed(f, tol, rel_tol).value;
}

double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          double left_exponent, double right_exponent, double tol) {
    SingularIntegrand s{[&f](const QuadPoint& q) { return f(q.x); }, a, b, left_exponent,
                        right_exponent};
    return integrate_singular(s, tol);
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        double tol, double rel_tol) {
    if (!(tol > 0.0) || rel_tol < 0.0) throw PreconditionError("integrate_smooth: tol must be positive");
    if (a == b) return 0.0;
    const double sign = b > a ? 1.0 : -1.0;
    SingularIntegrand s{[&f](const QuadPoint& q) { return f(q.x); }, std::min(a, b),
                        std::max(a, b), 0.0, 0.0};
    return sign * Integrator(s, 1).run(tol, rel_tol).value;
}

double bracket_root(const std::function<double(double)>& g, double lo, double hi,
                    double tol) {
    if (!(tol > 0.0)) throw PreconditionError("bracket_root: tol must be positive");
    if (lo > hi) std::swap(lo, hi);
    double flo = g(lo);
    double fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::isnan(flo) || std::isnan(fhi) || std::signbit(flo) == std::signbit(fhi))
        throw PreconditionError("bracket_root: no sign change on [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");

    int last_side = 0;  // -1: lo moved last, +1: hi moved last
    double window_width = hi - lo;
    int window_steps = 0;
    for (int iter = 0; iter < 400; ++iter) {
        if (hi - lo <= tol) break;
        double x;
        if (window_steps == 3) {
            // three false-position steps without halving the bracket: bisect
            x = 0.5 * (lo + hi);
            window_steps = 0;
            if (hi - lo > 0.5 * window_width) last_side = 0;
            window_width = hi - lo;
        } else {
            x = (lo * fhi - hi * flo) / (fhi - flo);
            ++window_steps;
        }
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) break;  // bracket at floating-point resolution
        const double fx = g(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
            if (last_side == -1) fhi *= 0.5;
            last_side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (last_side == +1) flo *= 0.5;
            last_side = +1;
        }
        if (hi - lo <= 0.5 * window_width) {
            window_width = hi - lo;
            window_steps = 0;
        }
    }
    // the scaled function values are not true residuals after Illinois halving,
    // so pick the end by re-evaluating
    return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

}  // namespace compacton
