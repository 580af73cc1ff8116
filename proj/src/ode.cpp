#include "lans/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lans/error.hpp"

namespace lans::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

} // namespace

std::vector<double> DenseStep::eval(double t) const {
    const std::size_t dim = coeffs.size() / 5;
    std::vector<double> y(dim);
    for (std::size_t k = 0; k < dim; ++k) y[k] = eval_component(t, k);
    return y;
}

double DenseStep::eval_component(double t, std::size_t k) const {
    const std::size_t dim = coeffs.size() / 5;
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    const double* r = coeffs.data();
    return r[k] + th * (r[dim + k] + th1 * (r[2 * dim + k] + th * (r[3 * dim + k] + th1 * r[4 * dim + k])));
}

namespace {

const DenseStep& locate(const std::vector<DenseStep>& steps, double t) {
    if (steps.empty()) throw InvalidArgument("empty ODE solution");
    const bool forward = steps.front().h > 0.0;
    auto it = std::lower_bound(steps.begin(), steps.end(), t, [forward](const DenseStep& s, double v) {
        return forward ? s.t1() < v : s.t1() > v;
    });
    if (it == steps.end()) --it;
    return *it;
}

} // namespace

std::vector<double> Solution::eval(double t) const { return locate(steps, t).eval(t); }

double Solution::eval_component(double t, std::size_t k) const {
    return locate(steps, t).eval_component(t, k);
}

Solution integrate(const Rhs& rhs, double t0, std::span<const double> y0, double t_end,
                   const Options& options, const std::optional<Event>& event) {
    const std::size_t dim = y0.size();
    const double dir = t_end >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t_end - t0);
    Solution sol;
    sol.t_final = t0;
    sol.y_final.assign(y0.begin(), y0.end());
    if (span == 0.0) return sol;

    std::vector<double> y(y0.begin(), y0.end()), y1(dim), ys(dim), err(dim);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    auto f = [&](double t, const std::vector<double>& yy, std::vector<double>& out) {
        rhs(t, yy, out);
        ++sol.rhs_evaluations;
    };

    double t = t0;
    f(t, y, k1);
    double h = options.initial_step;
    if (h <= 0.0) {
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double sc = options.atol + options.rtol * std::abs(y[k]);
            d0 += (y[k] / sc) * (y[k] / sc);
            d1n += (k1[k] / sc) * (k1[k] / sc);
        }
        d0 = std::sqrt(d0 / static_cast<double>(dim));
        d1n = std::sqrt(d1n / static_cast<double>(dim));
        h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h = std::min(h, span);
    }
    const double hmax = options.max_step > 0.0 ? options.max_step : span;
    double ev_prev = event ? (*event)(t, y) : 0.0;

    for (std::size_t step = 0;; ++step) {
        if (step >= options.max_steps) throw SolverFailure("ODE integration exceeded max_steps");
        h = std::min(h, hmax);
        const bool last = std::abs(t_end - t) <= h * (1.0 + 1e-12);
        if (last) h = std::abs(t_end - t);
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
            throw SolverFailure("ODE step size underflow");
        }
        const double hs = dir * h;

        for (std::size_t k = 0; k < dim; ++k) ys[k] = y[k] + hs * a21 * k1[k];
        f(t + c2 * hs, ys, k2);
        for (std::size_t k = 0; k < dim; ++k) ys[k] = y[k] + hs * (a31 * k1[k] + a32 * k2[k]);
        f(t + c3 * hs, ys, k3);
        for (std::size_t k = 0; k < dim; ++k) ys[k] = y[k] + hs * (a41 * k1[k] + a42 * k2[k] + a43 * k3[k]);
        f(t + c4 * hs, ys, k4);
        for (std::size_t k = 0; k < dim; ++k)
            ys[k] = y[k] + hs * (a51 * k1[k] + a52 * k2[k] + a53 * k3[k] + a54 * k4[k]);
        f(t + c5 * hs, ys, k5);
        for (std::size_t k = 0; k < dim; ++k)
            ys[k] = y[k] + hs * (a61 * k1[k] + a62 * k2[k] + a63 * k3[k] + a64 * k4[k] + a65 * k5[k]);
        const double tn = last ? t_end : t + hs;
        f(tn, ys, k6);
        for (std::size_t k = 0; k < dim; ++k)
            y1[k] = y[k] + hs * (a71 * k1[k] + a73 * k3[k] + a74 * k4[k] + a75 * k5[k] + a76 * k6[k]);
        f(tn, y1, k7);

        double e = 0.0;
        bool finite = true;
        for (std::size_t k = 0; k < dim; ++k) {
            err[k] = hs * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] + e7 * k7[k]);
            const double sc = options.atol + options.rtol * std::max(std::abs(y[k]), std::abs(y1[k]));
            e += (err[k] / sc) * (err[k] / sc);
            finite = finite && std::isfinite(y1[k]);
        }
        e = std::sqrt(e / static_cast<double>(dim));
        if (!finite || !std::isfinite(e)) {
            h *= 0.25;
            continue;
        }
        if (e > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(e, -0.2));
            continue;
        }

        DenseStep ds;
        ds.t0 = t;
        ds.h = tn - t;
        ds.coeffs.resize(5 * dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const double dy = y1[k] - y[k];
            const double bspl = ds.h * k1[k] - dy;
            ds.coeffs[k] = y[k];
            ds.coeffs[dim + k] = dy;
            ds.coeffs[2 * dim + k] = bspl;
            ds.coeffs[3 * dim + k] = dy - ds.h * k7[k] - bspl;
            ds.coeffs[4 * dim + k] =
                ds.h * (d1 * k1[k] + d3 * k3[k] + d4 * k4[k] + d5 * k5[k] + d6 * k6[k] + d7 * k7[k]);
        }

        if (event) {
            const double ev = (*event)(tn, y1);
            if ((ev_prev > 0.0) != (ev > 0.0) || ev == 0.0) {
                // Illinois iteration on the dense output.
                double ta = t, fa = ev_prev, tb = tn, fb = ev;
                int side = 0;
                for (int it = 0; it < 100 && std::abs(tb - ta) > 1e-15 * std::max(1.0, std::abs(tb)); ++it) {
                    const double tc = (fa * tb - fb * ta) / (fa - fb);
                    const double fc = (*event)(tc, ds.eval(tc));
                    if (fc == 0.0) {
                        ta = tb = tc;
                        fb = 0.0;
                        break;
                    }
                    if ((fc > 0.0) == (fb > 0.0)) {
                        tb = tc;
                        fb = fc;
                        if (side == -1) fa *= 0.5;
                        side = -1;
                    } else {
                        ta = tc;
                        fa = fc;
                        if (side == 1) fb *= 0.5;
                        side = 1;
                    }
                }
                const double tc = std::abs(fb) < std::abs(fa) ? tb : ta;
                sol.steps.push_back(ds);
                sol.t_final = tc;
                sol.y_final = ds.eval(tc);
                sol.event_hit = true;
                return sol;
            }
            ev_prev = ev;
        }

        sol.steps.push_back(std::move(ds));
        t = tn;
        y.swap(y1);
        k1.swap(k7);
        if (last) break;
        h *= std::min(10.0, std::max(0.2, 0.9 * std::pow(std::max(e, 1e-10), -0.2)));
    }
    sol.t_final = t;
    sol.y_final = y;
    return sol;
}

} // namespace lans::ode
