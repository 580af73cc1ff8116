#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lans/error.hpp"
#include "lans/torus_isotropic.hpp"

using namespace lans;
using cplx = std::complex<double>;

namespace {

// psi = sum c cos(k.x + phase), differentiated by hand.
struct StreamMode {
    double kx, ky, c, phase;
};

struct StreamFunction {
    std::vector<StreamMode> modes;

    // d^n psi / (dx^a dy^b) with a + b = n <= 3
    double d(int a, int b, double x, double y) const {
        double s = 0.0;
        for (const auto& m : modes) {
            const double th = m.kx * x + m.ky * y + m.phase;
            const double pre = m.c * std::pow(m.kx, a) * std::pow(m.ky, b);
            switch ((a + b) % 4) {
            case 0: s += pre * std::cos(th); break;
            case 1: s -= pre * std::sin(th); break;
            case 2: s -= pre * std::cos(th); break;
            default: s += pre * std::sin(th); break;
            }
        }
        return s;
    }
    // u_0 = psi_y, u_1 = -psi_x; derivative orders along x and y.
    double u(int i, int a, int b, double x, double y) const {
        return i == 0 ? d(a, b + 1, x, y) : -d(a + 1, b, x, y);
    }
};

// sin x sin y + 0.5 cos(2x + y)
const StreamFunction taylor_green_plus{{{1, -1, 0.5, 0.0}, {1, 1, -0.5, 0.0}, {2, 1, 0.5, 0.0}}};

std::vector<double> sample(const SpectralGrid& g, const auto& fn) {
    std::vector<double> out(g.physical_size());
    for (std::size_t p = 0; p < out.size(); ++p) {
        const auto x = g.point(p);
        out[p] = fn(x[0], x[1]);
    }
    return out;
}

// Plain O(N^4) discrete Fourier coefficient of samples on an n x n grid.
cplx naive_coefficient(const std::vector<double>& f, std::size_t n, double kx, double ky) {
    cplx s = 0.0;
    const double h = 2.0 * std::numbers::pi / double(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += f[i * n + j] * std::polar(1.0, -(kx * i * h + ky * j * h));
    return s / double(n * n);
}

double sup(const SpectralField& w) {
    double m = 0.0;
    for (const auto& c : w)
        for (const auto& x : c) m = std::max(m, std::abs(x));
    return m;
}

double sup_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].size(); ++k) m = std::max(m, std::abs(a[i][k] - b[i][k]));
    return m;
}

double max_divergence(const SpectralGrid& g, const SpectralField& w) {
    double m = 0.0;
    for (const auto& x : divergence(g, w)) m = std::max(m, std::abs(x));
    return m;
}

SpectralField stream_velocity(const SpectralGrid& g, const StreamFunction& s) {
    return velocity_from_stream(g, sample(g, [&](double x, double y) { return s.d(0, 0, x, y); }));
}

double equivalence_gap(const SpectralState& s) {
    const auto r1 = rhs_lans1(s);
    const auto r2 = rhs_lans2(s);
    const auto& g = *s.grid;
    double num = 0.0;
    for (std::size_t i = 0; i < r1.size(); ++i)
        for (std::size_t m = 0; m < g.spectral_size(); ++m)
            num = std::max(num, std::abs((1.0 + s.alpha * s.alpha * g.k2(m)) * r1[i][m] - r2[i][m]));
    return num / sup(r2);
}

} // namespace

TEST_CASE("Helmholtz inversion") {
    const auto g = make_spectral_grid(2, 16);
    const auto w = random_solenoidal_field(*g, 1);
    CHECK(sup_diff(helmholtz_invert(*g, w, 0.0), w) == 0.0);
    CHECK(sup_diff(helmholtz_apply(*g, helmholtz_invert(*g, w, 0.3), 0.3), w) <= 1e-14 * sup(w));

    SpectralField single = zero_field(*g);
    for (std::size_t m = 0; m < g->spectral_size(); ++m)
        if (g->wavevector(m)[0] == 1.0 && g->wavevector(m)[1] == 0.0) single[1][m] = 1.0;
    const auto inv = helmholtz_invert(*g, single, 0.1);
    for (std::size_t m = 0; m < g->spectral_size(); ++m)
        if (single[1][m] != 0.0) CHECK(inv[1][m].real() == doctest::Approx(1.0 / 1.01).epsilon(1e-15));
}

TEST_CASE("Leray projection") {
    const auto g = make_spectral_grid(2, 32);
    Spectrum phi = g->forward(sample(*g, [](double x, double y) { return std::sin(2 * x - y) + std::cos(3 * y); }));
    const SpectralField grad{derivative(*g, phi, 0), derivative(*g, phi, 1)};
    CHECK(sup(leray_project(*g, grad)) <= 1e-14);

    const auto solenoidal = random_solenoidal_field(*g, 2);
    CHECK(sup_diff(leray_project(*g, solenoidal), solenoidal) <= 1e-14 * sup(solenoidal));

    const PhysicalField noise{sample(*g, [](double x, double y) { return std::exp(std::sin(x + 2 * y)); }),
                              sample(*g, [](double x, double y) { return std::cos(x) * std::sin(3 * y) ; })};
    const auto w = g->forward(noise);
    const auto p = leray_project(*g, w);
    CHECK(max_divergence(*g, p) <= 1e-12 * sup(w));
    CHECK(sup_diff(leray_project(*g, p), p) <= 1e-14 * sup(w));
    for (const auto& c : p) CHECK(c[0] == 0.0);
}

TEST_CASE("Stokes projection annihilates gradients") {
    const auto g = make_spectral_grid(2, 32);
    Spectrum phi = g->forward(sample(*g, [](double x, double y) { return std::sin(x) * std::cos(2 * y) + 0.2 * std::cos(5 * x); }));
    const SpectralField grad{derivative(*g, phi, 0), derivative(*g, phi, 1)};
    CHECK(sup(stokes_project(*g, grad, 0.1)) <= 1e-12 * sup(grad));
    const auto u = random_solenoidal_field(*g, 3);
    CHECK(sup_diff(stokes_project(*g, u, 0.1), u) <= 1e-14 * sup(u));
}

TEST_CASE("U^alpha trivial cases") {
    const auto g = make_spectral_grid(2, 16);
    CHECK(sup(u_alpha_term(*g, zero_field(*g), 0.1)) == 0.0);
    CHECK(sup(u_alpha_term(*g, random_solenoidal_field(*g, 4), 0.0)) == 0.0);
}

TEST_CASE("U^alpha against an analytic-derivative oracle") {
    const double alpha = 0.1;
    const auto g = make_spectral_grid(2, 32);
    const auto& s = taylor_green_plus;
    const auto u = stream_velocity(*g, s);
    const auto ua = u_alpha_term(*g, u, alpha);

    // Div T with T_ik = sum_m G_im G_km + G_im G_mk - G_mi G_mk, expanded by the
    // product rule with exact derivatives of psi.
    const std::size_t no = 24;
    const auto G = [&](int i, int j, int dk, double x, double y) {
        const int a = (j == 0) + (dk == 0), b = (j == 1) + (dk == 1);
        return s.u(i, a, b, x, y);
    };
    const auto div_t = [&](int i, double x, double y) {
        double sum = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int m = 0; m < 2; ++m) {
                sum += G(i, m, k, x, y) * G(k, m, -1, x, y) + G(i, m, -1, x, y) * G(k, m, k, x, y);
                sum += G(i, m, k, x, y) * G(m, k, -1, x, y) + G(i, m, -1, x, y) * G(m, k, k, x, y);
                sum -= G(m, i, k, x, y) * G(m, k, -1, x, y) + G(m, i, -1, x, y) * G(m, k, k, x, y);
            }
        return sum;
    };
    const double h = 2.0 * std::numbers::pi / double(no);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < 2; ++i) {
        std::vector<double> f(no * no);
        for (std::size_t a = 0; a < no; ++a)
            for (std::size_t b = 0; b < no; ++b) f[a * no + b] = div_t(i, a * h, b * h);
        for (std::size_t m = 0; m < g->spectral_size(); ++m) {
            const auto& k = g->wavevector(m);
            if (std::abs(k[0]) > 8 || k[1] > 8) {
                CHECK(std::abs(ua[i][m]) <= 1e-15);
                continue;
            }
            const cplx expect = alpha * alpha * naive_coefficient(f, no, k[0], k[1]) / (1.0 + alpha * alpha * g->k2(m));
            worst = std::max(worst, std::abs(ua[i][m] - expect));
            scale = std::max(scale, std::abs(expect));
        }
    }
    CHECK(scale > 1e-3);
    CHECK(worst <= 1e-14);
}

TEST_CASE("LANS-1 at alpha = 0 matches the vorticity form of Navier-Stokes") {
    const double nu = 0.05;
    const auto g = make_spectral_grid(2, 32);
    const auto& s = taylor_green_plus;
    const auto st = make_spectral_state(g, stream_velocity(*g, s), 0.0, nu);
    const auto r = rhs_lans1(st);
    CHECK(max_divergence(*g, r) <= 1e-12 * sup(r));

    // omega = -Delta psi; d omega/dt = -u.grad omega + nu Delta omega.
    const std::size_t no = 24;
    const double h = 2.0 * std::numbers::pi / double(no);
    std::vector<double> adv(no * no), omega(no * no);
    for (std::size_t a = 0; a < no; ++a)
        for (std::size_t b = 0; b < no; ++b) {
            const double x = a * h, y = b * h;
            const double wx = -(s.d(3, 0, x, y) + s.d(1, 2, x, y)), wy = -(s.d(2, 1, x, y) + s.d(0, 3, x, y));
            adv[a * no + b] = s.u(0, 0, 0, x, y) * wx + s.u(1, 0, 0, x, y) * wy;
            omega[a * no + b] = -(s.d(2, 0, x, y) + s.d(0, 2, x, y));
        }
    double worst = 0.0;
    for (std::size_t m = 0; m < g->spectral_size(); ++m) {
        const auto& k = g->wavevector(m);
        if (std::abs(k[0]) > 8 || k[1] > 8) continue;
        const cplx curl = cplx(0.0, k[0]) * r[1][m] - cplx(0.0, k[1]) * r[0][m];
        const cplx expect = -naive_coefficient(adv, no, k[0], k[1]) - nu * g->k2(m) * naive_coefficient(omega, no, k[0], k[1]);
        worst = std::max(worst, std::abs(curl - expect));
    }
    CHECK(worst <= 1e-13);

    // A single Fourier mode is an exact decaying solution.
    SpectralField single = zero_field(*g);
    for (std::size_t m = 0; m < g->spectral_size(); ++m)
        if (g->wavevector(m)[0] == 2.0 && g->wavevector(m)[1] == 1.0) {
            single[0][m] = cplx(1.0, 0.5);
            single[1][m] = -2.0 * single[0][m];
        }
    const auto rs = rhs_lans1(make_spectral_state(g, single, 0.0, nu));
    for (std::size_t m = 0; m < g->spectral_size(); ++m)
        for (int i = 0; i < 2; ++i) CHECK(std::abs(rs[i][m] + nu * g->k2(m) * single[i][m]) <= 1e-14);
}

TEST_CASE("zero state has zero tendencies") {
    const auto g = make_spectral_grid(2, 16);
    const auto s = make_spectral_state(g, zero_field(*g), 0.1, 0.01);
    CHECK(sup(rhs_lans1(s)) == 0.0);
    CHECK(sup(rhs_lans2(s)) == 0.0);
}

TEST_CASE("LANS-1 and LANS-2 tendencies agree mode by mode") {
    const auto g = make_spectral_grid(2, 32);
    std::vector<double> fx = sample(*g, [](double x, double y) { return std::sin(x + y) + 0.1 * std::cos(4 * y); });
    const auto f = g->forward(PhysicalField{fx, fx});
    for (std::uint64_t seed = 10; seed < 20; ++seed) {
        const auto u = random_solenoidal_field(*g, seed, 1.5);
        const auto s = make_spectral_state(g, u, 0.15, 0.02, f);
        CHECK(equivalence_gap(s) <= 1e-10);
        CHECK(max_divergence(*g, rhs_lans1(s)) <= 1e-12 * sup(rhs_lans1(s)));
    }
    const auto u = random_solenoidal_field(*g, 5);
    const auto s0 = make_spectral_state(g, u, 0.0, 0.02);
    CHECK(sup_diff(rhs_lans1(s0), rhs_lans2(s0)) <= 1e-14 * sup(rhs_lans1(s0)));

    const auto g3 = make_spectral_grid(3, 12);
    const auto s3 = make_spectral_state(g3, random_solenoidal_field(*g3, 6), 0.2, 0.01);
    CHECK(equivalence_gap(s3) <= 1e-10);
}

TEST_CASE("deformation and gradient forms agree on solenoidal fields") {
    for (int d : {2, 3}) {
        const auto g = make_spectral_grid(d, d == 2 ? 32 : 12);
        const auto u = random_solenoidal_field(*g, 7);
        const double a = gradient_norm_sq(*g, u), b = deformation_norm_sq(*g, u);
        CHECK(std::abs(a - b) <= 1e-12 * a);
    }
    // A gradient field is not solenoidal and the two forms differ.
    const auto g = make_spectral_grid(2, 16);
    Spectrum phi = g->forward(sample(*g, [](double x, double y) { return std::sin(x + 2 * y); }));
    const SpectralField grad{derivative(*g, phi, 0), derivative(*g, phi, 1)};
    CHECK(deformation_norm_sq(*g, grad) == doctest::Approx(2.0 * gradient_norm_sq(*g, grad)));
}

TEST_CASE("norms in physical space") {
    const auto g = make_spectral_grid(2, 16);
    const auto u = random_solenoidal_field(*g, 8, 0.7);
    const auto phys = g->backward(u);
    double direct = 0.0;
    for (const auto& c : phys)
        for (double x : c) direct += x * x;
    direct *= g->spacing() * g->spacing();
    CHECK(l2_norm_sq(*g, u) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(l2_norm_sq(*g, u) == doctest::Approx(0.49 * g->volume()).epsilon(1e-13));
}

TEST_CASE("state validation") {
    const auto g = make_spectral_grid(2, 16);
    Spectrum phi = g->forward(sample(*g, [](double x, double y) { return std::sin(x + 2 * y); }));
    CHECK_THROWS_AS(make_spectral_state(g, {derivative(*g, phi, 0), derivative(*g, phi, 1)}, 0.1, 0.0), InvalidArgument);
    SpectralField high = zero_field(*g);
    high[0][g->spectral_size() - 1] = 1.0;
    CHECK_THROWS_AS(make_spectral_state(g, high, 0.1, 0.0), InvalidArgument);
    SpectralField mean = zero_field(*g);
    mean[0][0] = 1.0;
    CHECK_THROWS_AS(make_spectral_state(g, mean, 0.1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_spectral_state(g, zero_field(*g), -0.1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_spectral_grid(4, 16), InvalidArgument);
    CHECK_THROWS_AS(make_spectral_grid(2, 15), InvalidArgument);
}

TEST_CASE("stepping preserves structure") {
    const auto g = make_spectral_grid(2, 32);
    auto zero = make_spectral_state(g, zero_field(*g), 0.1, 0.01);
    for (int k = 0; k < 5; ++k) zero = step_imex(zero, 1e-2);
    CHECK(sup(zero.u) == 0.0);

    auto s = make_spectral_state(g, random_solenoidal_field(*g, 9), 0.1, 0.01);
    StepInfo info;
    for (int k = 0; k < 20; ++k) {
        s = step_imex(s, 1e-2, &info);
        CHECK(max_divergence(*g, s.u) <= 1e-12 * sup(s.u));
        CHECK(sup_diff(s.v, helmholtz_apply(*g, s.u, 0.1)) == 0.0);
    }
    CHECK_FALSE(info.cfl_warning);
    // Reality: a physical round trip reproduces the coefficients.
    CHECK(sup_diff(g->forward(g->backward(s.u)), s.u) <= 1e-15);
    step_imex(s, 1.0, &info);
    CHECK(info.cfl_warning);
    CHECK(info.cfl > 1.0);
}

TEST_CASE("energy conservation and decay") {
    const auto g = make_spectral_grid(2, 32);
    const auto u = random_solenoidal_field(*g, 11);
    const auto inviscid = integrate(make_spectral_state(g, stream_velocity(*g, taylor_green_plus), 0.1, 0.0), 1e-3, 0.2);
    const double e0 = inviscid.ledger.front().e1;
    CHECK(std::abs(inviscid.ledger.back().e1 - e0) / e0 <= 1e-8 * 0.2);

    const auto viscous = integrate(make_spectral_state(g, u, 0.1, 0.05), 1e-2, 0.5);
    for (std::size_t k = 1; k < viscous.ledger.size(); ++k) CHECK(viscous.ledger[k].e1 < viscous.ledger[k - 1].e1);
    CHECK(viscous.ledger.size() == 51);
    CHECK(viscous.ledger.back().t == doctest::Approx(0.5));
    CHECK_THROWS_AS(integrate(make_spectral_state(g, u, 0.1, 0.0), 3e-2, 0.1), InvalidArgument);
}

TEST_CASE("energy balance residual") {
    const auto g = make_spectral_grid(2, 32);
    const auto u = random_solenoidal_field(*g, 12);
    const auto f = prepare_velocity(*g, random_solenoidal_field(*g, 13, 0.5));
    std::vector<double> res;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        auto run = integrate(make_spectral_state(g, u, 0.1, 0.02, f), dt, 0.2);
        res.push_back(energy_balance_check(run.ledger));
        for (const auto& e : run.ledger) CHECK(std::isfinite(e.residual));
    }
    const double order = std::log(res[1] / res[2]) / std::log(2.0);
    INFO("residuals " << res[0] << " " << res[1] << " " << res[2]);
    CHECK(order == doctest::Approx(2.0).epsilon(0.15));

    auto run = integrate(make_spectral_state(g, u, 0.1, 0.02, f), 1e-3, 0.05);
    const double clean = energy_balance_check(run.ledger);
    run.ledger[20].e1 *= 1.01;
    CHECK(energy_balance_check(run.ledger) > 1e3 * clean);

    EnergyLedger tiny(2);
    CHECK_THROWS_AS(energy_balance_check(tiny), InvalidArgument);
}

TEST_CASE("alpha limit study trivial entries") {
    const auto g = make_spectral_grid(2, 16);
    const auto zero = alpha_limit_study(g, zero_field(*g), 0.01, {}, 0.1, {0.2, 0.1}, 1e-2);
    for (double e : zero.errors) CHECK(e == 0.0);
    const auto u = random_solenoidal_field(*g, 14);
    const auto t = alpha_limit_study(g, u, 0.01, {}, 0.1, {0.2, 0.0}, 1e-2);
    CHECK(t.errors[1] <= 1e-12);
    CHECK(t.errors[0] > 0.0);
}
