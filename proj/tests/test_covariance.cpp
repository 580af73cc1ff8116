#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "lans/covariance.hpp"
#include "lans/error.hpp"
#include "lans/steady_profiles.hpp"

using namespace lans;

namespace {

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

// Elementary symmetric functions of the eigenvalues, computed from the matrix.
void check_spectrum_invariants(const Mat3& f, const EigenTriple& e, double tol) {
    double fro2 = 0.0;
    for (const auto& row : f)
        for (double v : row) fro2 += v * v;
    const double tr = trace(f);
    const double scale = std::max({std::abs(e.l1), std::abs(e.l3), 1e-300});
    CHECK(std::abs(e.l1 + e.l2 + e.l3 - tr) <= tol * scale);
    CHECK(std::abs(e.l1 * e.l2 + e.l1 * e.l3 + e.l2 * e.l3 - 0.5 * (tr * tr - fro2)) <= tol * scale * scale);
    CHECK(std::abs(e.product() - determinant(f)) <= tol * scale * scale * scale);
    CHECK(e.l1 >= e.l2);
    CHECK(e.l2 >= e.l3);
}

RhoProfile unit_rho(const GridPtr& g) { return RhoProfile::constant(g, 1.0); }

double phi_log(double d) { return d > 0.0 ? d * std::sqrt(std::abs(std::log(d))) : 0.0; }

} // namespace

TEST_CASE("covariance examples") {
    auto grid = make_grid(Geometry::Channel, 1.0, 5, 5);
    PhysicalParams p;
    const auto flow = poiseuille_flow(grid, p);
    const auto f = covariance_at(2.0, 3, unit_rho(grid), flow, p);
    const Mat3 expected{{{5.0, 0.0, -2.0}, {0.0, 1.0, 0.0}, {-2.0, 0.0, 1.0}}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(f[i][j] == expected[i][j]);

    const auto rho = RhoProfile::from_function(grid, [](double z) { return 0.7 * (1.0 - z * z); });
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const auto f0 = covariance_at(0.0, i, rho, flow, p);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) CHECK(f0[a][b] == (a == b ? rho.node(i) : 0.0));
    }
    for (std::size_t wall : {std::size_t{0}, std::size_t{4}}) {
        CHECK(max_abs(covariance_at(3.0, wall, rho, flow, p)) == 0.0);
    }
}

TEST_CASE("covariance needs a steady flow on the same grid") {
    auto grid = make_grid(Geometry::Channel, 1.0, 9);
    PhysicalParams p;
    auto flow = poiseuille_flow(grid, p);
    flow.steady = false;
    CHECK_THROWS_AS(covariance_at(1.0, 2, unit_rho(grid), flow, p), InvalidArgument);
    auto other = make_grid(Geometry::Channel, 1.0, 17);
    CHECK_THROWS_AS(covariance_at(1.0, 2, unit_rho(other), poiseuille_flow(grid, p), p), GridMismatch);
}

TEST_CASE("closed-form eigenvalue examples") {
    const auto iso = eigenvalues_closed_form(0.4, 0.0);
    CHECK(iso.l1 == 0.4);
    CHECK(iso.l2 == 0.4);
    CHECK(iso.l3 == 0.4);
    const auto zero = eigenvalues_closed_form(0.0, 3.0);
    CHECK(zero.l1 == 0.0);
    CHECK(zero.l2 == 0.0);
    CHECK(zero.l3 == 0.0);

    const auto e = eigenvalues_closed_form(1.0, -2.0);
    CHECK(e.l1 == doctest::Approx(3.0 + std::sqrt(8.0)).epsilon(1e-15));
    CHECK(e.l2 == 1.0);
    CHECK(e.l3 == doctest::Approx(3.0 - std::sqrt(8.0)).epsilon(1e-14));
    const Mat3 f{{{5.0, 0.0, -2.0}, {0.0, 1.0, 0.0}, {-2.0, 0.0, 1.0}}};
    const auto n = eigenvalues_numeric(f);
    CHECK(std::abs(n.l1 - e.l1) <= 1e-12 * e.l1);
    CHECK(std::abs(n.l2 - e.l2) <= 1e-12 * e.l1);
    CHECK(std::abs(n.l3 - e.l3) <= 1e-12 * e.l1);
}

TEST_CASE("numeric eigenvalues of simple matrices") {
    const Mat3 diag{{{2.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, 7.0}}};
    const auto d = eigenvalues_numeric(diag);
    CHECK(d.l1 == 7.0);
    CHECK(d.l2 == 2.0);
    CHECK(d.l3 == -1.0);
    const Mat3 id{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    const auto i = eigenvalues_numeric(id);
    CHECK(i.l1 == 1.0);
    CHECK(i.l3 == 1.0);
    Mat3 bad = id;
    bad[0][1] = 1.0;
    CHECK_THROWS_AS(eigenvalues_numeric(bad), InvalidArgument);
}

TEST_CASE("numeric eigenvalues satisfy the matrix invariants") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 500; ++k) {
        Mat3 a{};
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) a[i][j] = a[j][i] = u(rng);
        check_spectrum_invariants(a, eigenvalues_numeric(a), 1e-13);
    }
}

TEST_CASE("spectral identities of the covariance tensor") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> rr(0.0, 2.0), uu(-20.0, 20.0), th(0.0, 2.0 * std::numbers::pi);
    auto grid = make_grid(Geometry::Channel, 1.0, 9);
    auto pipe = make_grid(Geometry::Pipe, 1.0, 9);
    PhysicalParams p;
    for (int k = 0; k < 2000; ++k) {
        const double r = rr(rng), s = uu(rng), theta = th(rng);
        // Unit time so the shear integral equals the node shear.
        UnidirectionalFlow cf{GridFunction1D(grid, 0.0), GridFunction1D(grid, s), true};
        UnidirectionalFlow pf{GridFunction1D(pipe, 0.0), GridFunction1D(pipe, s), true};
        const auto fc = covariance_at(1.0, 4, RhoProfile::constant(grid, r), cf, p);
        const auto fp = covariance_at(1.0, 4, RhoProfile::constant(pipe, r), pf, p, theta);
        const auto e = eigenvalues_closed_form(r, s);
        const double scale = e.l1;
        CHECK(rel(determinant(fc), r * r * r, scale * scale * scale) <= 1e-10);
        CHECK(rel(trace(fc), r * (3.0 + s * s), scale) <= 1e-12);
        CHECK(rel(e.l1 * e.l3, r * r, scale * scale) <= 1e-10);
        CHECK(rel(e.l1 + e.l3, r * (2.0 + s * s), scale) <= 1e-12);
        for (const auto& f : {fc, fp}) {
            const auto n = eigenvalues_numeric(f);
            CHECK(rel(n.l1, e.l1, scale) <= 1e-12);
            CHECK(rel(n.l2, e.l2, scale) <= 1e-12);
            CHECK(rel(n.l3, e.l3, scale) <= 1e-12);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) CHECK(f[i][j] == f[j][i]);
        }
    }
}

TEST_CASE("sup norm trajectory") {
    auto grid = make_grid(Geometry::Channel, 1.0, 401);
    PhysicalParams p;
    const auto rho = RhoProfile::from_function(grid, [](double z) { return 1.0 - z * z; });
    const auto flow = poiseuille_flow(grid, p);
    const auto s = sup_norm_trajectory({0.0, 100.0}, rho, flow, p);
    CHECK(s[0].max == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s[0].argmax == doctest::Approx(0.0).epsilon(1e-14));

    // Golden-section maximization of the continuous largest eigenvalue.
    const auto lam = [](double z) {
        return eigenvalues_closed_form(1.0 - z * z, -200.0 * z).l1;
    };
    double a = 0.1, b = 0.99;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 200; ++k) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (lam(c) > lam(d)) b = d;
        else a = c;
    }
    const double zstar = 0.5 * (a + b);
    CHECK(s[1].argmax == doctest::Approx(zstar).epsilon(1e-4));
    CHECK(s[1].max == doctest::Approx(lam(zstar)).epsilon(1e-6));
    CHECK_THROWS_AS(sup_norm_trajectory({1.0, 1.0}, rho, flow, p), InvalidArgument);
}

TEST_CASE("evolution residual of the closed-form trajectory") {
    auto grid = make_grid(Geometry::Channel, 1.0, 33);
    PhysicalParams p;
    const auto rho = RhoProfile::from_function(grid, [](double z) { return 0.9 * (1.0 - z * z); });
    const auto flow = poiseuille_flow(grid, p);
    const auto tr = closed_form_trajectory({0.9, 1.0, 1.1}, rho, flow, p);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        CHECK(max_abs(f_evolution_residual(flow, Geometry::Channel, tr, 1, i)) <= 1e-12);
    }
    CHECK_THROWS_WITH_AS(f_evolution_residual(flow, Geometry::Channel, tr, 0, 3), "insufficient stencil",
                         InvalidArgument);
    CHECK_THROWS_AS(f_evolution_residual(flow, Geometry::Channel, tr, 2, 3), InvalidArgument);

    auto pipe = make_grid(Geometry::Pipe, 1.0, 33);
    const auto prho = RhoProfile::from_function(pipe, [](double r) { return 1.0 - r * r; });
    const auto pflow = poiseuille_flow(pipe, p);
    const auto ptr = closed_form_trajectory({1.9, 2.0, 2.1}, prho, pflow, p, 0.7);
    for (std::size_t i = 0; i < pipe->size(); ++i) {
        CHECK(max_abs(f_evolution_residual(pflow, Geometry::Pipe, ptr, 1, i, 0.7)) <= 1e-12);
    }
}

TEST_CASE("evolution residual of a frozen tensor") {
    CovarianceTrajectory tr;
    tr.times = {0.0, 0.1, 0.2};
    const Mat3 f{{{2.0, 0.3, 0.1}, {0.3, 1.0, 0.0}, {0.1, 0.0, 1.5}}};
    tr.values.assign(3, std::vector<Mat3>{f});
    const Mat3 g = velocity_gradient(Geometry::Channel, 1.7);
    const auto r = f_evolution_residual(g, tr, 1, 0);
    const auto gf = mat_mul(g, f);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(r[i][j] == doctest::Approx(-gf[i][j] - gf[j][i]).epsilon(1e-15));
    CHECK(max_abs(r) > 0.0);
}

TEST_CASE("evolution residual is affine in a perturbation") {
    auto grid = make_grid(Geometry::Channel, 1.0, 17);
    PhysicalParams p;
    const auto rho = RhoProfile::from_function(grid, [](double z) { return 1.0 - z * z; });
    const auto flow = poiseuille_flow(grid, p);
    const auto base = closed_form_trajectory({0.5, 0.55, 0.6}, rho, flow, p);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    std::vector<Mat3> noise(3);
    for (auto& m : noise)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) m[i][j] = m[j][i] = nd(rng);
    const std::size_t node = 5;
    const auto perturbed = [&](double eps) {
        auto t = base;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) t.values[k][node][i][j] += eps * noise[k][i][j];
        return max_abs(f_evolution_residual(flow, Geometry::Channel, t, 1, node));
    };
    const double r1 = perturbed(1e-6), r2 = perturbed(2e-6), r4 = perturbed(4e-6);
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(r4 / r1 == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("evolution residual converges at second order for exponential growth") {
    // Diagonal gradient: F_ij(t) = F0_ij exp((g_i + g_j) t) exactly.
    const std::array<double, 3> gd{0.8, -0.3, 0.5};
    Mat3 grad{};
    for (int i = 0; i < 3; ++i) grad[i][i] = gd[i];
    const Mat3 f0{{{1.0, 0.2, 0.1}, {0.2, 1.5, 0.3}, {0.1, 0.3, 0.7}}};
    const auto exact = [&](double t) {
        Mat3 f{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) f[i][j] = f0[i][j] * std::exp((gd[i] + gd[j]) * t);
        return f;
    };
    std::vector<double> errs;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        CovarianceTrajectory tr;
        tr.times = {1.0 - dt, 1.0, 1.0 + dt};
        for (double t : tr.times) tr.values.push_back({exact(t)});
        errs.push_back(max_abs(f_evolution_residual(grad, tr, 1, 0)));
    }
    CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::log2(errs[1] / errs[2]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("decay fit") {
    auto grid = make_grid(Geometry::Channel, 1.0, 4097);
    const auto exact = RhoProfile::from_function(grid, [](double z) { return 3.0 * phi_log(1.0 - std::abs(z)); });
    const auto fit = boundary_decay_fit(exact);
    CHECK(fit.coefficient == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.goodness >= 1.0 - 1e-10);
    CHECK(fit.samples >= 10);

    const auto linear = RhoProfile::from_function(grid, [](double z) { return 1.0 - std::abs(z); });
    const auto bad = boundary_decay_fit(linear);
    const auto lin = boundary_decay_fit(linear, 1e-3, 1e-2, DecayModel::Linear);
    INFO("log-model goodness on linear data " << bad.goodness);
    CHECK(bad.goodness < lin.goodness);
    CHECK(lin.goodness >= 1.0 - 1e-12);

    auto coarse = make_grid(Geometry::Channel, 1.0, 65);
    CHECK_THROWS_WITH_AS(boundary_decay_fit(RhoProfile::constant(coarse, 1.0)), "too few samples",
                         InvalidArgument);
    CHECK_THROWS_AS(boundary_decay_fit(exact, 1e-3, 0.2), InvalidArgument);
    CHECK_THROWS_AS(boundary_decay_fit(exact, 1e-2, 1e-3), InvalidArgument);
}

TEST_CASE("growth bound") {
    auto grid = make_grid(Geometry::Channel, 1.0, 65);
    PhysicalParams p;
    const auto rho = RhoProfile::from_function(grid, [](double z) { return 1.0 - z * z; });
    std::vector<double> times;
    for (int k = 0; k <= 50; ++k) times.push_back(0.1 * k);

    const UnidirectionalFlow still{GridFunction1D(grid, 0.0), GridFunction1D(grid, 0.0), true};
    const auto r0 = f_growth_bound_check(closed_form_trajectory(times, rho, still, p), still);
    CHECK(r0.holds);
    CHECK(r0.constant == 1.0);
    for (std::size_t k = 0; k < times.size(); ++k) CHECK(r0.norm[k] == r0.bound[k]);

    const auto flow = poiseuille_flow(grid, p);
    auto tr = closed_form_trajectory(times, rho, flow, p);
    const auto r1 = f_growth_bound_check(tr, flow);
    CHECK(r1.holds);

    for (auto& f : tr.values[20]) {
        for (auto& row : f)
            for (double& v : row) v *= 1e6;
    }
    const auto r2 = f_growth_bound_check(tr, flow);
    CHECK_FALSE(r2.holds);
    CHECK(r2.first_violation == 20);
}
