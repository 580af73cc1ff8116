#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lans/banded.hpp"
#include "lans/error.hpp"

using namespace lans;

namespace {

// Dense Gaussian elimination with partial pivoting, independent of the band code.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= l * a[k][j];
            b[i] -= l * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

double inf_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

} // namespace

TEST_CASE("identity system returns the right-hand side") {
    BandedSystem sys{BandedMatrix(6, 1, 1), {1.0, -2.0, 3.5, 0.0, 7.0, -1e-3}};
    for (std::size_t i = 0; i < 6; ++i) sys.matrix.at(i, i) = 1.0;
    const auto x = solve_banded(sys);
    for (std::size_t i = 0; i < 6; ++i) CHECK(x[i] == sys.rhs[i]);
}

TEST_CASE("Dirichlet Laplacian with constant load gives the discrete parabola") {
    const std::size_t n = 21;
    const double h = 1.0 / static_cast<double>(n - 1);
    BandedSystem sys{BandedMatrix(n, 1, 1), std::vector<double>(n, -2.0)};
    sys.matrix.set_identity_row(0);
    sys.matrix.set_identity_row(n - 1);
    sys.rhs.front() = 0.0;
    sys.rhs.back() = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        sys.matrix.at(i, i - 1) = 1.0 / (h * h);
        sys.matrix.at(i, i) = -2.0 / (h * h);
        sys.matrix.at(i, i + 1) = 1.0 / (h * h);
    }
    const auto x = solve_banded(sys);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = h * static_cast<double>(i);
        CHECK(x[i] == doctest::Approx(t * (1.0 - t)).epsilon(1e-12));
    }
}

TEST_CASE("random banded systems match a dense elimination oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t kl = 0; kl <= 3; ++kl) {
        for (std::size_t ku = 0; ku <= 3; ++ku) {
            const std::size_t n = 40;
            BandedSystem sys{BandedMatrix(n, kl, ku), std::vector<double>(n)};
            std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
            for (std::size_t i = 0; i < n; ++i) {
                double row = 0.0;
                for (std::size_t j = (i > kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
                    if (i == j) continue;
                    const double v = dist(rng);
                    sys.matrix.at(i, j) = v;
                    dense[i][j] = v;
                    row += std::abs(v);
                }
                const double d = (row + 0.5) * (dist(rng) > 0 ? 1.0 : -1.0);
                sys.matrix.at(i, i) = d;
                dense[i][i] = d;
                sys.rhs[i] = dist(rng);
            }
            const auto x = solve_banded(sys);
            const auto ref = dense_solve(dense, sys.rhs);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref[i]) <= 1e-12);
            const auto ax = sys.matrix.multiply(x);
            std::vector<double> r(n);
            for (std::size_t i = 0; i < n; ++i) r[i] = ax[i] - sys.rhs[i];
            CHECK(inf_norm(r) <= 1e-10 * (sys.matrix.norm_inf() * inf_norm(x) + inf_norm(sys.rhs)));
        }
    }
}

TEST_CASE("pivoting handles a zero leading diagonal") {
    BandedSystem sys{BandedMatrix(3, 1, 1), {1.0, 2.0, 3.0}};
    sys.matrix.at(0, 0) = 0.0;
    sys.matrix.at(0, 1) = 1.0;
    sys.matrix.at(1, 0) = 1.0;
    sys.matrix.at(1, 1) = 1.0;
    sys.matrix.at(1, 2) = 1.0;
    sys.matrix.at(2, 1) = 1.0;
    sys.matrix.at(2, 2) = 2.0;
    const auto x = solve_banded(sys);
    const auto ax = sys.matrix.multiply(x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(ax[i] == doctest::Approx(sys.rhs[i]).epsilon(1e-14));
}

TEST_CASE("singular matrices report the failing pivot") {
    BandedSystem sys{BandedMatrix(5, 1, 1), std::vector<double>(5, 1.0)};
    for (std::size_t i = 0; i < 5; ++i) sys.matrix.at(i, i) = 1.0;
    sys.matrix.at(3, 3) = 0.0;
    try {
        solve_banded(sys);
        FAIL("expected SingularMatrix");
    } catch (const SingularMatrix& e) {
        CHECK(e.pivot() == 3);
    }
}

TEST_CASE("bandwidth above three is rejected") {
    BandedSystem sys{BandedMatrix(8, 4, 0), std::vector<double>(8, 0.0)};
    CHECK_THROWS_AS(solve_banded(sys), InvalidArgument);
}

TEST_CASE("solving is deterministic") {
    BandedSystem sys{BandedMatrix(30, 2, 3), std::vector<double>(30)};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = (i > 2 ? i - 2 : 0); j <= std::min<std::size_t>(29, i + 3); ++j)
            sys.matrix.at(i, j) = dist(rng) + (i == j ? 8.0 : 0.0);
        sys.rhs[i] = dist(rng);
    }
    CHECK(solve_banded(sys) == solve_banded(sys));
}
