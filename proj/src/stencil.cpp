#include "lans/stencil.hpp"

#include "lans/error.hpp"

namespace lans {

// Fornberg's recursion.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int max_order) {
    const std::size_t n = xs.size();
    const std::size_t m = static_cast<std::size_t>(max_order);
    if (n == 0 || m + 1 > n) throw InvalidArgument("not enough stencil points");
    std::vector<double> c((m + 1) * n, 0.0);
    auto w = [&](std::size_t order, std::size_t k) -> double& { return c[order * n + k]; };
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    w(0, 0) = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) {
                    w(k, i) = c1 * (static_cast<double>(k) * w(k - 1, i - 1) - c5 * w(k, i - 1)) / c2;
                }
                w(0, i) = -c1 * c5 * w(0, i - 1) / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) {
                w(k, j) = (c4 * w(k, j) - static_cast<double>(k) * w(k - 1, j)) / c3;
            }
            w(0, j) = c4 * w(0, j) / c3;
        }
        c1 = c2;
    }
    return c;
}

std::vector<double> fd_weights_for(double x0, std::span<const double> xs, int order) {
    auto all = fd_weights(x0, xs, order);
    const std::size_t n = xs.size();
    const auto first = all.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(order) * n);
    return {first, first + static_cast<std::ptrdiff_t>(n)};
}

} // namespace lans
