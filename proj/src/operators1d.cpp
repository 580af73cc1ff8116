#include "lans/operators1d.hpp"

#include <algorithm>
#include <array>

#include "lans/stencil.hpp"

namespace lans {

namespace {

// Rows of A*B restricted to non-wall rows; wall rows left empty.
BandedMatrix interior_product(const BandedMatrix& a, const BandedMatrix& b, const Grid1D& g,
                              std::size_t kl, std::size_t ku) {
    const std::size_t n = a.size();
    BandedMatrix out(n, kl, ku);
    for (std::size_t i = 0; i < n; ++i) {
        if (g.is_wall(i)) continue;
        const std::size_t klo = i > a.lower_bandwidth() ? i - a.lower_bandwidth() : 0;
        const std::size_t khi = std::min(n - 1, i + a.upper_bandwidth());
        for (std::size_t k = klo; k <= khi; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const std::size_t jlo = k > b.lower_bandwidth() ? k - b.lower_bandwidth() : 0;
            const std::size_t jhi = std::min(n - 1, k + b.upper_bandwidth());
            for (std::size_t j = jlo; j <= jhi; ++j) {
                const double bkj = b(k, j);
                if (bkj != 0.0) out.at(i, j) += aik * bkj;
            }
        }
    }
    return out;
}

} // namespace

std::vector<WallClosure> wall_closures(const Grid1D& grid) {
    const std::size_t n = grid.size();
    const double dx = grid.spacing();
    std::vector<WallClosure> out;
    const auto wall = [&](std::size_t w, int side) {
        const double xw = grid.node(w);
        std::array<double, 4> xs{};
        std::array<std::size_t, 3> mids{};
        xs[0] = xw;
        for (std::size_t k = 0; k < 3; ++k) {
            mids[k] = side > 0 ? n - 2 - k : k;
            xs[k + 1] = grid.midpoint(mids[k]);
        }
        const auto c = fd_weights(xw, xs, 3);
        const double gw = grid.weight(xw);
        const auto weight = [&](std::size_t k) { return (c[4 + k] + dx * dx / 24.0 * c[12 + k]) / gw; };
        WallClosure wc{w, weight(0), {}};
        for (std::size_t k = 0; k < 3; ++k) wc.mid_weights.emplace_back(mids[k], weight(k + 1));
        out.push_back(std::move(wc));
    };
    wall(n - 1, +1);
    if (grid.geometry() == Geometry::Channel) {
        wall(0, -1);
    } else {
        // Midpoint fluxes of rows 1 and 2, scaled by their cell measures.
        const double mu1 = grid.cell_measure(1), mu2 = grid.cell_measure(2);
        WallClosure ax{0, 0.0, {}};
        ax.mid_weights = {{0, -4.0 / (3.0 * mu1)},
                          {1, 4.0 / (3.0 * mu1) + 1.0 / (3.0 * mu2)},
                          {2, -1.0 / (3.0 * mu2)}};
        out.push_back(std::move(ax));
    }
    return out;
}

FluxDivergence::FluxDivergence(const RhoProfile& rho) : grid_(rho.grid()) {
    const Grid1D& g = *grid_;
    const std::size_t n = g.size();
    if (n < 5) throw InvalidArgument("n too small");
    const double dx = g.spacing();
    coef_.resize(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) coef_[j] = g.weight(g.midpoint(j)) * rho.mid(j) / dx;
    inv_measure_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (!g.is_wall(i)) inv_measure_[i] = 1.0 / g.cell_measure(i);
    conservative_ = BandedMatrix(n, 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (g.is_wall(i)) continue;
        const double mu = g.cell_measure(i);
        if (i + 1 < n) {
            const double f = g.weight(g.midpoint(i)) * rho.mid(i) / (dx * mu);
            conservative_.at(i, i + 1) += f;
            conservative_.at(i, i) -= f;
        }
        if (i > 0) {
            const double f = g.weight(g.midpoint(i - 1)) * rho.mid(i - 1) / (dx * mu);
            conservative_.at(i, i - 1) += f;
            conservative_.at(i, i) -= f;
        }
    }
    closed_ = BandedMatrix(n, kMaxBandwidth, kMaxBandwidth);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = (i > 0 ? i - 1 : 0); j <= std::min(n - 1, i + 1); ++j) {
            closed_.at(i, j) = conservative_(i, j);
        }
    }
    for (const auto& c : wall_closures(g)) {
        for (std::size_t j = (c.node > 0 ? c.node - 1 : 0); j <= std::min(n - 1, c.node + 1); ++j) {
            closed_.at(c.node, j) = 0.0;
        }
        AppliedClosure ac{c.node, 0.0, {}, {}, c.mid_weights};
        if (c.wall_weight != 0.0) {
            // Wall flux g rho u' with a one-sided four-point derivative of u.
            const int side = c.node == 0 ? -1 : 1;
            std::array<double, 4> ux{};
            std::array<std::size_t, 4> un{};
            for (std::size_t k = 0; k < 4; ++k) {
                un[k] = side > 0 ? n - 1 - k : k;
                ux[k] = g.node(un[k]);
            }
            const auto d = fd_weights_for(g.node(c.node), ux, 1);
            const double flux = g.weight(g.node(c.node)) * rho.node(c.node);
            for (std::size_t k = 0; k < 4; ++k) closed_.at(c.node, un[k]) += c.wall_weight * flux * d[k];
            ac.wall_factor = c.wall_weight * flux;
            ac.nodes = un;
            std::copy(d.begin(), d.end(), ac.deriv.begin());
        }
        closures_.push_back(std::move(ac));
        for (const auto& [j, w] : c.mid_weights) {
            const double f = w * g.weight(g.midpoint(j)) * rho.mid(j) / dx;
            closed_.at(c.node, j + 1) += f;
            closed_.at(c.node, j) -= f;
        }
    }
}

// Differences of u are formed before any scaling, so cancellation stays at the
// level of the flux rather than of the large matrix entries.
std::vector<double> FluxDivergence::apply_conservative(std::span<const double> u) const {
    const Grid1D& g = *grid_;
    const std::size_t n = g.size();
    if (u.size() != n) throw GridMismatch();
    std::vector<double> flux(n - 1), out(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) flux[j] = coef_[j] * (u[j + 1] - u[j]);
    for (std::size_t i = 0; i < n; ++i) {
        if (g.is_wall(i)) continue;
        const double right = i + 1 < n ? flux[i] : 0.0;
        const double left = i > 0 ? flux[i - 1] : 0.0;
        out[i] = (right - left) * inv_measure_[i];
    }
    return out;
}

std::vector<double> FluxDivergence::apply(std::span<const double> u) const {
    auto out = apply_conservative(u);
    for (const auto& c : closures_) {
        double v = 0.0;
        if (c.wall_factor != 0.0) {
            double du = 0.0;
            for (std::size_t k = 1; k < 4; ++k) du += c.deriv[k] * (u[c.nodes[k]] - u[c.nodes[0]]);
            v += c.wall_factor * du;
        }
        for (const auto& [j, w] : c.mid_weights) v += w * coef_[j] * (u[j + 1] - u[j]);
        out[c.node] = v;
    }
    return out;
}

ChannelOperators assemble_operators(const RhoProfile& rho, const PhysicalParams& params) {
    const FluxDivergence lop(rho);
    const Grid1D& g = *lop.grid();
    const std::size_t n = g.size();
    const BandedMatrix& l = lop.conservative();
    const double a2 = params.alpha * params.alpha;

    ChannelOperators ops{BandedMatrix(n, 1, 1), interior_product(l, lop.closed(), g, 3, 3)};
    for (std::size_t i = 0; i < n; ++i) {
        if (g.is_wall(i)) {
            ops.mass.at(i, i) = 1.0;
            continue;
        }
        for (std::size_t j = (i > 3 ? i - 3 : 0); j <= std::min(n - 1, i + 3); ++j) {
            const double lij = l(i, j);
            if (j + 1 >= i && j <= i + 1) ops.mass.at(i, j) = (i == j ? 1.0 : 0.0) - a2 * lij;
            ops.diffusion.at(i, j) = params.nu * (lij - a2 * ops.diffusion(i, j));
        }
    }
    return ops;
}

GridFunction1D mass_operator(const GridFunction1D& u, const RhoProfile& rho,
                             const PhysicalParams& params) {
    require_same_grid(u.grid, rho.grid());
    const FluxDivergence lop(rho);
    const auto lu = lop.apply_conservative(u.values);
    const double a2 = params.alpha * params.alpha;
    GridFunction1D out(u.grid, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = u.grid->is_wall(i) ? u[i] : u[i] - a2 * lu[i];
    }
    return out;
}

GridFunction1D diffusion_operator(const GridFunction1D& u, const RhoProfile& rho,
                                  const PhysicalParams& params) {
    require_same_grid(u.grid, rho.grid());
    const FluxDivergence lop(rho);
    const auto lu = lop.apply(u.values);
    const auto llu = lop.apply_conservative(lu);
    const auto lu_fv = lop.apply_conservative(u.values);
    const double a2 = params.alpha * params.alpha;
    GridFunction1D out(u.grid, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u.grid->is_wall(i)) out[i] = params.nu * (lu_fv[i] - a2 * llu[i]);
    }
    return out;
}

double interior_inner_product(const Grid1D& grid, std::span<const double> a,
                              std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!grid.is_wall(i)) s += grid.cell_measure(i) * a[i] * b[i];
    }
    return s;
}

} // namespace lans
