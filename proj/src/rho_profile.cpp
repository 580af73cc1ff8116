#include "lans/rho_profile.hpp"

#include <array>
#include <cmath>

#include "lans/stencil.hpp"

namespace lans {

RhoProfile::RhoProfile(GridPtr grid, std::vector<double> nodes, std::vector<double> midpoints)
    : grid_(std::move(grid)), nodes_(std::move(nodes)), midpoints_(std::move(midpoints)) {
    if (!grid_) throw InvalidArgument("null grid");
    if (nodes_.size() != grid_->size() || midpoints_.size() + 1 != grid_->size()) {
        throw GridMismatch();
    }
    for (double v : nodes_) {
        if (!std::isfinite(v)) throw InvalidArgument("rho profile must be finite");
    }
    for (double v : midpoints_) {
        if (!std::isfinite(v)) throw InvalidArgument("rho profile must be finite");
    }
}

RhoProfile RhoProfile::from_function(GridPtr grid, const std::function<double(double)>& f) {
    std::vector<double> nodes(grid->size());
    std::vector<double> mids(grid->size() - 1);
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = f(grid->node(i));
    for (std::size_t j = 0; j < mids.size(); ++j) mids[j] = f(grid->midpoint(j));
    return {std::move(grid), std::move(nodes), std::move(mids)};
}

RhoProfile RhoProfile::constant(GridPtr grid, double value) {
    const std::size_t n = grid->size();
    return {std::move(grid), std::vector<double>(n, value), std::vector<double>(n - 1, value)};
}

namespace {

double interpolate(double x0, std::span<const double> xs, std::span<const double> ys) {
    const auto w = fd_weights_for(x0, xs, 0);
    double s = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) s += w[k] * ys[k];
    return s;
}

} // namespace

RhoProfile RhoProfile::from_nodes(GridPtr grid, std::vector<double> nodes) {
    const std::size_t n = grid->size();
    if (nodes.size() != n) throw GridMismatch();
    std::vector<double> mids(n - 1);
    if (n < 4) {
        for (std::size_t j = 0; j + 1 < n; ++j) mids[j] = 0.5 * (nodes[j] + nodes[j + 1]);
        return {std::move(grid), std::move(nodes), std::move(mids)};
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        std::size_t first = j == 0 ? 0 : j - 1;
        if (first + 4 > n) first = n - 4;
        std::array<double, 4> xs{};
        std::array<double, 4> ys{};
        for (std::size_t k = 0; k < 4; ++k) {
            xs[k] = grid->node(first + k);
            ys[k] = nodes[first + k];
        }
        // Even extension across the pipe axis keeps the first cell symmetric.
        if (j == 0 && grid->geometry() == Geometry::Pipe) {
            const std::array<double, 4> px{-grid->node(1), 0.0, grid->node(1), grid->node(2)};
            const std::array<double, 4> py{nodes[1], nodes[0], nodes[1], nodes[2]};
            mids[j] = interpolate(grid->midpoint(j), px, py);
            continue;
        }
        mids[j] = interpolate(grid->midpoint(j), xs, ys);
    }
    return {std::move(grid), std::move(nodes), std::move(mids)};
}

RhoProfile RhoProfile::from_midpoints(GridPtr grid, std::vector<double> midpoints,
                                      double wall_value) {
    const std::size_t n = grid->size();
    if (midpoints.size() + 1 != n) throw GridMismatch();
    const std::size_t m = n - 1;
    std::vector<double> nodes(n, wall_value);
    const bool pipe = grid->geometry() == Geometry::Pipe;
    auto mid_x = [&](std::ptrdiff_t j) {
        return grid->lower() + (static_cast<double>(j) + 0.5) * grid->spacing();
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (grid->is_wall(i)) continue;
        const double x0 = grid->node(i);
        std::array<double, 4> xs{};
        std::array<double, 4> ys{};
        if (pipe && i == 0) {
            nodes[i] = (18.0 * midpoints[0] - 2.0 * midpoints[1]) / 16.0;
            continue;
        }
        // Preferred stencil: two midpoints on each side of the node.
        const auto ii = static_cast<std::ptrdiff_t>(i);
        std::ptrdiff_t first = ii - 2;
        std::ptrdiff_t last = ii + 1;
        std::size_t used = 0;
        if (first < 0 && !pipe) {
            xs[used] = grid->lower();
            ys[used] = wall_value;
            ++used;
            first = 0;
            last = 2;
        } else if (first < 0) {
            // Pipe node next to the axis: mirror the first midpoint.
            xs[used] = -mid_x(0);
            ys[used] = midpoints[0];
            ++used;
            first = 0;
            last = 2;
        } else if (last >= static_cast<std::ptrdiff_t>(m)) {
            first = static_cast<std::ptrdiff_t>(m) - 3;
            last = static_cast<std::ptrdiff_t>(m) - 1;
            xs[used] = grid->upper();
            ys[used] = wall_value;
            ++used;
        }
        for (std::ptrdiff_t j = first; j <= last && used < 4; ++j) {
            xs[used] = mid_x(j);
            ys[used] = midpoints[static_cast<std::size_t>(j)];
            ++used;
        }
        nodes[i] = interpolate(x0, std::span<const double>(xs.data(), used),
                               std::span<const double>(ys.data(), used));
    }
    return {std::move(grid), std::move(nodes), std::move(midpoints)};
}

double RhoProfile::center_value() const {
    if (grid_->geometry() == Geometry::Pipe) return nodes_.front();
    const std::size_t n = nodes_.size();
    if (n % 2 == 1) return nodes_[n / 2];
    return midpoints_[n / 2 - 1];
}

bool RhoProfile::positive_interior() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!grid_->is_wall(i) && !(nodes_[i] > 0.0)) return false;
    }
    for (double v : midpoints_) {
        if (!(v > 0.0)) return false;
    }
    return true;
}

bool RhoProfile::zero_at_walls() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (grid_->is_wall(i) && nodes_[i] != 0.0) return false;
    }
    return true;
}

} // namespace lans
