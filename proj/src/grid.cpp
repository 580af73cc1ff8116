#include "lans/grid.hpp"

#include <algorithm>
#include <cmath>

namespace lans {

Grid1D::Grid1D(Geometry geometry, double extent, std::size_t n)
    : geometry_(geometry), extent_(extent) {
    if (n < 2) throw InvalidArgument("n too small");
    if (!(extent > 0.0) || !std::isfinite(extent)) throw InvalidArgument("extent must be positive");
    const double lo = geometry == Geometry::Channel ? -extent : 0.0;
    const double hi = extent;
    spacing_ = (hi - lo) / static_cast<double>(n - 1);
    nodes_.resize(n);
    wall_distance_.resize(n);
    // Written so that channel nodes are mirror images of each other bit for bit.
    const double last = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(i);
        nodes_[i] = geometry == Geometry::Channel ? extent * (2.0 * k - last) / last : extent * k / last;
    }
    nodes_.front() = lo;
    nodes_.back() = hi;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = nodes_[i];
        wall_distance_[i] = geometry == Geometry::Channel ? (extent - std::abs(x)) / extent
                                                          : (extent - x) / extent;
    }
    wall_distance_.back() = 0.0;
    if (geometry == Geometry::Channel) wall_distance_.front() = 0.0;
}

std::vector<double> Grid1D::midpoints() const {
    std::vector<double> m(size() - 1);
    for (std::size_t j = 0; j + 1 < size(); ++j) m[j] = midpoint(j);
    return m;
}

bool Grid1D::is_wall(std::size_t i) const {
    if (i + 1 == size()) return true;
    return i == 0 && geometry_ == Geometry::Channel;
}

double Grid1D::cell_measure(std::size_t i) const {
    const double dx = spacing_;
    if (geometry_ == Geometry::Channel) return dx;
    if (i == 0) return dx * dx / 8.0;
    return nodes_[i] * dx;
}

bool Grid1D::operator==(const Grid1D& other) const {
    return geometry_ == other.geometry_ && extent_ == other.extent_ && size() == other.size();
}

GridPtr make_grid(Geometry geometry, double extent, std::size_t n, std::size_t min_nodes) {
    if (n < std::max<std::size_t>(min_nodes, 2)) throw InvalidArgument("n too small");
    return std::make_shared<const Grid1D>(geometry, extent, n);
}

GridFunction1D::GridFunction1D(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid || values.size() != grid->size()) throw GridMismatch();
}

GridFunction1D::GridFunction1D(GridPtr g, double fill) : grid(std::move(g)) {
    if (!grid) throw InvalidArgument("null grid");
    values.assign(grid->size(), fill);
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    if (!a || !b) return false;
    return a == b || *a == *b;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (!same_grid(a, b)) throw GridMismatch();
}

} // namespace lans
