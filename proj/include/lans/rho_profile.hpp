#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lans/grid.hpp"

namespace lans {

/// Covariance amplitude profile on a staggered layout.
///
/// Values are held at the grid nodes and at the cell midpoints. The flux form
/// of every 1D operator reads the midpoint values, so a profile that vanishes
/// at the wall never has to be extrapolated past it.
class RhoProfile {
public:
    RhoProfile() = default;
    RhoProfile(GridPtr grid, std::vector<double> nodes, std::vector<double> midpoints);

    /// Samples an analytic profile at nodes and midpoints.
    static RhoProfile from_function(GridPtr grid, const std::function<double(double)>& f);

    /// Builds midpoint values from node data by cubic interpolation.
    static RhoProfile from_nodes(GridPtr grid, std::vector<double> nodes);

    /// Builds node values from midpoint data by cubic interpolation. Wall nodes
    /// receive `wall_value`; the pipe axis uses mirror symmetry.
    static RhoProfile from_midpoints(GridPtr grid, std::vector<double> midpoints,
                                     double wall_value = 0.0);

    static RhoProfile constant(GridPtr grid, double value);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return nodes_.size(); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> midpoints() const { return midpoints_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double mid(std::size_t j) const { return midpoints_[j]; }

    /// rho at the channel center or pipe axis.
    double center_value() const;

    /// True when rho > 0 at every non-wall node and midpoint.
    bool positive_interior() const;

    /// True when every wall node holds exactly zero.
    bool zero_at_walls() const;

    GridFunction1D as_grid_function() const { return {grid_, nodes_}; }

private:
    GridPtr grid_;
    std::vector<double> nodes_;
    std::vector<double> midpoints_;
};

} // namespace lans
