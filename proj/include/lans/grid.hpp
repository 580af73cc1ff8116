#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "lans/params.hpp"

namespace lans {

inline constexpr std::size_t kMinGridNodes = 8;
inline constexpr std::size_t kDefaultChannelNodes = 1025;
inline constexpr std::size_t kDefaultPipeNodes = 513;

/// Uniform node set on [-h, h] (channel) or [0, a] (pipe).
///
/// Nodes are indexed 0..n-1, midpoints j = 0..n-2 sit between node j and
/// node j+1. The wall distance is normalized by the extent, so it is 0 at a
/// physical wall and 1 at the channel center or pipe axis.
class Grid1D {
public:
    Grid1D(Geometry geometry, double extent, std::size_t n);

    Geometry geometry() const { return geometry_; }
    double extent() const { return extent_; }
    std::size_t size() const { return nodes_.size(); }
    double spacing() const { return spacing_; }

    double lower() const { return nodes_.front(); }
    double upper() const { return nodes_.back(); }

    std::span<const double> nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double midpoint(std::size_t j) const { return 0.5 * (nodes_[j] + nodes_[j + 1]); }
    std::vector<double> midpoints() const;

    std::span<const double> wall_distance() const { return wall_distance_; }

    /// True for nodes that carry a Dirichlet (no-slip) condition: both ends of
    /// the channel, only r = a for the pipe.
    bool is_wall(std::size_t i) const;

    /// Radial weight of the divergence operator: 1 in the channel, r in the pipe.
    double weight(double x) const { return geometry_ == Geometry::Pipe ? x : 1.0; }

    /// Finite-volume measure of the cell around node i (weighted by r for the
    /// pipe; the axis cell is [0, dx/2]).
    double cell_measure(std::size_t i) const;

    bool operator==(const Grid1D& other) const;

private:
    Geometry geometry_;
    double extent_;
    double spacing_;
    std::vector<double> nodes_;
    std::vector<double> wall_distance_;
};

using GridPtr = std::shared_ptr<const Grid1D>;

/// Builds a uniform grid. Throws InvalidArgument("n too small") when
/// n < min_nodes; tests may lower min_nodes to probe tiny grids.
GridPtr make_grid(Geometry geometry, double extent, std::size_t n,
                  std::size_t min_nodes = kMinGridNodes);

/// Real samples on the nodes of a grid.
struct GridFunction1D {
    GridPtr grid;
    std::vector<double> values;

    GridFunction1D() = default;
    GridFunction1D(GridPtr g, std::vector<double> v);
    GridFunction1D(GridPtr g, double fill);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

bool same_grid(const GridPtr& a, const GridPtr& b);
void require_same_grid(const GridPtr& a, const GridPtr& b);

} // namespace lans
