#pragma once

#include <array>
#include <span>
#include <vector>

#include "lans/banded.hpp"
#include "lans/grid.hpp"
#include "lans/params.hpp"
#include "lans/rho_profile.hpp"

namespace lans {

/// Value of L u at a wall or axis node as a combination of midpoint fluxes
/// g rho u' and, at walls, of the wall flux itself.
///
/// Walls: a cubic through the wall flux and the three nearest midpoint fluxes
/// is differentiated, plus dx^2/24 times its third derivative. The extra term
/// reproduces the truncation error of the interior finite-volume rows, so the
/// error of L u stays smooth up to the wall; the second application of L
/// depends on that. The wall flux carries the boundary value of rho.
/// Pipe axis: even extrapolation (4 L_1 - L_2) / 3 from the first two rows.
struct WallClosure {
    std::size_t node = 0;
    double wall_weight = 0.0;                              // on g rho u' at the wall
    std::vector<std::pair<std::size_t, double>> mid_weights; // on midpoint fluxes
};

std::vector<WallClosure> wall_closures(const Grid1D& grid);

/// The weighted flux divergence L u = (1/g)(g rho u')' with g = 1 (channel) or
/// g = r (pipe), in finite-volume form with fluxes at midpoints.
///
/// `conservative()` holds the finite-volume rows (wall rows empty).
/// `closed()` uses the closures at walls and the pipe axis and gives L u at
/// every node.
class FluxDivergence {
public:
    explicit FluxDivergence(const RhoProfile& rho);

    const GridPtr& grid() const { return grid_; }
    const BandedMatrix& conservative() const { return conservative_; }
    const BandedMatrix& closed() const { return closed_; }

    /// Matrix-free products in difference form; they agree with the matrices
    /// up to rounding but lose less to cancellation.
    std::vector<double> apply(std::span<const double> u) const;
    std::vector<double> apply_conservative(std::span<const double> u) const;

private:
    struct AppliedClosure {
        std::size_t node = 0;
        double wall_factor = 0.0;
        std::array<std::size_t, 4> nodes{};
        std::array<double, 4> deriv{};
        std::vector<std::pair<std::size_t, double>> mid_weights;
    };

    GridPtr grid_;
    std::vector<double> coef_;        // g rho / dx at midpoints
    std::vector<double> inv_measure_; // 1 / cell measure, 0 on walls
    std::vector<AppliedClosure> closures_;
    BandedMatrix conservative_;
    BandedMatrix closed_;
};

/// Matrices of the mass part M = I - alpha^2 L and of the diffusion part
/// D = nu (L - alpha^2 L L). Wall rows are pinned: identity in M, zero in D.
/// Both have bandwidth at most 3.
struct ChannelOperators {
    BandedMatrix mass;
    BandedMatrix diffusion;
};

ChannelOperators assemble_operators(const RhoProfile& rho, const PhysicalParams& params);

/// M[rho] u at interior nodes; wall entries pass u through unchanged.
GridFunction1D mass_operator(const GridFunction1D& u, const RhoProfile& rho,
                             const PhysicalParams& params);

/// nu((rho u')' - alpha^2 (rho (rho u')'')') at interior nodes (with the 1/r
/// weighted divergence on the pipe); wall entries are zero.
GridFunction1D diffusion_operator(const GridFunction1D& u, const RhoProfile& rho,
                                  const PhysicalParams& params);

/// Discrete inner product sum_i mu_i a_i b_i over non-wall nodes, with mu_i the
/// cell measure. M is symmetric with respect to it on functions vanishing at
/// the walls.
double interior_inner_product(const Grid1D& grid, std::span<const double> a,
                              std::span<const double> b);

} // namespace lans
