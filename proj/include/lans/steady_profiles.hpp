#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lans/grid.hpp"
#include "lans/params.hpp"
#include "lans/rho_profile.hpp"

namespace lans {

enum class BvpMethod { Shooting, Collocation };

const char* to_string(BvpMethod m);

struct BvpReport {
    BvpMethod method = BvpMethod::Shooting;
    std::size_t iterations = 0;
    /// Shooting: |rho trajectory wall miss| in length units.
    /// Collocation: sup norm of the discrete residual at the nodes.
    double residual_norm = 0.0;
    double center_value = 0.0;
    std::vector<double> history;
    std::string note;
};

struct BvpResult {
    RhoProfile rho;
    BvpReport report;
};

/// Flux form of the integrated covariance equation at the midpoints:
/// channel  z rho - alpha^2 rho (z rho)'' - z,
/// pipe     r^2 rho - alpha^2 r rho (r rho'' + 3 rho') - r^2.
/// Both vanish identically for an exact solution.
std::vector<double> integrated_rho_residual(const RhoProfile& rho, const PhysicalParams& params);

/// (z rho)' - alpha^2 (rho (z rho)'')' - 1 at interior nodes (walls hold 0).
GridFunction1D channel_rho_residual(const RhoProfile& rho, const PhysicalParams& params);

/// r(r rho' + 2 rho) - alpha^2 (r rho (r rho'' + 3 rho'))' - 2r at non-wall nodes.
GridFunction1D pipe_rho_residual(const RhoProfile& rho, const PhysicalParams& params);

struct ShootingOptions {
    double tol = 1e-12;         // allowed wall miss of the trajectory
    double bracket_lo = 1e-3;   // smallest centre value tried
    double rtol = 1e-12;
    double atol = 1e-14;
    double rho_floor = 1e-12;
};

/// Shooting from the centre (rho(0) = A, rho'(0) = 0) with an outer
/// root-find on A; the profile is sampled from the dense trajectory.
BvpResult solve_channel_rho_shooting(const PhysicalParams& params, const GridPtr& grid,
                                     const ShootingOptions& options = {});

struct CollocationOptions {
    double tol = 1e-9;
    std::size_t max_iterations = 100;
    /// Start alpha for continuation; 0 selects 2 alpha.
    double continuation_start = 0.0;
    std::size_t continuation_steps = 4;
    /// Skip the direct attempt and go straight to continuation.
    bool force_continuation = false;
};

/// Damped Newton on the discrete flux form with rho = 0 at the walls. The
/// default initial guess is A0 (1 - (x/h)^2) with A0 from a coarse shooting pass.
BvpResult solve_channel_rho_collocation(const PhysicalParams& params, const GridPtr& grid,
                                        const CollocationOptions& options = {},
                                        const std::optional<RhoProfile>& initial_guess = std::nullopt);

/// Pipe profile by either method. alpha = 0 returns rho = 1 everywhere.
BvpResult solve_pipe_rho(const PhysicalParams& params, const GridPtr& grid, BvpMethod method,
                         double tol = 0.0,
                         const std::optional<RhoProfile>& initial_guess = std::nullopt);

/// Central second difference of node values at the channel centre or pipe axis.
double center_curvature(const RhoProfile& rho);

/// Fourth-order one-sided rho'(0) from the first five pipe nodes.
double axis_slope(const RhoProfile& rho);

/// rho(0) (1 - (k+1) alpha^2 rho''(0)) - 1 with k = 2 (channel) or 3 (pipe).
double center_identity_defect(const RhoProfile& rho, const PhysicalParams& params);

/// beta (h^2 - x^2) on either geometry.
GridFunction1D poiseuille_velocity(const GridPtr& grid, const PhysicalParams& params);
/// Analytic derivative of the Poiseuille profile, -2 beta x.
GridFunction1D poiseuille_shear(const GridPtr& grid, const PhysicalParams& params);

/// (z - h)(z + h) / (2 alpha^2); negative in the interior.
RhoProfile shear_rho_closed_form(const GridPtr& grid, const PhysicalParams& params);

/// rho' - alpha^2 (rho rho'')' evaluated from the analytic derivatives of the
/// closed form at every node.
GridFunction1D shear_rho_identity_residual(const GridPtr& grid, const PhysicalParams& params);

/// U (z + h) / (2h).
GridFunction1D shear_velocity(const GridPtr& grid, const PhysicalParams& params);

} // namespace lans
