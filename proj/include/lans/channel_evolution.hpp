#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lans/banded.hpp"
#include "lans/grid.hpp"
#include "lans/operators1d.hpp"
#include "lans/params.hpp"
#include "lans/rho_profile.hpp"

namespace lans {

/// Velocities of the lower and upper wall (or only `upper` for the pipe).
struct BoundaryValues {
    double lower = 0.0;
    double upper = 0.0;
};

/// State of M u_t - D u = -c + f with rho frozen. An empty `forcing` means f = 0.
struct ChannelState {
    double t = 0.0;
    GridFunction1D u;
    RhoProfile rho;
    PhysicalParams params;
    BoundaryValues boundary;
    GridFunction1D forcing;
};

/// Checks that u0 matches the boundary values exactly and is finite.
ChannelState make_state(GridFunction1D u0, RhoProfile rho, const PhysicalParams& params,
                        BoundaryValues boundary = {}, GridFunction1D forcing = {});

/// Theta scheme (M - theta dt D) u+ = (M + (1 - theta) dt D) u - dt c + dt f
/// with wall rows pinned, solved for the increment u+ - u so that D u is
/// applied in difference form. theta = 1/2 is Crank-Nicolson; theta = 1 is
/// the implicit Euler scheme used as a first-order control.
class ChannelStepper {
public:
    ChannelStepper(const RhoProfile& rho, const PhysicalParams& params, double dt, double theta = 0.5);

    double dt() const { return dt_; }
    double theta() const { return theta_; }
    const ChannelOperators& operators() const { return ops_; }

    void advance(ChannelState& state) const;

private:
    GridPtr grid_;
    FluxDivergence flux_;
    PhysicalParams params_;
    ChannelOperators ops_;
    double dt_;
    double theta_;
    std::optional<BandedLU> lu_;
};

/// One Crank-Nicolson step.
ChannelState step(const ChannelState& state, double dt);

/// <u, M u> over interior nodes, i.e. |u|^2 + alpha^2 <rho u', u'> for u
/// vanishing at the walls.
double discrete_energy(const ChannelState& state);

/// sup over interior nodes of |c - f - D u|: the per-unit-time defect of u as
/// a fixed point of the scheme.
double steady_defect(const ChannelState& state);

/// Lifting v with v = g at the walls and forcing f = -L v = D v for steady v.
struct LiftedProblem {
    GridFunction1D lifting;
    GridFunction1D forcing;
    GridFunction1D w0; // u0 - v when u0 was given
};

/// Linear lifting by default; a supplied lifting must match the walls.
LiftedProblem make_lifting(BoundaryValues boundary, const RhoProfile& rho, const PhysicalParams& params,
                           const std::optional<GridFunction1D>& u0 = std::nullopt,
                           const std::optional<GridFunction1D>& lifting = std::nullopt);

struct SteadyRunReport {
    bool converged = false;
    std::size_t steps = 0;
    double final_rate = 0.0;                         // |u_{n+1} - u_n|_inf / dt
    std::vector<std::pair<double, double>> history;  // (t, rate), every step
};

struct SteadyRun {
    ChannelState state;
    SteadyRunReport report;
};

/// Steps until |u_{n+1} - u_n|_inf / dt <= steady_tol or t reaches t_max.
SteadyRun run_to_steady(const ChannelState& initial, double dt, double t_max, double steady_tol,
                        double theta = 0.5);

struct TemporalOrderReport {
    std::vector<double> dts;
    std::vector<double> errors; // sup norm against the reference at t_end
    double reference_dt = 0.0;
    double order = 0.0;         // from the two finest dts
    bool skipped = false;       // errors at round-off: nothing to measure
};

/// Runs to t_end with every dt and with reference_dt (default: finest / 16)
/// and estimates the order from the last two errors. Each t_end / dt must be
/// an integer.
TemporalOrderReport temporal_order_check(const ChannelState& initial, double t_end, std::vector<double> dts,
                                         double theta = 0.5, double reference_dt = 0.0);

} // namespace lans
