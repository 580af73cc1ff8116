#include "lans/channel_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lans/error.hpp"

namespace lans {

namespace {

std::vector<std::size_t> wall_nodes(const Grid1D& g) {
    std::vector<std::size_t> w;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.is_wall(i)) w.push_back(i);
    return w;
}

double wall_value(const Grid1D& g, std::size_t i, const BoundaryValues& b) {
    return i == 0 && g.geometry() == Geometry::Channel ? b.lower : b.upper;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::size_t step_count(double t_end, double dt) {
    const double steps = t_end / dt;
    const double r = std::round(steps);
    if (r < 1.0 || std::abs(steps - r) > 1e-9 * r) {
        std::ostringstream os;
        os << "t_end " << t_end << " is not a whole number of steps of " << dt;
        throw InvalidArgument(os.str());
    }
    return static_cast<std::size_t>(r);
}

} // namespace

ChannelState make_state(GridFunction1D u0, RhoProfile rho, const PhysicalParams& params,
                        BoundaryValues boundary, GridFunction1D forcing) {
    params.validate();
    require_same_grid(u0.grid, rho.grid());
    if (!forcing.values.empty()) require_same_grid(forcing.grid, rho.grid());
    const Grid1D& g = *u0.grid;
    for (double v : u0.values)
        if (!std::isfinite(v)) throw InvalidArgument("initial data not finite");
    for (std::size_t i : wall_nodes(g)) {
        if (u0[i] != wall_value(g, i, boundary)) throw InvalidArgument("initial data violate boundary values");
    }
    return {0.0, std::move(u0), std::move(rho), params, boundary, std::move(forcing)};
}

ChannelStepper::ChannelStepper(const RhoProfile& rho, const PhysicalParams& params, double dt, double theta)
    : grid_(rho.grid()), flux_(rho), params_(params), ops_(assemble_operators(rho, params)), dt_(dt), theta_(theta) {
    params.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
    if (!(theta >= 0.5 && theta <= 1.0)) throw InvalidArgument("theta must lie in [1/2, 1]");
    const std::size_t n = grid_->size();
    const std::size_t k = std::max(ops_.mass.upper_bandwidth(), ops_.diffusion.upper_bandwidth());
    BandedMatrix lhs(n, k, k);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= k ? i - k : 0, hi = std::min(n - 1, i + k);
        for (std::size_t j = lo; j <= hi; ++j) lhs.at(i, j) = ops_.mass(i, j) - theta * dt * ops_.diffusion(i, j);
    }
    for (std::size_t i : wall_nodes(*grid_)) lhs.set_identity_row(i);
    lu_.emplace(lhs);
}

void ChannelStepper::advance(ChannelState& s) const {
    require_same_grid(s.u.grid, grid_);
    const Grid1D& g = *grid_;
    const auto lu = flux_.apply(s.u.values);
    const auto llu = flux_.apply_conservative(lu);
    const auto lu_fv = flux_.apply_conservative(s.u.values);
    const double a2 = params_.alpha * params_.alpha;
    const double c = s.params.pressure_gradient;
    const bool forced = !s.forcing.values.empty();
    std::vector<double> rhs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.is_wall(i)) {
            rhs[i] = wall_value(g, i, s.boundary) - s.u[i];
        } else {
            const double du = params_.nu * (lu_fv[i] - a2 * llu[i]);
            rhs[i] = dt_ * (du - c + (forced ? s.forcing[i] : 0.0));
        }
    }
    const auto delta = lu_->solve(rhs);
    for (std::size_t i = 0; i < g.size(); ++i) s.u[i] += delta[i];
    for (std::size_t i : wall_nodes(g)) s.u[i] = wall_value(g, i, s.boundary);
    for (double v : s.u.values)
        if (!std::isfinite(v)) throw SolverFailure("non-finite velocity after step");
    s.t += dt_;
}

ChannelState step(const ChannelState& state, double dt) {
    ChannelState next = state;
    ChannelStepper(state.rho, state.params, dt).advance(next);
    return next;
}

double discrete_energy(const ChannelState& state) {
    const auto mu = mass_operator(state.u, state.rho, state.params);
    return interior_inner_product(*state.u.grid, state.u.values, mu.values);
}

double steady_defect(const ChannelState& state) {
    const auto du = diffusion_operator(state.u, state.rho, state.params);
    const Grid1D& g = *state.u.grid;
    const double c = state.params.pressure_gradient;
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.is_wall(i)) continue;
        const double f = state.forcing.values.empty() ? 0.0 : state.forcing[i];
        m = std::max(m, std::abs(c - f - du[i]));
    }
    return m;
}

LiftedProblem make_lifting(BoundaryValues boundary, const RhoProfile& rho, const PhysicalParams& params,
                           const std::optional<GridFunction1D>& u0, const std::optional<GridFunction1D>& lifting) {
    params.validate();
    const GridPtr& grid = rho.grid();
    const Grid1D& g = *grid;
    LiftedProblem out;
    if (lifting) {
        require_same_grid(lifting->grid, grid);
        for (std::size_t i : wall_nodes(g)) {
            if ((*lifting)[i] != wall_value(g, i, boundary)) throw InvalidArgument("lifting violates boundary values");
        }
        out.lifting = *lifting;
    } else {
        out.lifting = GridFunction1D(grid, 0.0);
        const double h = g.extent();
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.geometry() == Geometry::Channel) {
                out.lifting[i] = boundary.lower + (boundary.upper - boundary.lower) * (g.node(i) + h) / (2.0 * h);
            } else {
                out.lifting[i] = boundary.upper;
            }
        }
        for (std::size_t i : wall_nodes(g)) out.lifting[i] = wall_value(g, i, boundary);
    }
    out.forcing = diffusion_operator(out.lifting, rho, params);
    if (u0) {
        require_same_grid(u0->grid, grid);
        out.w0 = GridFunction1D(grid, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) out.w0[i] = (*u0)[i] - out.lifting[i];
        for (std::size_t i : wall_nodes(g)) {
            if (out.w0[i] != 0.0) throw InvalidArgument("initial data violate boundary values");
        }
    }
    return out;
}

SteadyRun run_to_steady(const ChannelState& initial, double dt, double t_max, double steady_tol, double theta) {
    if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
    if (!(steady_tol > 0.0)) throw InvalidArgument("steady_tol must be positive");
    const ChannelStepper stepper(initial.rho, initial.params, dt, theta);
    SteadyRun run{initial, {}};
    const std::size_t max_steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    for (std::size_t k = 0; k < max_steps; ++k) {
        const std::vector<double> prev = run.state.u.values;
        stepper.advance(run.state);
        const double rate = sup_diff(prev, run.state.u.values) / dt;
        ++run.report.steps;
        run.report.final_rate = rate;
        run.report.history.emplace_back(run.state.t, rate);
        if (rate <= steady_tol) {
            run.report.converged = true;
            break;
        }
    }
    return run;
}

TemporalOrderReport temporal_order_check(const ChannelState& initial, double t_end, std::vector<double> dts,
                                         double theta, double reference_dt) {
    if (dts.size() < 2) throw InvalidArgument("need at least two time steps");
    std::sort(dts.begin(), dts.end(), std::greater<>());
    TemporalOrderReport rep;
    rep.dts = dts;
    rep.reference_dt = reference_dt > 0.0 ? reference_dt : dts.back() / 16.0;
    const auto run = [&](double dt) {
        const std::size_t steps = step_count(t_end, dt);
        const ChannelStepper stepper(initial.rho, initial.params, dt, theta);
        ChannelState s = initial;
        for (std::size_t k = 0; k < steps; ++k) stepper.advance(s);
        return s.u.values;
    };
    const auto ref = run(rep.reference_dt);
    double scale = 0.0;
    for (double v : ref) scale = std::max(scale, std::abs(v));
    for (double dt : dts) rep.errors.push_back(sup_diff(run(dt), ref));
    const double e1 = rep.errors[rep.errors.size() - 2], e2 = rep.errors.back();
    if (e2 <= 1e-13 * std::max(scale, 1.0) || e1 <= 1e-13 * std::max(scale, 1.0)) {
        rep.skipped = true;
        return rep;
    }
    rep.order = std::log(e1 / e2) / std::log(dts[dts.size() - 2] / dts.back());
    return rep;
}

} // namespace lans
