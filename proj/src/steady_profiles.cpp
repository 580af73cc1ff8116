#include "lans/steady_profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "lans/banded.hpp"
#include "lans/ode.hpp"
#include "lans/root_finding.hpp"
#include "lans/stencil.hpp"
#include "lans/operators1d.hpp"

namespace lans {

const char* to_string(BvpMethod m) {
    return m == BvpMethod::Shooting ? "shooting" : "collocation";
}

namespace {

// ---------------------------------------------------------------------------
// Discrete flux form.
//
// Unknowns are the midpoint values m_j. With Q_j = g x m_j at midpoints and
// G_i the finite-volume divergence of Q at node i (wall and axis values by the
// extrapolation closures of FluxDivergence),
//     Psi_j = Q_j - alpha^2 g_j m_j (G_{j+1} - G_j) / dx - kappa P_j,
// where (P_{i+1/2} - P_{i-1/2}) / mu_i = 1. This is the integrated equation;
// Poiseuille flow then makes D u exactly -2 beta nu kappa whenever Psi = 0.

struct Term {
    std::size_t mid;
    double coef;
};

class FluxFormBvp {
public:
    FluxFormBvp(const GridPtr& grid, const PhysicalParams& params)
        : grid_(grid), a2_(params.alpha * params.alpha) {
        const Grid1D& g = *grid_;
        const std::size_t n = g.size();
        if (n < 5) throw InvalidArgument("n too small");
        const bool pipe = g.geometry() == Geometry::Pipe;
        kappa_ = pipe ? 2.0 : 1.0;
        const std::size_t m = n - 1;
        qcoef_.resize(m);
        gw_.resize(m);
        p_.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double x = g.midpoint(j);
            gw_[j] = g.weight(x);
            qcoef_[j] = gw_[j] * x;
            p_[j] = pipe ? 0.5 * x * x : x;
        }
        node_terms_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (g.is_wall(i)) continue;
            const double mu = g.cell_measure(i);
            if (i + 1 < n) node_terms_[i].push_back({i, qcoef_[i] / mu});
            if (i > 0) node_terms_[i].push_back({i - 1, -qcoef_[i - 1] / mu});
        }
        // Same closures as the flux divergence; the wall flux g x rho vanishes.
        for (const auto& c : wall_closures(g)) {
            std::vector<Term> terms;
            for (const auto& [j, w] : c.mid_weights) terms.push_back({j, w * qcoef_[j]});
            node_terms_[c.node] = std::move(terms);
        }
    }

    std::size_t unknowns() const { return qcoef_.size(); }

    std::vector<double> node_divergence(std::span<const double> mids) const {
        std::vector<double> gdiv(node_terms_.size());
        for (std::size_t i = 0; i < gdiv.size(); ++i) {
            double s = 0.0;
            for (const auto& t : node_terms_[i]) s += t.coef * mids[t.mid];
            gdiv[i] = s;
        }
        return gdiv;
    }

    std::vector<double> residual(std::span<const double> mids) const {
        const auto gdiv = node_divergence(mids);
        const double dx = grid_->spacing();
        std::vector<double> psi(mids.size());
        for (std::size_t j = 0; j < mids.size(); ++j) {
            psi[j] = qcoef_[j] * mids[j] - a2_ * gw_[j] * mids[j] * (gdiv[j + 1] - gdiv[j]) / dx -
                     kappa_ * p_[j];
        }
        return psi;
    }

    BandedMatrix jacobian(std::span<const double> mids) const {
        const auto gdiv = node_divergence(mids);
        const double dx = grid_->spacing();
        const std::size_t m = mids.size();
        BandedMatrix jac(m, 3, 3);
        for (std::size_t j = 0; j < m; ++j) {
            jac.at(j, j) += qcoef_[j] - a2_ * gw_[j] * (gdiv[j + 1] - gdiv[j]) / dx;
            const double s = -a2_ * gw_[j] * mids[j] / dx;
            for (const auto& t : node_terms_[j + 1]) jac.at(j, t.mid) += s * t.coef;
            for (const auto& t : node_terms_[j]) jac.at(j, t.mid) -= s * t.coef;
        }
        return jac;
    }

    /// Node residual (Psi_{i+1/2} - Psi_{i-1/2}) / dx; pipe axis Psi_{1/2} / (dx/2).
    GridFunction1D node_residual(std::span<const double> psi) const {
        const Grid1D& g = *grid_;
        const double dx = g.spacing();
        GridFunction1D out(grid_, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.is_wall(i)) continue;
            if (i == 0) {
                // Every term of the pipe residual carries a factor r.
                out[i] = 0.0;
            } else {
                out[i] = (psi[i] - psi[i - 1]) / dx;
            }
        }
        return out;
    }

private:
    GridPtr grid_;
    double a2_;
    double kappa_ = 1.0;
    std::vector<double> qcoef_;
    std::vector<double> gw_;
    std::vector<double> p_;
    std::vector<std::vector<Term>> node_terms_;
};

double sup_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double sum_sq(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

GridFunction1D residual_for(const RhoProfile& rho, const PhysicalParams& params, Geometry expected) {
    if (rho.grid()->geometry() != expected) throw InvalidArgument("wrong geometry");
    const FluxFormBvp bvp(rho.grid(), params);
    return bvp.node_residual(bvp.residual(rho.midpoints()));
}

// ---------------------------------------------------------------------------
// Shooting.
//
// rho'' = (rho - 1) / (alpha^2 rho) - k rho' / x with k = 2 (channel) or 3
// (pipe). The core is integrated in the deficit w = 1 - rho, which keeps
// centre values within 1e-16 of one meaningful at small alpha. Close to the
// wall the trajectory switches to s = ln rho as the independent variable,
// which resolves the steep approach to zero.

struct Trajectory {
    double deficit = 0.0; // 1 - rho(0)
    bool hit = false;
    double x_hit = 0.0;
    double x_switch = 0.0;
    double x_floor = 0.0;
    double rho_floor = 0.0;
    ode::Solution near_center; // state (w, w')
    ode::Solution near_wall; // independent variable s = ln rho, state (x, rho')
};

class Shooter {
public:
    Shooter(double alpha, double extent, double k, const ShootingOptions& o)
        : a2_(alpha * alpha), extent_(extent), k_(k), opt_(o) {}

    Trajectory run(double deficit) const {
        Trajectory tr;
        tr.deficit = deficit;
        tr.rho_floor = opt_.rho_floor;
        const double x_end = 2.0 * extent_;
        const double rho_switch = std::min(0.05, 0.5 * (1.0 - deficit));
        ode::Options oo;
        oo.rtol = opt_.rtol;
        oo.atol = opt_.atol * std::min(1.0, deficit);
        oo.max_step = 0.05 * extent_;

        const auto rhs = [this](double x, std::span<const double> y, std::span<double> dy) {
            const double w = y[0];
            dy[0] = y[1];
            if (x <= 0.0) {
                dy[1] = w / ((k_ + 1.0) * a2_ * (1.0 - w));
            } else {
                dy[1] = w / (a2_ * (1.0 - w)) - k_ * y[1] / x;
            }
        };
        const ode::Event ev = [rho_switch](double, std::span<const double> y) {
            return (1.0 - y[0]) - rho_switch;
        };
        const std::array<double, 2> y0{deficit, 0.0};
        tr.near_center = ode::integrate(rhs, 0.0, y0, x_end, oo, ev);
        if (!tr.near_center.event_hit) return tr;
        tr.x_switch = tr.near_center.t_final;
        const double slope = -tr.near_center.y_final[1];
        if (!(slope < 0.0)) return tr;

        const auto rhs_s = [this](double s, std::span<const double> y, std::span<double> dy) {
            const double rho = std::exp(s);
            const double x = y[0];
            const double p = y[1];
            dy[0] = rho / p;
            dy[1] = ((rho - 1.0) / a2_ - k_ * rho * p / x) / p;
        };
        const ode::Event turn = [](double, std::span<const double> y) { return -y[1]; };
        ode::Options so = oo;
        so.max_step = 0.0;
        const std::array<double, 2> s0{tr.x_switch, slope};
        tr.near_wall = ode::integrate(rhs_s, std::log(rho_switch), s0, std::log(opt_.rho_floor), so, turn);
        if (tr.near_wall.event_hit) return tr; // slope turned non-negative
        tr.x_floor = tr.near_wall.y_final[0];
        tr.x_hit = tr.x_floor + opt_.rho_floor / std::abs(tr.near_wall.y_final[1]);
        tr.hit = true;
        return tr;
    }

    double miss(double deficit) const {
        const Trajectory tr = run(deficit);
        return (tr.hit ? tr.x_hit : 2.0 * extent_) - extent_;
    }

private:
    double a2_;
    double extent_;
    double k_;
    ShootingOptions opt_;
};

// rho at x >= 0 from a trajectory.
double sample(const Trajectory& tr, double x) {
    if (x <= tr.x_switch) return 1.0 - tr.near_center.eval_component(x, 0);
    if (!tr.hit) return 0.0;
    if (x >= tr.x_hit) return 0.0;
    if (x >= tr.x_floor) return tr.rho_floor * (tr.x_hit - x) / (tr.x_hit - tr.x_floor);
    // x(s) is increasing as s decreases; find the step that brackets x.
    const auto& steps = tr.near_wall.steps;
    auto it = std::lower_bound(steps.begin(), steps.end(), x, [](const ode::DenseStep& st, double v) {
        return st.eval_component(st.t1(), 0) < v;
    });
    if (it == steps.end()) --it;
    double sa = it->t0, sb = it->t1();
    double fa = it->eval_component(sa, 0) - x, fb = it->eval_component(sb, 0) - x;
    for (int iter = 0; iter < 200 && std::abs(sb - sa) > 1e-15; ++iter) {
        const double sm = 0.5 * (sa + sb);
        const double fm = it->eval_component(sm, 0) - x;
        if ((fm > 0.0) == (fb > 0.0)) {
            sb = sm;
            fb = fm;
        } else {
            sa = sm;
            fa = fm;
        }
    }
    (void)fa;
    return std::exp(0.5 * (sa + sb));
}

BvpResult shoot_profile(const PhysicalParams& params, const GridPtr& grid, double k,
                        const ShootingOptions& options) {
    params.validate();
    if (!(params.alpha > 0.0)) throw InvalidArgument("shooting requires alpha > 0");
    if (!grid) throw InvalidArgument("null grid");
    const double h = params.extent;
    if (grid->extent() != h) throw InvalidArgument("grid extent differs from params");
    const Shooter shooter(params.alpha, h, k, options);

    // The miss is monotone in the centre value and roughly linear in
    // eta = -ln(1 - A); root-find in eta.
    const auto deficit_of = [](double eta) { return std::exp(-eta); };
    const auto phi = [&](double eta) { return shooter.miss(deficit_of(eta)); };
    Bracket b;
    b.lo = -std::log1p(-options.bracket_lo);
    b.f_lo = phi(b.lo);
    if (b.f_lo > 0.0) {
        std::ostringstream os;
        os.precision(17);
        os << "no sign change in bracket [" << options.bracket_lo << ", 1]: trajectory from A="
           << options.bracket_lo << " already reaches the wall late";
        throw SolverFailure(os.str());
    }
    b.hi = std::max(1.0, 2.0 * b.lo);
    b.f_hi = phi(b.hi);
    while (b.f_hi < 0.0) {
        b.lo = b.hi;
        b.f_lo = b.f_hi;
        b.hi *= 2.0;
        if (b.hi > 700.0) {
            std::ostringstream os;
            os.precision(17);
            os << "no sign change in bracket [" << options.bracket_lo << ", 1 - " << deficit_of(b.hi) << "]";
            throw SolverFailure(os.str());
        }
        b.f_hi = phi(b.hi);
    }
    const RootResult root = solve_bracketed(phi, b, 1e-15 * std::max(1.0, b.hi), options.tol);
    const double deficit = deficit_of(root.x);
    const double center = 1.0 - deficit;
    const Trajectory tr = shooter.run(deficit);
    if (!tr.hit) throw SolverFailure("converged trajectory does not reach the wall");

    const bool channel = grid->geometry() == Geometry::Channel;
    auto rho = RhoProfile::from_function(grid, [&](double x) { return sample(tr, std::abs(x)); });
    std::vector<double> nodes(rho.nodes().begin(), rho.nodes().end());
    std::vector<double> mids(rho.midpoints().begin(), rho.midpoints().end());
    nodes.back() = 0.0;
    if (channel) nodes.front() = 0.0;

    BvpResult out{RhoProfile(grid, std::move(nodes), std::move(mids)), {}};
    out.report.method = BvpMethod::Shooting;
    out.report.iterations = root.iterations;
    out.report.residual_norm = std::abs(tr.x_hit - h);
    out.report.center_value = center;
    out.report.history = root.history;
    return out;
}

// ---------------------------------------------------------------------------
// Collocation.

struct NewtonOutcome {
    bool converged = false;
    bool at_roundoff = false;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::vector<double> mids;
    std::vector<double> history;
};

NewtonOutcome newton(const GridPtr& grid, const PhysicalParams& params, std::vector<double> mids,
                     double tol, std::size_t max_iter) {
    const FluxFormBvp bvp(grid, params);
    NewtonOutcome out;
    auto psi = bvp.residual(mids);
    double f0 = sum_sq(psi);
    for (std::size_t it = 1; it <= max_iter; ++it) {
        std::vector<double> rhs(psi.size());
        for (std::size_t j = 0; j < psi.size(); ++j) rhs[j] = -psi[j];
        std::vector<double> step;
        try {
            step = BandedLU(bvp.jacobian(mids)).solve(rhs);
        } catch (const SingularMatrix&) {
            break;
        }
        double lambda = 1.0;
        const auto admissible = [&](double lam) {
            for (std::size_t j = 0; j < mids.size(); ++j) {
                if (!(mids[j] + lam * step[j] > 0.0)) return false;
            }
            return true;
        };
        int halvings = 0;
        while (!admissible(lambda) && halvings < 60) {
            lambda *= 0.5;
            ++halvings;
        }
        std::vector<double> trial(mids.size());
        std::vector<double> tpsi;
        double f1 = 0.0;
        bool accepted = false;
        for (int k = 0; k <= 30; ++k) {
            for (std::size_t j = 0; j < mids.size(); ++j) trial[j] = mids[j] + lambda * step[j];
            tpsi = bvp.residual(trial);
            f1 = sum_sq(tpsi);
            if (f1 <= (1.0 - 1e-4 * lambda) * f0 || f1 == 0.0) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        // Near convergence the merit function sits at round-off; accept a full
        // step whose size is itself at round-off level.
        const bool tiny = sup_norm(step) <= 1e-12 * std::max(1.0, sup_norm(mids));
        if (!accepted && tiny) {
            for (std::size_t j = 0; j < mids.size(); ++j) trial[j] = mids[j] + step[j];
            tpsi = bvp.residual(trial);
            accepted = true;
        }
        if (!accepted) break;
        const double f_prev = f0;
        mids.swap(trial);
        psi.swap(tpsi);
        f0 = sum_sq(psi);
        out.iterations = it;
        out.residual = sup_norm(bvp.node_residual(psi).values);
        out.history.push_back(out.residual);
        if (out.residual <= tol) {
            out.converged = true;
            break;
        }
        // Fine grids put the residual floor above tol. Once the steps are small
        // and the merit function has stopped contracting, no further progress
        // is possible.
        const bool stalled = sup_norm(step) <= 1e-8 * std::max(1.0, sup_norm(mids)) && f0 > 0.25 * f_prev;
        if ((tiny || stalled) && it > 1) {
            out.converged = true;
            out.at_roundoff = true;
            break;
        }
    }
    out.mids = std::move(mids);
    return out;
}

BvpResult collocate(const PhysicalParams& params, const GridPtr& grid,
                    const CollocationOptions& options, const std::optional<RhoProfile>& guess,
                    double shoot_k) {
    params.validate();
    if (!(params.alpha > 0.0)) throw InvalidArgument("collocation requires alpha > 0");
    if (!grid) throw InvalidArgument("null grid");
    if (grid->extent() != params.extent) throw InvalidArgument("grid extent differs from params");
    const double h = params.extent;

    std::vector<double> mids;
    if (guess) {
        require_same_grid(guess->grid(), grid);
        mids.assign(guess->midpoints().begin(), guess->midpoints().end());
    } else {
        const auto coarse = make_grid(grid->geometry(), h, 33);
        ShootingOptions so;
        so.tol = 1e-8;
        so.rtol = 1e-9;
        so.atol = 1e-12;
        const double a0 = shoot_profile(params, coarse, shoot_k, so).report.center_value;
        mids.resize(grid->size() - 1);
        for (std::size_t j = 0; j < mids.size(); ++j) {
            const double x = grid->midpoint(j) / h;
            mids[j] = a0 * (1.0 - x * x);
        }
    }

    std::string note;
    NewtonOutcome res;
    if (!options.force_continuation) {
        res = newton(grid, params, mids, options.tol, options.max_iterations);
    }
    if (!res.converged) {
        const double start = options.continuation_start > 0.0 ? options.continuation_start
                                                              : 2.0 * params.alpha;
        const std::size_t steps = std::max<std::size_t>(options.continuation_steps, 1);
        std::vector<double> current = mids;
        std::size_t total = res.iterations;
        std::vector<double> history = res.history;
        bool roundoff = false;
        for (std::size_t s = 0; s <= steps; ++s) {
            PhysicalParams p = params;
            p.alpha = start + (params.alpha - start) * static_cast<double>(s) / static_cast<double>(steps);
            NewtonOutcome stage = newton(grid, p, current, options.tol, options.max_iterations);
            total += stage.iterations;
            history.insert(history.end(), stage.history.begin(), stage.history.end());
            if (!stage.converged) {
                std::ostringstream os;
                os.precision(6);
                os << "Newton diverged after maximum damping at alpha=" << p.alpha
                   << " (last residual " << stage.residual << ")";
                throw SolverFailure(os.str());
            }
            current = std::move(stage.mids);
            roundoff = roundoff || stage.at_roundoff;
        }
        res.converged = true;
        res.at_roundoff = roundoff;
        res.iterations = total;
        res.history = std::move(history);
        res.mids = std::move(current);
        note = "alpha continuation from " + std::to_string(start);
    }

    if (res.at_roundoff) {
        if (!note.empty()) note += "; ";
        note += "residual limited by round-off at this resolution";
    }
    BvpResult out{RhoProfile::from_midpoints(grid, std::move(res.mids), 0.0), {}};
    const FluxFormBvp bvp(grid, params);
    out.report.method = BvpMethod::Collocation;
    out.report.iterations = res.iterations;
    out.report.residual_norm = sup_norm(bvp.node_residual(bvp.residual(out.rho.midpoints())).values);
    out.report.center_value = out.rho.center_value();
    out.report.history = std::move(res.history);
    out.report.note = note;
    return out;
}

} // namespace

std::vector<double> integrated_rho_residual(const RhoProfile& rho, const PhysicalParams& params) {
    const FluxFormBvp bvp(rho.grid(), params);
    return bvp.residual(rho.midpoints());
}

GridFunction1D channel_rho_residual(const RhoProfile& rho, const PhysicalParams& params) {
    return residual_for(rho, params, Geometry::Channel);
}

GridFunction1D pipe_rho_residual(const RhoProfile& rho, const PhysicalParams& params) {
    return residual_for(rho, params, Geometry::Pipe);
}

BvpResult solve_channel_rho_shooting(const PhysicalParams& params, const GridPtr& grid,
                                     const ShootingOptions& options) {
    if (!grid || grid->geometry() != Geometry::Channel) throw InvalidArgument("wrong geometry");
    return shoot_profile(params, grid, 2.0, options);
}

BvpResult solve_channel_rho_collocation(const PhysicalParams& params, const GridPtr& grid,
                                        const CollocationOptions& options,
                                        const std::optional<RhoProfile>& initial_guess) {
    if (!grid || grid->geometry() != Geometry::Channel) throw InvalidArgument("wrong geometry");
    return collocate(params, grid, options, initial_guess, 2.0);
}

BvpResult solve_pipe_rho(const PhysicalParams& params, const GridPtr& grid, BvpMethod method,
                         double tol, const std::optional<RhoProfile>& initial_guess) {
    if (!grid || grid->geometry() != Geometry::Pipe) throw InvalidArgument("wrong geometry");
    params.validate();
    if (params.alpha == 0.0) {
        // Singular limit: rho = 1 solves the equation and the wall condition is lost.
        BvpResult out{RhoProfile::constant(grid, 1.0), {}};
        out.report.method = method;
        out.report.center_value = 1.0;
        out.report.note = "alpha = 0: constant profile, wall condition not imposed";
        return out;
    }
    if (method == BvpMethod::Shooting) {
        ShootingOptions so;
        if (tol > 0.0) so.tol = tol;
        return shoot_profile(params, grid, 3.0, so);
    }
    CollocationOptions co;
    if (tol > 0.0) co.tol = tol;
    return collocate(params, grid, co, initial_guess, 3.0);
}

double center_curvature(const RhoProfile& rho) {
    const Grid1D& g = *rho.grid();
    const double dx = g.spacing();
    if (g.geometry() == Geometry::Pipe) {
        return 2.0 * (rho.node(1) - rho.node(0)) / (dx * dx);
    }
    const std::size_t n = g.size();
    if (n % 2 == 0) throw InvalidArgument("channel grid needs a centre node");
    const std::size_t c = n / 2;
    return (rho.node(c + 1) - 2.0 * rho.node(c) + rho.node(c - 1)) / (dx * dx);
}

double axis_slope(const RhoProfile& rho) {
    const Grid1D& g = *rho.grid();
    if (g.geometry() != Geometry::Pipe) throw InvalidArgument("axis slope needs a pipe grid");
    if (g.size() < 5) throw InvalidArgument("axis slope needs five nodes");
    std::array<double, 5> xs{};
    for (std::size_t k = 0; k < 5; ++k) xs[k] = g.node(k);
    const auto w = fd_weights_for(0.0, xs, 1);
    double s = 0.0;
    for (std::size_t k = 0; k < 5; ++k) s += w[k] * rho.node(k);
    return s;
}

double center_identity_defect(const RhoProfile& rho, const PhysicalParams& params) {
    const double k = rho.grid()->geometry() == Geometry::Pipe ? 3.0 : 2.0;
    const double r0 = rho.center_value();
    return r0 * (1.0 - (k + 1.0) * params.alpha * params.alpha * center_curvature(rho)) - 1.0;
}

GridFunction1D poiseuille_velocity(const GridPtr& grid, const PhysicalParams& params) {
    GridFunction1D u(grid, 0.0);
    const double h2 = params.extent * params.extent;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = grid->node(i);
        u[i] = params.beta * (h2 - x * x);
    }
    u.values.back() = 0.0;
    if (grid->geometry() == Geometry::Channel) u.values.front() = 0.0;
    return u;
}

GridFunction1D poiseuille_shear(const GridPtr& grid, const PhysicalParams& params) {
    GridFunction1D du(grid, 0.0);
    for (std::size_t i = 0; i < du.size(); ++i) du[i] = -2.0 * params.beta * grid->node(i);
    return du;
}

RhoProfile shear_rho_closed_form(const GridPtr& grid, const PhysicalParams& params) {
    if (!(params.alpha > 0.0)) throw InvalidArgument("closed form requires alpha > 0");
    const double h = params.extent;
    const double scale = 1.0 / (2.0 * params.alpha * params.alpha);
    auto rho = RhoProfile::from_function(grid, [&](double z) { return scale * (z - h) * (z + h); });
    std::vector<double> nodes(rho.nodes().begin(), rho.nodes().end());
    nodes.front() = 0.0;
    nodes.back() = 0.0;
    return {grid, std::move(nodes), std::vector<double>(rho.midpoints().begin(), rho.midpoints().end())};
}

GridFunction1D shear_rho_identity_residual(const GridPtr& grid, const PhysicalParams& params) {
    const double a2 = params.alpha * params.alpha;
    GridFunction1D out(grid, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double z = grid->node(i);
        const double d1 = z / a2;   // rho'
        const double d2 = 1.0 / a2; // rho''
        // (rho rho'')' = rho' rho'' since rho''' = 0.
        out[i] = d1 - a2 * (d1 * d2);
    }
    return out;
}

GridFunction1D shear_velocity(const GridPtr& grid, const PhysicalParams& params) {
    GridFunction1D u(grid, 0.0);
    const double h = params.extent;
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = params.wall_speed * (grid->node(i) + h) / (2.0 * h);
    }
    u.values.front() = 0.0;
    u.values.back() = params.wall_speed;
    return u;
}

} // namespace lans
