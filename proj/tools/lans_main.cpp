// lans <command> [--config FILE] [--key value ...]
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lans/acceptance.hpp"
#include "lans/channel_evolution.hpp"
#include "lans/config.hpp"
#include "lans/covariance.hpp"
#include "lans/error.hpp"
#include "lans/output.hpp"
#include "lans/steady_profiles.hpp"
#include "lans/torus_cases.hpp"
#include "lans/torus_isotropic.hpp"

namespace fs = std::filesystem;
using namespace lans;

namespace {

enum ExitCode { ok = 0, config_error = 1, solver_error = 2, verify_failed = 3 };

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void say(const std::string& line) { std::cout << line << '\n'; }

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// ---------------------------------------------------------------- rho

BvpResult solve_rho(const RunConfig& c, const GridPtr& grid, BvpMethod m) {
    if (grid->geometry() == Geometry::Pipe) return solve_pipe_rho(c.params, grid, m, c.tol);
    if (m == BvpMethod::Shooting) return solve_channel_rho_shooting(c.params, grid);
    CollocationOptions opt;
    opt.tol = c.tol;
    return solve_channel_rho_collocation(c.params, grid, opt);
}

double phi_log(double d) { return d > 0.0 ? d * std::sqrt(std::abs(std::log(d))) : 0.0; }

int cmd_rho(const RunConfig& c, Geometry geometry) {
    const bool channel = geometry == Geometry::Channel;
    const auto grid = make_grid(geometry, c.params.extent, c.n);
    const auto primary = c.method == "shooting" ? BvpMethod::Shooting : BvpMethod::Collocation;
    const auto res = solve_rho(c, grid, primary);
    const auto& rho = res.rho;

    say(std::string(channel ? "channel" : "pipe") + " rho, " + to_string(primary) + ", n = " + std::to_string(c.n));
    say("  centre value A = " + fmt(res.report.center_value));
    say("  residual norm = " + fmt(res.report.residual_norm) + " (" + std::to_string(res.report.iterations) +
        " iterations)");
    if (!res.report.note.empty()) say("  note: " + res.report.note);
    if (!channel) say("  axis slope rho'(0) = " + fmt(axis_slope(rho)));

    if (c.method == "both") {
        const auto other = solve_rho(c, grid, BvpMethod::Shooting);
        double gap = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) gap = std::max(gap, std::abs(rho.node(i) - other.rho.node(i)));
        say("  shooting vs collocation sup discrepancy = " + fmt(gap));
    }
    if (c.n >= 17) {
        const auto coarse = solve_rho(c, make_grid(geometry, c.params.extent, (c.n + 1) / 2), primary);
        double diff = 0.0;
        for (std::size_t i = 0; i < coarse.rho.size(); ++i)
            diff = std::max(diff, std::abs(coarse.rho.node(i) - rho.node(2 * i)));
        say("  refinement difference vs n = " + std::to_string((c.n + 1) / 2) + ": " + fmt(diff));
    }

    std::optional<DecayFit> fit;
    if (c.params.alpha > 0.0) {
        try {
            fit = boundary_decay_fit(rho);
            const auto lin = boundary_decay_fit(rho, 1e-3, 1e-2, DecayModel::Linear);
            say("  decay fit C = " + fmt(fit->coefficient) + ", goodness " + fmt(fit->goodness) + " (linear model " +
                fmt(lin.goodness) + ", " + std::to_string(fit->samples) + " nodes)");
        } catch (const InvalidArgument& e) {
            say(std::string("  decay fit skipped: ") + e.what() + " in d in [1e-3, 1e-2]");
        }
    }

    const auto dist = grid->wall_distance();
    CsvTable t;
    t.columns = {channel ? "z" : "r", "rho", "d", "rho_cs_fit"};
    t.units = {"L", "1", "1", "1"};
    PlotSpec plot;
    plot.title = std::string(channel ? "channel" : "pipe") + " rho, alpha = " + fmt(c.params.alpha);
    plot.x_label = channel ? "z" : "r";
    plot.y_label = "rho";
    PlotSeries prof{"rho", {}, {}}, near{"C d sqrt|log d| (d <= 0.1)", {}, {}};
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double x = grid->node(i), d = dist[i];
        const double f = fit ? fit->coefficient * phi_log(d) : std::nan("");
        t.add_row({x, rho.node(i), d, f});
        prof.x.push_back(x);
        prof.y.push_back(rho.node(i));
        if (fit && d <= 0.1) {
            near.x.push_back(x);
            near.y.push_back(f);
        }
    }
    plot.series = {prof};
    if (fit) plot.series.push_back(near);
    const std::string stem = channel ? "rho_channel" : "rho_pipe";
    write_csv(fs::path(c.outdir) / (stem + ".csv"), t);
    write_svg(fs::path(c.outdir) / (stem + ".svg"), plot);
    return ok;
}

// ---------------------------------------------------------------- covariance

int cmd_covariance(const RunConfig& c) {
    PhysicalParams p = c.params;
    const auto grid = make_grid(Geometry::Channel, p.extent, c.n);
    CollocationOptions opt;
    opt.tol = c.tol;
    const auto rho = solve_channel_rho_collocation(p, grid, opt).rho;
    const auto flow = poiseuille_flow(grid, p);

    CsvTable eig;
    eig.columns = {"z", "lambda1", "lambda2", "lambda3"};
    eig.units = {"L", "1", "1", "1"};
    PlotSpec ep{"eigenvalues of F at t = " + fmt(c.t_eval), "z", "lambda", false, false, {}};
    ep.series = {{"lambda1 = rho", {}, {}}, {"lambda2", {}, {}}, {"lambda3", {}, {}}};
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = rho.node(i);
        const auto e = eigenvalues_closed_form(r, c.t_eval * flow.shear[i]);
        // Descending triple is (top, rho, bottom); columns put rho first.
        const double lam[3] = {r, e.l1, e.l3};
        eig.add_row({grid->node(i), lam[0], lam[1], lam[2]});
        for (int k = 0; k < 3; ++k) {
            ep.series[k].x.push_back(grid->node(i));
            ep.series[k].y.push_back(lam[k]);
        }
    }

    std::vector<double> times;
    for (std::size_t k = 0; k < c.t_samples; ++k)
        times.push_back(c.t_min * std::pow(c.t_final / c.t_min, double(k) / double(c.t_samples - 1)));
    const auto s = sup_norm_trajectory(times, rho, flow, p);
    CsvTable fm;
    fm.columns = {"t", "max", "argmax_z"};
    fm.units = {"T", "1", "L"};
    PlotSpec fp{"sup norm of F", "t", "max lambda", true, true, {{"max", {}, {}}}};
    for (const auto& x : s) {
        fm.add_row({x.t, x.max, x.argmax});
        fp.series[0].x.push_back(x.t);
        fp.series[0].y.push_back(x.max);
    }
    say("covariance, n = " + std::to_string(c.n) + ", eigenvalues at t = " + fmt(c.t_eval));
    say("  growth exponent over t in [" + fmt(c.t_min) + ", " + fmt(c.t_final) + "] = " + fmt(growth_exponent(s)));
    say("  argmax at t = " + fmt(s.back().t) + ": z = " + fmt(s.back().argmax));
    write_csv(fs::path(c.outdir) / "eigen_t2.csv", eig);
    write_svg(fs::path(c.outdir) / "eigen_t2.svg", ep);
    write_csv(fs::path(c.outdir) / "fmax.csv", fm);
    write_svg(fs::path(c.outdir) / "fmax.svg", fp);
    return ok;
}

// ---------------------------------------------------------------- channel evolution

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

int cmd_evolve(const RunConfig& c) {
    const bool shear = c.boundary == "shear";
    PhysicalParams p = c.params;
    const auto grid = make_grid(Geometry::Channel, p.extent, c.n);
    if (shear) p.pressure_gradient = 0.0;
    else p = p.with_poiseuille_forcing(Geometry::Channel);

    std::string source = c.rho_source;
    if (source == "auto") source = shear ? "constant" : "bvp";
    RhoProfile rho;
    if (source == "bvp") {
        CollocationOptions opt;
        opt.tol = c.tol;
        rho = solve_channel_rho_collocation(p, grid, opt).rho;
    } else if (source == "constant") {
        rho = RhoProfile::constant(grid, 1.0);
    } else {
        if (!shear) throw ConfigError("rho_source = closed-form applies to boundary = shear");
        rho = shear_rho_closed_form(grid, p);
    }

    const BoundaryValues walls{0.0, shear ? p.wall_speed : 0.0};
    const auto target = shear ? shear_velocity(grid, p) : poiseuille_velocity(grid, p);
    say(std::string("channel evolution, ") + (shear ? "shear" : "no-slip") + ", rho = " + source +
        ", n = " + std::to_string(c.n) + ", dt = " + fmt(c.dt) + ", theta = " + fmt(c.theta));

    GridFunction1D u0(grid, 0.0);
    u0[grid->size() - 1] = walls.upper;
    u0[0] = walls.lower;
    const auto lift = make_lifting(walls, rho, p, u0);
    if (shear) {
        const auto closed = make_lifting(walls, shear_rho_closed_form(grid, p), p);
        say("  lifted forcing with this rho: |f|_inf = " + fmt(sup_abs(lift.forcing.values)));
        say("  lifted forcing with the closed-form rho: |f|_inf = " + fmt(sup_abs(closed.forcing.values)));
        if (source == "closed-form") {
            say("  the closed-form rho is negative inside, so the frozen-rho evolution is ill-posed; not stepping");
            return ok;
        }
    }
    // Work with w = u - v, which vanishes at both walls.
    const auto initial = make_state(lift.w0, rho, p, {}, lift.forcing);
    const auto full = [&](const ChannelState& s) {
        GridFunction1D u(grid, 0.0);
        for (std::size_t i = 0; i < grid->size(); ++i) u[i] = s.u[i] + lift.lifting[i];
        return u;
    };
    const auto error_of = [&](const ChannelState& s) {
        const auto u = full(s);
        double m = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) m = std::max(m, std::abs(u[i] - target[i]));
        return m;
    };

    std::vector<double> pending = c.snapshot_times;
    std::sort(pending.begin(), pending.end());
    const auto write_snapshot_csv = [&](const ChannelState& s, double requested) {
        CsvTable t;
        t.columns = {"z", "u", "u_steady"};
        t.units = {"L", "L/T", "L/T"};
        const auto u = full(s);
        for (std::size_t i = 0; i < grid->size(); ++i) t.add_row({grid->node(i), u[i], target[i]});
        write_csv(fs::path(c.outdir) / ("evolve_t" + time_tag(requested) + ".csv"), t);
    };

    CsvTable hist;
    hist.columns = {"t", "rate", "energy", "error"};
    hist.units = {"T", "L/T^2", "L^3/T^2", "L/T"};
    const ChannelStepper stepper(rho, p, c.dt, c.theta);
    // Rannacher start-up: the first steps are taken as two implicit Euler half
    // steps each, which damps the stiff modes that Crank-Nicolson would leave
    // ringing when the initial data jumps at a wall.
    const ChannelStepper startup(rho, p, 0.5 * c.dt, 1.0);
    constexpr std::size_t startup_steps = 4;
    ChannelState state = initial;
    const auto flush_snapshots = [&] {
        while (!pending.empty() && state.t >= pending.front() - 0.5 * c.dt) {
            write_snapshot_csv(state, pending.front());
            pending.erase(pending.begin());
        }
    };
    flush_snapshots();
    bool converged = false;
    std::size_t steps = 0;
    double rate = 0.0;
    GridFunction1D previous = state.u;
    ChannelState smoothed = state;
    const std::size_t max_steps = static_cast<std::size_t>(std::ceil(c.t_max / c.dt - 1e-9));
    while (steps < max_steps && !(converged && pending.empty())) {
        const auto before = state.u;
        if (steps < startup_steps && c.theta < 1.0) {
            startup.advance(state);
            startup.advance(state);
        } else {
            stepper.advance(state);
        }
        ++steps;
        // Two-step rate: stiff modes that Crank-Nicolson multiplies by nearly
        // -1 each step (round-off included) cancel in u_{n+1} - u_{n-1}.
        const auto& base = steps >= 2 ? previous : before;
        rate = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) rate = std::max(rate, std::abs(state.u[i] - base[i]));
        rate /= (steps >= 2 ? 2.0 : 1.0) * c.dt;
        previous = before;
        if (steps == startup_steps) smoothed = state;
        if (!std::isfinite(rate)) throw SolverFailure("channel evolution diverged at t = " + fmt(state.t));
        if (!converged && rate <= c.steady_tol) {
            converged = true;
            say("  steady to " + fmt(c.steady_tol) + " at t = " + fmt(state.t) + " after " + std::to_string(steps) +
                " steps");
        }
        hist.add_row({state.t, rate, discrete_energy(state), error_of(state)});
        flush_snapshots();
    }
    for (double t : pending) say("  snapshot at t = " + fmt(t) + " not reached (t_max = " + fmt(c.t_max) + ")");
    if (!converged) say("  not steady by t_max = " + fmt(c.t_max) + ", last rate " + fmt(rate));
    say("  final max error vs the " + std::string(shear ? "linear shear" : "Poiseuille") +
        " profile = " + fmt(error_of(state)));
    write_csv(fs::path(c.outdir) / "evolve_history.csv", hist);

    if (c.order_check) {
        // Ten coarse steps from the state after start-up, where the data is smooth.
        const double t_end = 10.0 * c.dt;
        const auto rep = temporal_order_check(smoothed, t_end, {c.dt, c.dt / 2, c.dt / 4}, c.theta);
        if (rep.skipped) say("  order check: errors at round-off, nothing to measure");
        else
            say("  observed temporal order = " + fmt(rep.order) + " (errors " + fmt(rep.errors[0]) + ", " +
                fmt(rep.errors[1]) + ", " + fmt(rep.errors[2]) + ")");
    }
    return converged ? ok : solver_error;
}

// ---------------------------------------------------------------- torus

int cmd_torus(const RunConfig& c) {
    const auto g = make_spectral_grid(c.torus_dim, c.torus_n);
    const auto u0 = named_initial_velocity(*g, c.torus_init, c.seed);
    const SpectralField f = c.forcing != 0.0 ? steady_forcing(*g, c.forcing) : SpectralField{};
    say("torus, d = " + std::to_string(c.torus_dim) + ", N = " + std::to_string(c.torus_n) + ", alpha = " +
        fmt(c.torus_alpha) + ", nu = " + fmt(c.torus_nu) + ", dt = " + fmt(c.torus_dt) + ", T = " + fmt(c.torus_t_end));

    auto run = integrate(make_spectral_state(g, u0, c.torus_alpha, c.torus_nu, f), c.torus_dt, c.torus_t_end);
    const double e0 = run.ledger.front().e1, e1 = run.ledger.back().e1;
    if (c.torus_t_end > 0.0 && e0 > 0.0)
        say("  |dE1| / E1 per unit time = " + fmt(std::abs(e1 - e0) / e0 / c.torus_t_end));
    if (run.ledger.size() >= 3) say("  max energy-balance residual = " + fmt(energy_balance_check(run.ledger)));
    say("  max CFL = " + fmt(run.max_cfl) + (run.cfl_warnings ? ", warnings: " + std::to_string(run.cfl_warnings) : ""));

    CsvTable t;
    t.columns = {"t", "E1", "dissipation", "work", "residual"};
    const std::string vol = "L^" + std::to_string(c.torus_dim + 2);
    t.units = {"T", vol + "/T^2", vol + "/T^3", vol + "/T^3", vol + "/T^3"};
    PlotSpec plot{"E1", "t", "E1", false, false, {{"E1", {}, {}}}};
    for (const auto& e : run.ledger) {
        t.add_row({e.t, e.e1, e.dissipation, e.work, e.residual});
        plot.series[0].x.push_back(e.t);
        plot.series[0].y.push_back(e.e1);
    }
    write_csv(fs::path(c.outdir) / "torus_ledger.csv", t);
    write_svg(fs::path(c.outdir) / "torus_ledger.svg", plot);

    if (c.check_forms) {
        double gap = 0.0;
        for (std::size_t k = 0; k < c.form_samples; ++k) {
            const auto u = random_solenoidal_field(*g, c.seed + k);
            gap = std::max(gap, form_equivalence_gap(make_spectral_state(g, u, c.torus_alpha, c.torus_nu, f)));
        }
        say("  LANS-1 / LANS-2 max mode-wise discrepancy over " + std::to_string(c.form_samples) +
            " random states = " + fmt(gap));
    }
    if (!c.alpha_sweep.empty()) {
        const auto table = alpha_limit_study(g, u0, c.torus_nu, f, c.torus_t_end, c.alpha_sweep, c.torus_dt, c.jobs);
        CsvTable a;
        a.columns = {"alpha", "error"};
        a.units = {"L", "L^2/T"};
        PlotSpec ap{"distance to the alpha = 0 solution", "alpha", "L2 error", true, true, {{"error", {}, {}}}};
        say("  alpha-limit table at T = " + fmt(c.torus_t_end));
        for (std::size_t k = 0; k < table.alphas.size(); ++k) {
            a.add_row({table.alphas[k], table.errors[k]});
            ap.series[0].x.push_back(table.alphas[k]);
            ap.series[0].y.push_back(table.errors[k]);
            say("    alpha = " + fmt(table.alphas[k]) + "  error = " + fmt(table.errors[k]));
        }
        say("  log-log slope = " + fmt(table.slope));
        write_csv(fs::path(c.outdir) / "torus_alpha_limit.csv", a);
        write_svg(fs::path(c.outdir) / "torus_alpha_limit.svg", ap);
    }
    if (c.snapshot) {
        const auto path = fs::path(c.outdir) / ("torus_u_t" + time_tag(run.state.t) + ".bin");
        write_snapshot(path, snapshot_of(run.state));
        say("  snapshot " + path.string());
    }
    return ok;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& c, const std::vector<int>& ids) {
    const auto results = run_acceptance(ids.empty() ? criterion_ids() : ids, c.jobs);
    nlohmann::ordered_json out;
    std::size_t failed = 0;
    for (const auto& r : results) {
        std::cerr << summary_line(r) << '\n';
        nlohmann::ordered_json j{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"seconds", r.seconds},
                                 {"budget_seconds", nullptr}};
        if (r.budget > 0.0) j["budget_seconds"] = r.budget;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& ch : r.checks)
            j["checks"].push_back({{"name", ch.name}, {"value", ch.value}, {"requirement", ch.requirement},
                                   {"passed", ch.passed}});
        if (!r.error.empty()) j["error"] = r.error;
        out["criteria"].push_back(j);
        failed += !r.passed;
    }
    out["passed"] = results.size() - failed;
    out["failed"] = failed;
    const std::string text = out.dump(2);
    std::cout << text << '\n';
    std::ofstream(fs::path(c.outdir) / "verify.json") << text << '\n';
    return failed ? verify_failed : ok;
}

// ---------------------------------------------------------------- driver

struct CommandInfo {
    const char* name;
    const char* help;
};

constexpr CommandInfo commands[] = {
    {"channel-rho", "steady rho profile of the channel"},
    {"pipe-rho", "steady rho profile of the pipe"},
    {"covariance", "eigenvalues and sup norm of the covariance tensor in Poiseuille flow"},
    {"evolve-channel", "time evolution of the channel velocity with frozen rho"},
    {"torus", "isotropic LANS-alpha on the periodic box"},
    {"verify", "run the acceptance suite and print a JSON summary"},
};

struct KeyOption {
    std::string key;
    CLI::Option* option;
};

int run(const RunConfig& c, const std::vector<int>& criteria) {
    if (c.command == "channel-rho") return cmd_rho(c, Geometry::Channel);
    if (c.command == "pipe-rho") return cmd_rho(c, Geometry::Pipe);
    if (c.command == "covariance") return cmd_covariance(c);
    if (c.command == "evolve-channel") return cmd_evolve(c);
    if (c.command == "torus") return cmd_torus(c);
    return cmd_verify(c, criteria);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LANS-alpha numerical laboratory"};
    app.require_subcommand(1);
    std::string config_path;
    std::vector<int> criteria;
    std::map<std::string, std::string> values;  // node-stable storage for option targets
    std::map<std::string, bool> flags;
    std::vector<std::pair<CLI::App*, std::vector<KeyOption>>> subs;

    for (const auto& cmd : commands) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "key = value file; options given here override it");
        std::vector<KeyOption> opts;
        for (const auto& key : config_keys()) {
            if (key == "command") continue;
            std::string names = "--" + key;
            if (key.find('_') != std::string::npos) {
                std::string dashed = key;
                std::replace(dashed.begin(), dashed.end(), '_', '-');
                names += ",--" + dashed;
            }
            if (key == "wall_speed") names += ",--U";
            CLI::Option* o = is_flag_key(key) ? sub->add_flag(names, flags[key], "")
                                               : sub->add_option(names, values[key], "");
            opts.push_back({key, o});
        }
        if (std::string(cmd.name) == "verify")
            sub->add_option("--criteria", criteria, "criterion ids to run (default: all)")->delimiter(',');
        subs.emplace_back(sub, std::move(opts));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : config_error;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        if (const char* env = std::getenv("LANS_OUTDIR"); env && *env) config.outdir = env;
        for (const auto& [sub, opts] : subs) {
            if (!sub->parsed()) continue;
            config.command = sub->get_name();
            for (const auto& [key, o] : opts) {
                if (o->count() == 0) continue;
                set_config_value(config, key, is_flag_key(key) ? (flags[key] ? "true" : "false") : values[key]);
            }
        }
        validate_config(config);
        std::error_code ec;
        fs::create_directories(config.outdir, ec);
        if (ec || !fs::is_directory(config.outdir))
            throw ConfigError("output directory " + config.outdir + " is not writable");
        std::ofstream probe(fs::path(config.outdir) / "run_config.toml");
        if (!probe) throw ConfigError("output directory " + config.outdir + " is not writable");
        probe << serialize_config(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }

    try {
        return run(config, criteria);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return solver_error;
    }
}
