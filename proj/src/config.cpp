#include "lans/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lans/error.hpp"
#include "lans/output.hpp"

namespace lans {

namespace {

enum class Kind { Real, Count, Integer, Seed, Text, Flag, List };

struct Entry {
    Kind kind;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* what) {
    throw ConfigError("invalid value '" + value + "' for " + key + ": expected " + what);
}

double parse_real(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x)) bad(key, v, "a finite number");
    return x;
}

template <class T>
T parse_int(const std::string& key, const std::string& v) {
    T x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(key, v, "an integer");
    return x;
}

std::string parse_text(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

bool parse_flag(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    bad(key, v, "true or false");
}

std::vector<double> parse_list(const std::string& key, std::string v) {
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') bad(key, v, "a list [a, b, ...]");
        v = v.substr(1, v.size() - 2);
    }
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
    return out;
}

std::string quote(const std::string& s) { return '"' + s + '"'; }

std::string list_text(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_double(v[k]);
    return s + "]";
}

using Table = std::vector<std::pair<std::string, Entry>>;

Table make_table() {
    Table t;
    const auto add_real = [&](const char* name, auto getter) {
        t.push_back({name, {Kind::Real,
                            [=](RunConfig& c, const std::string& v) { getter(c) = parse_real(name, v); },
                            [=](const RunConfig& c) { return format_double(getter(const_cast<RunConfig&>(c))); }}});
    };
    const auto add_count = [&](const char* name, auto getter) {
        t.push_back({name, {Kind::Count,
                            [=](RunConfig& c, const std::string& v) { getter(c) = parse_int<std::size_t>(name, v); },
                            [=](const RunConfig& c) { return std::to_string(getter(const_cast<RunConfig&>(c))); }}});
    };
    const auto add_text = [&](const char* name, auto getter) {
        t.push_back({name, {Kind::Text, [=](RunConfig& c, const std::string& v) { getter(c) = parse_text(v); },
                            [=](const RunConfig& c) { return quote(getter(const_cast<RunConfig&>(c))); }}});
    };
    const auto add_flag = [&](const char* name, auto getter) {
        t.push_back({name, {Kind::Flag, [=](RunConfig& c, const std::string& v) { getter(c) = parse_flag(name, v); },
                            [=](const RunConfig& c) {
                                return std::string(getter(const_cast<RunConfig&>(c)) ? "true" : "false");
                            }}});
    };
    const auto add_list = [&](const char* name, auto getter) {
        t.push_back({name, {Kind::List, [=](RunConfig& c, const std::string& v) { getter(c) = parse_list(name, v); },
                            [=](const RunConfig& c) { return list_text(getter(const_cast<RunConfig&>(c))); }}});
    };
#define FIELD(expr) [](RunConfig& c) -> auto& { return expr; }
    add_text("command", FIELD(c.command));
    add_real("alpha", FIELD(c.params.alpha));
    add_real("nu", FIELD(c.params.nu));
    add_real("beta", FIELD(c.params.beta));
    add_real("extent", FIELD(c.params.extent));
    add_real("wall_speed", FIELD(c.params.wall_speed));
    add_real("p0", FIELD(c.params.p0));
    add_count("n", FIELD(c.n));
    add_text("method", FIELD(c.method));
    add_real("tol", FIELD(c.tol));
    add_real("steady_tol", FIELD(c.steady_tol));
    add_real("dt", FIELD(c.dt));
    add_real("t_max", FIELD(c.t_max));
    add_real("theta", FIELD(c.theta));
    add_list("snapshot_times", FIELD(c.snapshot_times));
    add_text("boundary", FIELD(c.boundary));
    add_text("rho_source", FIELD(c.rho_source));
    add_flag("order_check", FIELD(c.order_check));
    add_real("t_eval", FIELD(c.t_eval));
    add_real("t_min", FIELD(c.t_min));
    add_real("t_final", FIELD(c.t_final));
    add_count("t_samples", FIELD(c.t_samples));
    t.push_back({"torus_dim", {Kind::Integer,
                               [](RunConfig& c, const std::string& v) { c.torus_dim = parse_int<int>("torus_dim", v); },
                               [](const RunConfig& c) { return std::to_string(c.torus_dim); }}});
    add_count("torus_n", FIELD(c.torus_n));
    add_real("torus_alpha", FIELD(c.torus_alpha));
    add_real("torus_nu", FIELD(c.torus_nu));
    add_real("torus_dt", FIELD(c.torus_dt));
    add_real("torus_t_end", FIELD(c.torus_t_end));
    add_text("torus_init", FIELD(c.torus_init));
    add_real("forcing", FIELD(c.forcing));
    add_flag("check_forms", FIELD(c.check_forms));
    add_count("form_samples", FIELD(c.form_samples));
    add_list("alpha_sweep", FIELD(c.alpha_sweep));
    add_flag("snapshot", FIELD(c.snapshot));
    add_text("outdir", FIELD(c.outdir));
    t.push_back({"seed", {Kind::Seed,
                          [](RunConfig& c, const std::string& v) { c.seed = parse_int<std::uint64_t>("seed", v); },
                          [](const RunConfig& c) { return std::to_string(c.seed); }}});
    add_count("jobs", FIELD(c.jobs));
#undef FIELD
    return t;
}

const Table& table() {
    static const Table t = make_table();
    return t;
}

const Entry& entry(const std::string& key) {
    for (const auto& [name, e] : table())
        if (name == key) return e;
    throw ConfigError("unknown key '" + key + "'");
}

// Drops a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        if (line[k] == '"') quoted = !quoted;
        if (line[k] == '#' && !quoted) return line.substr(0, k);
    }
    return line;
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
    return std::any_of(options.begin(), options.end(), [&](const char* o) { return v == o; });
}

} // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, e] : table()) k.push_back(name);
        return k;
    }();
    return keys;
}

bool is_flag_key(const std::string& key) { return entry(key).kind == Kind::Flag; }

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    entry(key).set(c, trim(value));
}

std::string get_config_value(const RunConfig& c, const std::string& key) { return entry(key).get(c); }

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::map<std::string, std::size_t> seen;
    std::istringstream is{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        try {
            if (eq == std::string::npos) throw ConfigError("expected key = value");
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (key.empty()) throw ConfigError("missing key");
            if (seen.count(key)) throw ConfigError("duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
            seen[key] = line_no;
            set_config_value(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    for (const auto& [name, e] : table()) out += name + " = " + e.get(c) + "\n";
    return out;
}

void validate_config(const RunConfig& c) {
    try {
        c.params.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (!one_of(c.command, {"channel-rho", "pipe-rho", "covariance", "evolve-channel", "torus", "verify"}))
        throw ConfigError("unknown command '" + c.command + "'");
    if (!one_of(c.method, {"shooting", "collocation", "both"})) throw ConfigError("method must be shooting, collocation or both");
    if (!one_of(c.boundary, {"noslip", "shear"})) throw ConfigError("boundary must be noslip or shear");
    if (!one_of(c.rho_source, {"auto", "bvp", "closed-form", "constant"}))
        throw ConfigError("rho_source must be auto, bvp, closed-form or constant");
    if (!one_of(c.torus_init, {"mixed", "taylor-green-plus", "random"}))
        throw ConfigError("torus_init must be mixed, taylor-green-plus or random");
    for (auto [name, v] : {std::pair{"tol", c.tol}, {"steady_tol", c.steady_tol}, {"dt", c.dt}, {"t_max", c.t_max},
                           {"torus_dt", c.torus_dt}, {"t_final", c.t_final}, {"t_min", c.t_min}})
        if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
    if (c.torus_t_end < 0.0 || c.t_eval < 0.0) throw ConfigError("times must be non-negative");
    if (c.t_final <= c.t_min) throw ConfigError("t_final must exceed t_min");
    if (c.t_samples < 2) throw ConfigError("t_samples must be at least 2");
    if (!(c.theta >= 0.5 && c.theta <= 1.0)) throw ConfigError("theta must lie in [0.5, 1]");
    if (c.n < 9 || c.n % 2 == 0) throw ConfigError("n must be odd and at least 9");
    if (c.torus_dim != 2 && c.torus_dim != 3) throw ConfigError("torus_dim must be 2 or 3");
    if (c.torus_n < 8 || c.torus_n % 2 != 0) throw ConfigError("torus_n must be even and at least 8");
    if (c.torus_alpha < 0.0 || c.torus_nu < 0.0) throw ConfigError("torus_alpha and torus_nu must be non-negative");
    for (double a : c.alpha_sweep)
        if (a < 0.0) throw ConfigError("alpha_sweep entries must be non-negative");
    for (double t : c.snapshot_times)
        if (t < 0.0) throw ConfigError("snapshot_times must be non-negative");
    if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
    if (c.form_samples < 1) throw ConfigError("form_samples must be at least 1");
    if (c.outdir.empty()) throw ConfigError("outdir must not be empty");
}

} // namespace lans
