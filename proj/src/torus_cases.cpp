#include "lans/torus_cases.hpp"

#include <cmath>

#include "lans/error.hpp"

namespace lans {

namespace {

PhysicalField sample(const SpectralGrid& g, int components, auto&& fn) {
    PhysicalField out(components, std::vector<double>(g.physical_size()));
    for (std::size_t p = 0; p < g.physical_size(); ++p) {
        const auto x = g.point(p);
        const auto v = fn(x[0], x[1], x[2]);
        for (int i = 0; i < components; ++i) out[i][p] = v[i];
    }
    return out;
}

} // namespace

SpectralField named_initial_velocity(const SpectralGrid& g, const std::string& name, std::uint64_t seed) {
    if (name == "random") return prepare_velocity(g, random_solenoidal_field(g, seed));
    const bool mixed = name == "mixed";
    if (!mixed && name != "taylor-green-plus") throw InvalidArgument("unknown initial velocity '" + name + "'");
    if (g.dimension() == 2) {
        std::vector<double> psi(g.physical_size());
        for (std::size_t p = 0; p < psi.size(); ++p) {
            const auto x = g.point(p);
            psi[p] = std::sin(x[0]) * std::sin(x[1]) + 0.5 * std::cos(2 * x[0] + x[1]);
            if (mixed) psi[p] += 0.3 * std::sin(x[0] - 3 * x[1]);
        }
        return velocity_from_stream(g, psi);
    }
    const auto u = sample(g, 3, [](double x, double y, double z) {
        return std::array<double, 3>{std::sin(x) * std::cos(y) * std::cos(z), -std::cos(x) * std::sin(y) * std::cos(z),
                                     0.5 * std::cos(2 * x + y)};
    });
    return prepare_velocity(g, g.forward(u));
}

SpectralField steady_forcing(const SpectralGrid& g, double amplitude) {
    const int d = g.dimension();
    const auto f = sample(g, d, [&](double x, double y, double) {
        const double c = amplitude * std::cos(2 * x + y);
        return std::array<double, 3>{c, -2.0 * c, 0.0};
    });
    return prepare_velocity(g, g.forward(f));
}

} // namespace lans
