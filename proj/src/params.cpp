#include "lans/params.hpp"

#include <cmath>

namespace lans {

const char* to_string(Geometry g) {
    return g == Geometry::Pipe ? "pipe" : "channel";
}

void PhysicalParams::validate() const {
    for (double v : {alpha, nu, beta, extent, pressure_gradient, wall_speed, p0}) {
        if (!std::isfinite(v)) throw InvalidArgument("physical parameters must be finite");
    }
    if (alpha < 0.0) throw InvalidArgument("alpha must be non-negative");
    if (extent <= 0.0) throw InvalidArgument("extent (h or a) must be positive");
    if (nu < 0.0) throw InvalidArgument("nu must be non-negative");
}

double PhysicalParams::poiseuille_gradient(Geometry g) const {
    return (g == Geometry::Pipe ? -4.0 : -2.0) * nu * beta;
}

PhysicalParams PhysicalParams::with_poiseuille_forcing(Geometry g) const {
    PhysicalParams p = *this;
    p.pressure_gradient = poiseuille_gradient(g);
    return p;
}

} // namespace lans
