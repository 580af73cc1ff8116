#pragma once

#include "lans/error.hpp"

namespace lans {

enum class Geometry { Channel, Pipe };

const char* to_string(Geometry g);

/// Scalar constants of a run.
///
/// `extent` is the channel half-width h or the pipe radius a, depending on the
/// geometry the parameters are used with. `pressure_gradient` is c = dp/dx
/// (channel) or dp/dz (pipe), so Poiseuille forcing has c < 0.
struct PhysicalParams {
    double alpha = 0.1;
    double nu = 1.0;
    double beta = 1.0;
    double extent = 1.0;
    double pressure_gradient = -2.0;
    double wall_speed = 1.0;
    double p0 = 1.0;

    /// Throws InvalidArgument unless alpha >= 0, extent > 0, nu >= 0 and all
    /// entries are finite. alpha = 0 is accepted for the limiting cases.
    void validate() const;

    /// The pressure gradient that drives Poiseuille flow with amplitude beta:
    /// -2 nu beta in the channel, -4 nu beta in the pipe.
    double poiseuille_gradient(Geometry g) const;

    /// Copy with `pressure_gradient` set to the Poiseuille value.
    PhysicalParams with_poiseuille_forcing(Geometry g) const;

    bool operator==(const PhysicalParams&) const = default;
};

} // namespace lans
