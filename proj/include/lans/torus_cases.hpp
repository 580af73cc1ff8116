#pragma once

#include <cstdint>
#include <string>

#include "lans/torus_isotropic.hpp"

namespace lans {

/// Named initial velocities shared by the CLI and the acceptance suite.
///   2D  taylor-green-plus  psi = sin x sin y + 0.5 cos(2x + y)
///   2D  mixed              the above + 0.3 sin(x - 3y)
///   3D  mixed / taylor-green-plus
///                          (sin x cos y cos z, -cos x sin y cos z, 0) + (0, 0, 0.5 cos(2x + y))
///   any random             random_solenoidal_field(seed)
SpectralField named_initial_velocity(const SpectralGrid& g, const std::string& name, std::uint64_t seed = 1);

/// amplitude (cos(2x + y), -2 cos(2x + y) [, 0]); divergence-free as given.
SpectralField steady_forcing(const SpectralGrid& g, double amplitude);

} // namespace lans
