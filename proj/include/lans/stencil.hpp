#pragma once

#include <span>
#include <vector>

namespace lans {

/// Finite-difference weights for the derivatives of order 0..max_order at x0,
/// using the (arbitrarily spaced) sample locations xs. Returns a flat array
/// with weights[order * xs.size() + k].
std::vector<double> fd_weights(double x0, std::span<const double> xs, int max_order);

/// Weights for one derivative order only.
std::vector<double> fd_weights_for(double x0, std::span<const double> xs, int order);

} // namespace lans
