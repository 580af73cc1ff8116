#pragma once

#include <functional>
#include <vector>

namespace lans {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    std::size_t iterations = 0;
    std::vector<double> history; // |f| per iteration
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

/// Illinois-modified regula falsi (a safeguarded secant) on a sign-changing
/// bracket. Stops when |f| <= ftol or the bracket is narrower than xtol.
/// Throws SolverFailure if the bracket does not change sign.
RootResult solve_bracketed(const std::function<double(double)>& f, Bracket bracket,
                           double xtol, double ftol, std::size_t max_iter = 200);

} // namespace lans
