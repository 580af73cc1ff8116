#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace lans::ode {

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
/// Terminal event: integration stops where the function changes sign.
using Event = std::function<double(double t, std::span<const double> y)>;

struct Options {
    double rtol = 1e-12;
    double atol = 1e-14;
    double initial_step = 0.0; // 0 selects a heuristic
    double max_step = 0.0;     // 0 means unlimited
    std::size_t max_steps = 200000;
};

/// One accepted step with its continuous extension.
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> coeffs; // 5 blocks of size dim

    double t1() const { return t0 + h; }
    std::vector<double> eval(double t) const;
    double eval_component(double t, std::size_t k) const;
};

struct Solution {
    std::vector<DenseStep> steps;
    double t_final = 0.0;
    std::vector<double> y_final;
    bool event_hit = false;
    std::size_t rhs_evaluations = 0;

    /// Dense-output lookup; t must lie within the integrated range.
    std::vector<double> eval(double t) const;
    double eval_component(double t, std::size_t k) const;
};

/// Dormand-Prince 5(4) with Hairer's continuous extension. Integrates from t0
/// towards t_end (either direction). Throws SolverFailure when the step size
/// underflows or max_steps is exceeded.
Solution integrate(const Rhs& rhs, double t0, std::span<const double> y0, double t_end,
                   const Options& options, const std::optional<Event>& event = std::nullopt);

} // namespace lans::ode
