#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace lans {

using Spectrum = std::vector<std::complex<double>>;
/// One Spectrum (or one real array) per velocity component.
using SpectralField = std::vector<Spectrum>;
using PhysicalField = std::vector<std::vector<double>>;

/// Periodic box [0, 2 pi)^d with n points per axis and real-to-complex
/// storage: the last axis keeps wavenumbers 0..n/2. Coefficients are
/// normalized so that u(x) = sum_k u_hat(k) exp(i k.x).
///
/// Modes with every |k_j| < n/3 are retained; quadratic products of retained
/// fields are then alias-free on the retained set.
class SpectralGrid {
public:
    SpectralGrid(int dimension, std::size_t n);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    int dimension() const { return dim_; }
    std::size_t n() const { return n_; }
    std::size_t physical_size() const { return phys_size_; }
    std::size_t spectral_size() const { return spec_size_; }
    double spacing() const;
    /// (2 pi)^d
    double volume() const;

    const std::array<double, 3>& wavevector(std::size_t m) const { return k_[m]; }
    double k2(std::size_t m) const { return k2_[m]; }
    bool retained(std::size_t m) const { return retained_[m]; }
    /// Multiplicity of a stored mode in the full spectrum (1 or 2).
    double weight(std::size_t m) const { return weight_[m]; }
    /// Coordinates of physical point p.
    std::array<double, 3> point(std::size_t p) const;

    Spectrum forward(const std::vector<double>& f) const;
    std::vector<double> backward(const Spectrum& s) const;
    void truncate(Spectrum& s) const;

    SpectralField forward(const PhysicalField& f) const;
    PhysicalField backward(const SpectralField& s) const;

private:
    int dim_;
    std::size_t n_;
    std::size_t phys_size_;
    std::size_t spec_size_;
    std::vector<std::array<double, 3>> k_;
    std::vector<double> k2_;
    std::vector<bool> retained_;
    std::vector<double> weight_;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
};

using SpectralGridPtr = std::shared_ptr<const SpectralGrid>;

SpectralGridPtr make_spectral_grid(int dimension, std::size_t n);

SpectralField zero_field(const SpectralGrid& g);

/// i k_axis s
Spectrum derivative(const SpectralGrid& g, const Spectrum& s, int axis);
Spectrum divergence(const SpectralGrid& g, const SpectralField& w);

/// w / (1 + alpha^2 |k|^2)
SpectralField helmholtz_invert(const SpectralGrid& g, const SpectralField& w, double alpha);
/// (1 + alpha^2 |k|^2) u
SpectralField helmholtz_apply(const SpectralGrid& g, const SpectralField& u, double alpha);
/// (I - k k^T / |k|^2) w, with the mean and the sign-less Nyquist modes removed.
SpectralField leray_project(const SpectralGrid& g, const SpectralField& w);
/// Divergence-free projection built from (1 - alpha^2 Delta); on the torus it
/// is helmholtz_invert . leray_project . helmholtz_apply.
SpectralField stokes_project(const SpectralGrid& g, const SpectralField& w, double alpha);

/// Truncated, mean-free, divergence-free copy of w.
SpectralField prepare_velocity(const SpectralGrid& g, SpectralField w);
/// 2D velocity (d psi/dy, -d psi/dx) from a stream function.
SpectralField velocity_from_stream(const SpectralGrid& g, const std::vector<double>& psi);
/// Deterministic random solenoidal field with rms speed `rms`; spectrum
/// weighted by 1 / (1 + |k|^2).
SpectralField random_solenoidal_field(const SpectralGrid& g, std::uint64_t seed, double rms = 1.0);

/// alpha^2 (1 - alpha^2 Delta)^{-1} Div(G G^T + G G - G^T G), G_ij = d u_i / d x_j.
SpectralField u_alpha_term(const SpectralGrid& g, const SpectralField& u, double alpha);

/// Velocity u, momentum v = (1 - alpha^2 Delta) u and the raw forcing f
/// (empty means zero). The LANS-1 form smooths f by the Helmholtz inverse.
struct SpectralState {
    SpectralGridPtr grid;
    double alpha = 0.0;
    double nu = 0.0;
    double t = 0.0;
    SpectralField u;
    SpectralField v;
    SpectralField f;
};

/// Throws InvalidArgument unless u is retained, mean-free and divergence-free
/// to 1e-12 relative.
SpectralState make_spectral_state(SpectralGridPtr grid, SpectralField u, double alpha, double nu,
                                  SpectralField f = {});

/// du/dt = -P[u.grad u + U^alpha(u)] + nu Delta u + (1 - alpha^2 Delta)^{-1} P f
SpectralField rhs_lans1(const SpectralState& s);
/// dv/dt = -P[u.grad v - alpha^2 (grad u)^T Delta u] + nu Delta v + P f
SpectralField rhs_lans2(const SpectralState& s);

/// max over modes |(1 + alpha^2 |k|^2) rhs_lans1 - rhs_lans2| / max |rhs_lans2|
double form_equivalence_gap(const SpectralState& s);

/// (a, b) = integral of a.b over the box.
double inner(const SpectralGrid& g, const SpectralField& a, const SpectralField& b);
double l2_norm_sq(const SpectralGrid& g, const SpectralField& u);
double gradient_norm_sq(const SpectralGrid& g, const SpectralField& u);
double laplacian_norm_sq(const SpectralGrid& g, const SpectralField& u);
/// integral of 2 Def u : Def u
double deformation_norm_sq(const SpectralGrid& g, const SpectralField& u);
double max_speed(const SpectralGrid& g, const SpectralField& u);

struct StepInfo {
    double cfl = 0.0;  // max|u| dt / dx at the start of the step
    bool cfl_warning = false;
};

/// Integrating-factor Heun step on the LANS-1 form: the viscous symbol is
/// integrated exactly, the rest by the explicit second-order Runge-Kutta
/// pair, with re-projection after each stage.
SpectralState step_imex(const SpectralState& s, double dt, StepInfo* info = nullptr);

struct LedgerEntry {
    double t = 0.0;
    double e1 = 0.0;           // |u|^2 + alpha^2 |grad u|^2
    double dissipation = 0.0;  // nu (|grad u|^2 + alpha^2 |Delta u|^2)
    double work = 0.0;         // (f, u)
    double residual = 0.0;     // |dE1/dt - 2 (work - dissipation)|
};

using EnergyLedger = std::vector<LedgerEntry>;

LedgerEntry ledger_entry(const SpectralState& s);

/// Fills the residual column from three-point differences of E1 (centered
/// inside, one-sided at the ends) and returns its maximum. Needs at least
/// three entries with increasing times.
double energy_balance_check(EnergyLedger& ledger);

struct TorusRun {
    SpectralState state;
    EnergyLedger ledger;  // one entry per step, starting at the initial state
    double max_cfl = 0.0;
    std::size_t cfl_warnings = 0;
};

/// Steps to t_end (a whole number of dt) and records the ledger.
TorusRun integrate(const SpectralState& initial, double dt, double t_end);

struct AlphaLimitTable {
    std::vector<double> alphas;
    std::vector<double> errors;  // |u_alpha(T) - u_NS(T)|_L2
    double slope = 0.0;          // least squares in log-log over alpha > 0
};

AlphaLimitTable alpha_limit_study(const SpectralGridPtr& grid, const SpectralField& u0, double nu,
                                  const SpectralField& f, double t_end, const std::vector<double>& alphas,
                                  double dt, std::size_t jobs = 1);

} // namespace lans
