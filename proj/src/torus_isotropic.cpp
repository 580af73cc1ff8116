#include "lans/torus_isotropic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "lans/error.hpp"

namespace lans {

namespace {

using cplx = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

void require_field(const SpectralGrid& g, const SpectralField& w) {
    if (w.size() != static_cast<std::size_t>(g.dimension())) throw InvalidArgument("field has wrong component count");
    for (const auto& c : w)
        if (c.size() != g.spectral_size()) throw InvalidArgument("field has wrong spectral size");
}

PhysicalField gradient(const SpectralGrid& g, const SpectralField& u) {
    // G[i * d + j] = d u_i / d x_j
    const int d = g.dimension();
    PhysicalField grad;
    grad.reserve(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) grad.push_back(g.backward(derivative(g, u[i], j)));
    return grad;
}

SpectralField forward_truncated(const SpectralGrid& g, const PhysicalField& f) {
    SpectralField s = g.forward(f);
    for (auto& c : s) g.truncate(c);
    return s;
}

// (a . grad) b from physical a and the physical gradient of b.
PhysicalField advect(const SpectralGrid& g, const PhysicalField& a, const PhysicalField& grad_b) {
    const int d = g.dimension();
    PhysicalField out(d, std::vector<double>(g.physical_size(), 0.0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const auto& gij = grad_b[i * d + j];
            for (std::size_t p = 0; p < g.physical_size(); ++p) out[i][p] += a[j][p] * gij[p];
        }
    return out;
}

SpectralField smoothed_forcing(const SpectralState& s) {
    const SpectralGrid& g = *s.grid;
    if (s.f.empty()) return zero_field(g);
    return helmholtz_invert(g, leray_project(g, s.f), s.alpha);
}

// Everything in LANS-1 except the viscous term.
SpectralField lans1_nonlinear(const SpectralGrid& g, const SpectralField& u, double alpha, const SpectralField& pf) {
    const PhysicalField uu = g.backward(u);
    const PhysicalField grad = gradient(g, u);
    SpectralField n = forward_truncated(g, advect(g, uu, grad));
    if (alpha != 0.0) {
        const SpectralField ua = u_alpha_term(g, u, alpha);
        for (std::size_t i = 0; i < n.size(); ++i)
            for (std::size_t m = 0; m < g.spectral_size(); ++m) n[i][m] += ua[i][m];
    }
    n = leray_project(g, n);
    for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t m = 0; m < g.spectral_size(); ++m) n[i][m] = pf[i][m] - n[i][m];
    return n;
}

} // namespace

SpectralGrid::SpectralGrid(int dimension, std::size_t n) : dim_(dimension), n_(n) {
    if (dimension != 2 && dimension != 3) throw InvalidArgument("dimension must be 2 or 3");
    if (n < 4 || n % 2 != 0) throw InvalidArgument("resolution must be even and at least 4");
    const std::size_t half = n / 2 + 1;
    phys_size_ = dimension == 2 ? n * n : n * n * n;
    spec_size_ = phys_size_ / n * half;
    k_.resize(spec_size_);
    k2_.resize(spec_size_);
    retained_.resize(spec_size_);
    weight_.resize(spec_size_);
    const double cutoff = static_cast<double>(n) / 3.0;
    const auto wave = [n](std::size_t i) { return i <= n / 2 ? double(i) : double(i) - double(n); };
    for (std::size_t m = 0; m < spec_size_; ++m) {
        std::array<double, 3> k{0.0, 0.0, 0.0};
        const std::size_t last = m % half;
        std::size_t rest = m / half;
        k[dimension - 1] = double(last);
        for (int a = dimension - 2; a >= 0; --a) {
            k[a] = wave(rest % n);
            rest /= n;
        }
        k_[m] = k;
        k2_[m] = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        bool keep = true;
        for (int a = 0; a < dimension; ++a) keep = keep && std::abs(k[a]) < cutoff;
        retained_[m] = keep;
        weight_[m] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
    }

    std::vector<double> real(phys_size_);
    Spectrum spec(spec_size_);
    const int dims[3] = {int(n), int(n), int(n)};
    const std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_r2c(dimension, dims, real.data(), as_fftw(spec.data()), flags);
    backward_plan_ = fftw_plan_dft_c2r(dimension, dims, as_fftw(spec.data()), real.data(), flags | FFTW_DESTROY_INPUT);
    if (!forward_plan_ || !backward_plan_) throw Error("FFTW planning failed");
}

SpectralGrid::~SpectralGrid() {
    const std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

double SpectralGrid::spacing() const { return two_pi / double(n_); }

double SpectralGrid::volume() const { return std::pow(two_pi, dim_); }

std::array<double, 3> SpectralGrid::point(std::size_t p) const {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = dim_ - 1; a >= 0; --a) {
        x[a] = spacing() * double(p % n_);
        p /= n_;
    }
    return x;
}

Spectrum SpectralGrid::forward(const std::vector<double>& f) const {
    if (f.size() != phys_size_) throw InvalidArgument("physical array has wrong size");
    std::vector<double> in = f;
    Spectrum out(spec_size_);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in.data(), as_fftw(out.data()));
    const double scale = 1.0 / double(phys_size_);
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<double> SpectralGrid::backward(const Spectrum& s) const {
    if (s.size() != spec_size_) throw InvalidArgument("spectrum has wrong size");
    Spectrum in = s;
    std::vector<double> out(phys_size_);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_plan_), as_fftw(in.data()), out.data());
    return out;
}

void SpectralGrid::truncate(Spectrum& s) const {
    for (std::size_t m = 0; m < spec_size_; ++m)
        if (!retained_[m]) s[m] = 0.0;
}

SpectralField SpectralGrid::forward(const PhysicalField& f) const {
    SpectralField s;
    s.reserve(f.size());
    for (const auto& c : f) s.push_back(forward(c));
    return s;
}

PhysicalField SpectralGrid::backward(const SpectralField& s) const {
    PhysicalField f;
    f.reserve(s.size());
    for (const auto& c : s) f.push_back(backward(c));
    return f;
}

SpectralGridPtr make_spectral_grid(int dimension, std::size_t n) {
    return std::make_shared<const SpectralGrid>(dimension, n);
}

SpectralField zero_field(const SpectralGrid& g) {
    return SpectralField(g.dimension(), Spectrum(g.spectral_size(), 0.0));
}

Spectrum derivative(const SpectralGrid& g, const Spectrum& s, int axis) {
    Spectrum out(s.size());
    // The Nyquist wavenumber has no sign; its derivative is dropped.
    const double nyquist = double(g.n()) / 2.0;
    for (std::size_t m = 0; m < s.size(); ++m) {
        const double k = g.wavevector(m)[axis];
        out[m] = std::abs(k) == nyquist ? cplx(0.0) : cplx(0.0, k) * s[m];
    }
    return out;
}

Spectrum divergence(const SpectralGrid& g, const SpectralField& w) {
    require_field(g, w);
    Spectrum out(g.spectral_size(), 0.0);
    for (int j = 0; j < g.dimension(); ++j) {
        const Spectrum dj = derivative(g, w[j], j);
        for (std::size_t m = 0; m < out.size(); ++m) out[m] += dj[m];
    }
    return out;
}

SpectralField helmholtz_invert(const SpectralGrid& g, const SpectralField& w, double alpha) {
    require_field(g, w);
    SpectralField out = w;
    const double a2 = alpha * alpha;
    for (auto& c : out)
        for (std::size_t m = 0; m < c.size(); ++m) c[m] /= 1.0 + a2 * g.k2(m);
    return out;
}

SpectralField helmholtz_apply(const SpectralGrid& g, const SpectralField& u, double alpha) {
    require_field(g, u);
    SpectralField out = u;
    const double a2 = alpha * alpha;
    for (auto& c : out)
        for (std::size_t m = 0; m < c.size(); ++m) c[m] *= 1.0 + a2 * g.k2(m);
    return out;
}

SpectralField leray_project(const SpectralGrid& g, const SpectralField& w) {
    require_field(g, w);
    const int d = g.dimension();
    SpectralField out = w;
    const double nyquist = double(g.n()) / 2.0;
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const double k2 = g.k2(m);
        const auto& k = g.wavevector(m);
        bool unsigned_mode = false;
        for (int j = 0; j < d; ++j) unsigned_mode = unsigned_mode || std::abs(k[j]) == nyquist;
        if (k2 == 0.0 || unsigned_mode) {
            for (int i = 0; i < d; ++i) out[i][m] = 0.0;
            continue;
        }
        cplx kw = 0.0;
        for (int j = 0; j < d; ++j) kw += k[j] * w[j][m];
        for (int i = 0; i < d; ++i) out[i][m] = w[i][m] - k[i] * kw / k2;
    }
    return out;
}

SpectralField stokes_project(const SpectralGrid& g, const SpectralField& w, double alpha) {
    return helmholtz_invert(g, leray_project(g, helmholtz_apply(g, w, alpha)), alpha);
}

SpectralField prepare_velocity(const SpectralGrid& g, SpectralField w) {
    require_field(g, w);
    for (auto& c : w) g.truncate(c);
    return leray_project(g, w);
}

SpectralField velocity_from_stream(const SpectralGrid& g, const std::vector<double>& psi) {
    if (g.dimension() != 2) throw InvalidArgument("stream functions need dimension 2");
    Spectrum p = g.forward(psi);
    g.truncate(p);
    SpectralField u{derivative(g, p, 1), derivative(g, p, 0)};
    for (auto& c : u[1]) c = -c;
    return prepare_velocity(g, std::move(u));
}

SpectralField random_solenoidal_field(const SpectralGrid& g, std::uint64_t seed, double rms) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    PhysicalField noise(g.dimension(), std::vector<double>(g.physical_size()));
    for (auto& c : noise)
        for (auto& x : c) x = normal(rng);
    SpectralField w = g.forward(noise);
    for (auto& c : w)
        for (std::size_t m = 0; m < c.size(); ++m) c[m] /= 1.0 + g.k2(m);
    w = prepare_velocity(g, std::move(w));
    const double current = std::sqrt(l2_norm_sq(g, w) / g.volume());
    if (current > 0.0)
        for (auto& c : w)
            for (auto& x : c) x *= rms / current;
    return w;
}

SpectralField u_alpha_term(const SpectralGrid& g, const SpectralField& u, double alpha) {
    require_field(g, u);
    if (alpha == 0.0) return zero_field(g);
    const int d = g.dimension();
    const std::size_t np = g.physical_size();
    const PhysicalField grad = gradient(g, u);
    const auto G = [&](int i, int j) -> const std::vector<double>& { return grad[i * d + j]; };
    // T_ik = sum_m G_im G_km + G_im G_mk - G_mi G_mk
    PhysicalField t(d * d, std::vector<double>(np, 0.0));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            auto& tik = t[i * d + k];
            for (int m = 0; m < d; ++m) {
                const auto &gim = G(i, m), &gkm = G(k, m), &gmk = G(m, k), &gmi = G(m, i);
                for (std::size_t p = 0; p < np; ++p) tik[p] += gim[p] * gkm[p] + gim[p] * gmk[p] - gmi[p] * gmk[p];
            }
        }
    const SpectralField th = forward_truncated(g, t);
    SpectralField div = zero_field(g);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const Spectrum dk = derivative(g, th[i * d + k], k);
            for (std::size_t m = 0; m < g.spectral_size(); ++m) div[i][m] += dk[m];
        }
    SpectralField out = helmholtz_invert(g, div, alpha);
    const double a2 = alpha * alpha;
    for (auto& c : out)
        for (auto& x : c) x *= a2;
    return out;
}

SpectralState make_spectral_state(SpectralGridPtr grid, SpectralField u, double alpha, double nu, SpectralField f) {
    if (!grid) throw InvalidArgument("null spectral grid");
    const SpectralGrid& g = *grid;
    require_field(g, u);
    if (!f.empty()) require_field(g, f);
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be finite and non-negative");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be finite and non-negative");
    double scale = 0.0, div = 0.0;
    const Spectrum dv = divergence(g, u);
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        for (int i = 0; i < g.dimension(); ++i) {
            const cplx x = u[i][m];
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw InvalidArgument("velocity not finite");
            if (x != 0.0 && !g.retained(m)) throw InvalidArgument("velocity has modes beyond the dealiasing cutoff");
            if (x != 0.0 && g.k2(m) == 0.0) throw InvalidArgument("velocity has nonzero mean");
            scale = std::max(scale, std::sqrt(g.k2(m)) * std::abs(x));
        }
        div = std::max(div, std::abs(dv[m]));
    }
    if (div > 1e-12 * scale) {
        std::ostringstream os;
        os << "velocity is not divergence-free (" << div / scale << " relative)";
        throw InvalidArgument(os.str());
    }
    SpectralState s;
    s.grid = std::move(grid);
    s.alpha = alpha;
    s.nu = nu;
    s.v = helmholtz_apply(g, u, alpha);
    s.u = std::move(u);
    s.f = std::move(f);
    return s;
}

SpectralField rhs_lans1(const SpectralState& s) {
    const SpectralGrid& g = *s.grid;
    SpectralField r = lans1_nonlinear(g, s.u, s.alpha, smoothed_forcing(s));
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t m = 0; m < g.spectral_size(); ++m) r[i][m] -= s.nu * g.k2(m) * s.u[i][m];
    return r;
}

SpectralField rhs_lans2(const SpectralState& s) {
    const SpectralGrid& g = *s.grid;
    const int d = g.dimension();
    const std::size_t np = g.physical_size();
    const double a2 = s.alpha * s.alpha;
    const PhysicalField uu = g.backward(s.u);
    const PhysicalField grad_u = gradient(g, s.u);
    const PhysicalField grad_v = gradient(g, helmholtz_apply(g, s.u, s.alpha));
    PhysicalField n = advect(g, uu, grad_v);
    if (a2 != 0.0) {
        SpectralField lap = s.u;
        for (auto& c : lap)
            for (std::size_t m = 0; m < c.size(); ++m) c[m] *= -g.k2(m);
        const PhysicalField lu = g.backward(lap);
        // (grad u)^T Delta u: component i is sum_j (d u_j / d x_i) Delta u_j
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const auto& gji = grad_u[j * d + i];
                for (std::size_t p = 0; p < np; ++p) n[i][p] -= a2 * gji[p] * lu[j][p];
            }
    }
    SpectralField r = leray_project(g, forward_truncated(g, n));
    const SpectralField pf = s.f.empty() ? zero_field(g) : leray_project(g, s.f);
    for (int i = 0; i < d; ++i)
        for (std::size_t m = 0; m < g.spectral_size(); ++m) {
            const double k2 = g.k2(m);
            r[i][m] = pf[i][m] - r[i][m] - s.nu * k2 * (1.0 + a2 * k2) * s.u[i][m];
        }
    return r;
}

double inner(const SpectralGrid& g, const SpectralField& a, const SpectralField& b) {
    require_field(g, a);
    require_field(g, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t m = 0; m < g.spectral_size(); ++m)
            sum += g.weight(m) * (a[i][m].real() * b[i][m].real() + a[i][m].imag() * b[i][m].imag());
    return g.volume() * sum;
}

double l2_norm_sq(const SpectralGrid& g, const SpectralField& u) { return inner(g, u, u); }

double gradient_norm_sq(const SpectralGrid& g, const SpectralField& u) {
    require_field(g, u);
    double sum = 0.0;
    for (const auto& c : u)
        for (std::size_t m = 0; m < g.spectral_size(); ++m) sum += g.weight(m) * g.k2(m) * std::norm(c[m]);
    return g.volume() * sum;
}

double laplacian_norm_sq(const SpectralGrid& g, const SpectralField& u) {
    require_field(g, u);
    double sum = 0.0;
    for (const auto& c : u)
        for (std::size_t m = 0; m < g.spectral_size(); ++m)
            sum += g.weight(m) * g.k2(m) * g.k2(m) * std::norm(c[m]);
    return g.volume() * sum;
}

double deformation_norm_sq(const SpectralGrid& g, const SpectralField& u) {
    require_field(g, u);
    const int d = g.dimension();
    double sum = 0.0;
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const auto& k = g.wavevector(m);
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) s += 0.5 * std::norm(k[j] * u[i][m] + k[i] * u[j][m]);
        sum += g.weight(m) * s;
    }
    return g.volume() * sum;
}

double max_speed(const SpectralGrid& g, const SpectralField& u) {
    const PhysicalField uu = g.backward(u);
    double m = 0.0;
    for (std::size_t p = 0; p < g.physical_size(); ++p) {
        double s = 0.0;
        for (const auto& c : uu) s += c[p] * c[p];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

SpectralState step_imex(const SpectralState& s, double dt, StepInfo* info) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
    const SpectralGrid& g = *s.grid;
    const int d = g.dimension();
    const std::size_t ns = g.spectral_size();
    if (info) {
        info->cfl = max_speed(g, s.u) * dt / g.spacing();
        info->cfl_warning = info->cfl > 1.0;
    }
    std::vector<double> decay(ns);
    for (std::size_t m = 0; m < ns; ++m) decay[m] = std::exp(-s.nu * g.k2(m) * dt);
    const SpectralField pf = smoothed_forcing(s);

    const SpectralField a = lans1_nonlinear(g, s.u, s.alpha, pf);
    SpectralField stage = s.u;
    for (int i = 0; i < d; ++i)
        for (std::size_t m = 0; m < ns; ++m) stage[i][m] = decay[m] * (s.u[i][m] + dt * a[i][m]);
    stage = leray_project(g, stage);
    const SpectralField b = lans1_nonlinear(g, stage, s.alpha, pf);

    SpectralState next = s;
    for (int i = 0; i < d; ++i)
        for (std::size_t m = 0; m < ns; ++m)
            next.u[i][m] = decay[m] * s.u[i][m] + 0.5 * dt * (decay[m] * a[i][m] + b[i][m]);
    next.u = leray_project(g, next.u);
    for (const auto& c : next.u)
        for (const auto& x : c)
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw SolverFailure("non-finite velocity after step");
    next.v = helmholtz_apply(g, next.u, s.alpha);
    next.t = s.t + dt;
    return next;
}

LedgerEntry ledger_entry(const SpectralState& s) {
    const SpectralGrid& g = *s.grid;
    const double a2 = s.alpha * s.alpha;
    const double grad = gradient_norm_sq(g, s.u);
    LedgerEntry e;
    e.t = s.t;
    e.e1 = l2_norm_sq(g, s.u) + a2 * grad;
    e.dissipation = s.nu * (grad + a2 * laplacian_norm_sq(g, s.u));
    e.work = s.f.empty() ? 0.0 : inner(g, s.f, s.u);
    return e;
}

double energy_balance_check(EnergyLedger& ledger) {
    const std::size_t n = ledger.size();
    if (n < 3) throw InvalidArgument("energy ledger needs at least three entries");
    for (std::size_t k = 1; k < n; ++k)
        if (!(ledger[k].t > ledger[k - 1].t)) throw InvalidArgument("ledger times must increase");
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t c = std::clamp<std::size_t>(k, 1, n - 2);
        const double t0 = ledger[c - 1].t, t1 = ledger[c].t, t2 = ledger[c + 1].t, t = ledger[k].t;
        // Derivative at t of the quadratic through the three entries.
        const double w0 = (2.0 * t - t1 - t2) / ((t0 - t1) * (t0 - t2));
        const double w1 = (2.0 * t - t0 - t2) / ((t1 - t0) * (t1 - t2));
        const double w2 = (2.0 * t - t0 - t1) / ((t2 - t0) * (t2 - t1));
        const double de = w0 * ledger[c - 1].e1 + w1 * ledger[c].e1 + w2 * ledger[c + 1].e1;
        ledger[k].residual = std::abs(de - 2.0 * (ledger[k].work - ledger[k].dissipation));
        worst = std::max(worst, ledger[k].residual);
    }
    return worst;
}

TorusRun integrate(const SpectralState& initial, double dt, double t_end) {
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw InvalidArgument("need dt > 0 and t_end >= 0");
    const double steps = std::round(t_end / dt);
    if (std::abs(steps * dt - t_end) > 1e-9 * std::max(t_end, dt)) {
        std::ostringstream os;
        os << "t_end " << t_end << " is not a whole number of steps of " << dt;
        throw InvalidArgument(os.str());
    }
    TorusRun run{initial, {ledger_entry(initial)}, 0.0, 0};
    for (std::size_t k = 0; k < static_cast<std::size_t>(steps); ++k) {
        StepInfo info;
        run.state = step_imex(run.state, dt, &info);
        // Pin the clock to the step count so ledger times stay exact multiples.
        run.state.t = initial.t + double(k + 1) * dt;
        run.max_cfl = std::max(run.max_cfl, info.cfl);
        if (info.cfl_warning) ++run.cfl_warnings;
        run.ledger.push_back(ledger_entry(run.state));
    }
    return run;
}

AlphaLimitTable alpha_limit_study(const SpectralGridPtr& grid, const SpectralField& u0, double nu,
                                  const SpectralField& f, double t_end, const std::vector<double>& alphas, double dt,
                                  std::size_t jobs) {
    if (alphas.empty()) throw InvalidArgument("alpha list is empty");
    const SpectralGrid& g = *grid;
    // Slot 0 is the alpha = 0 reference; the runs are independent.
    std::vector<double> all{0.0};
    all.insert(all.end(), alphas.begin(), alphas.end());
    std::vector<SpectralField> finals(all.size());
    std::vector<std::exception_ptr> errors(all.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k; (k = next++) < all.size();) {
            try {
                finals[k] = integrate(make_spectral_state(grid, u0, all[k], nu, f), dt, t_end).state.u;
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(std::max<std::size_t>(jobs, 1), all.size()); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    const SpectralField& reference = finals[0];
    AlphaLimitTable table;
    table.alphas = alphas;
    std::vector<double> lx, ly;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        const double alpha = alphas[a];
        SpectralField diff = std::move(finals[a + 1]);
        for (std::size_t i = 0; i < diff.size(); ++i)
            for (std::size_t m = 0; m < g.spectral_size(); ++m) diff[i][m] -= reference[i][m];
        const double e = std::sqrt(l2_norm_sq(g, diff));
        table.errors.push_back(e);
        if (alpha > 0.0 && e > 0.0) {
            lx.push_back(std::log(alpha));
            ly.push_back(std::log(e));
        }
    }
    if (lx.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t k = 0; k < lx.size(); ++k) {
            mx += lx[k];
            my += ly[k];
        }
        mx /= double(lx.size());
        my /= double(lx.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < lx.size(); ++k) {
            sxy += (lx[k] - mx) * (ly[k] - my);
            sxx += (lx[k] - mx) * (lx[k] - mx);
        }
        table.slope = sxy / sxx;
    }
    return table;
}

} // namespace lans

namespace lans {

double form_equivalence_gap(const SpectralState& s) {
    const auto r1 = rhs_lans1(s);
    const auto r2 = rhs_lans2(s);
    const SpectralGrid& g = *s.grid;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < r1.size(); ++i)
        for (std::size_t m = 0; m < g.spectral_size(); ++m) {
            num = std::max(num, std::abs((1.0 + s.alpha * s.alpha * g.k2(m)) * r1[i][m] - r2[i][m]));
            den = std::max(den, std::abs(r2[i][m]));
        }
    return den > 0.0 ? num / den : num;
}

} // namespace lans
