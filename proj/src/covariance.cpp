#include "lans/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "lans/error.hpp"
#include "lans/steady_profiles.hpp"

namespace lans {

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Mat3 transpose(const Mat3& a) {
    Mat3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
    return t;
}

double determinant(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

double trace(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

double max_abs(const Mat3& a) {
    double m = 0.0;
    for (const auto& row : a)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

UnidirectionalFlow poiseuille_flow(const GridPtr& grid, const PhysicalParams& params) {
    return {poiseuille_velocity(grid, params), poiseuille_shear(grid, params), true};
}

UnidirectionalFlow flow_from_velocity(const GridFunction1D& velocity, bool steady) {
    const auto& g = *velocity.grid;
    const std::size_t n = g.size();
    if (n < 3) throw InvalidArgument("n too small");
    const double dx = g.spacing();
    GridFunction1D shear(velocity.grid, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) shear[i] = (velocity[i + 1] - velocity[i - 1]) / (2.0 * dx);
    shear[0] = (-3.0 * velocity[0] + 4.0 * velocity[1] - velocity[2]) / (2.0 * dx);
    shear[n - 1] = (3.0 * velocity[n - 1] - 4.0 * velocity[n - 2] + velocity[n - 3]) / (2.0 * dx);
    if (g.geometry() == Geometry::Pipe) shear[0] = 0.0; // even about the axis
    return {velocity, shear, steady};
}

Mat3 velocity_gradient(Geometry geometry, double shear, double theta) {
    Mat3 g{};
    if (geometry == Geometry::Channel) {
        g[0][2] = shear;
    } else {
        g[2][0] = shear * std::cos(theta);
        g[2][1] = shear * std::sin(theta);
    }
    return g;
}

namespace {

void check_inputs(const RhoProfile& rho, const UnidirectionalFlow& flow) {
    if (!flow.steady) throw InvalidArgument("closed-form covariance needs a steady velocity");
    require_same_grid(rho.grid(), flow.velocity.grid);
    require_same_grid(rho.grid(), flow.shear.grid);
}

Mat3 covariance_unchecked(double t, std::size_t node, const RhoProfile& rho, const UnidirectionalFlow& flow,
                          Geometry geom, double theta) {
    Mat3 d = velocity_gradient(geom, t * flow.shear[node], theta);
    for (int i = 0; i < 3; ++i) d[i][i] += 1.0;
    Mat3 f = mat_mul(d, transpose(d));
    const double r = rho.node(node);
    for (auto& row : f)
        for (double& v : row) v *= r;
    // Exact symmetry regardless of rounding in the product.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j) f[i][j] = f[j][i];
    return f;
}

} // namespace

Mat3 covariance_at(double t, std::size_t node, const RhoProfile& rho, const UnidirectionalFlow& flow,
                   const PhysicalParams& params, double theta) {
    params.validate();
    check_inputs(rho, flow);
    if (node >= rho.size()) throw InvalidArgument("node out of range");
    return covariance_unchecked(t, node, rho, flow, rho.grid()->geometry(), theta);
}

EigenTriple eigenvalues_closed_form(double rho, double shear_integral) {
    if (shear_integral == 0.0) return {rho, rho, rho};
    const double s2 = shear_integral * shear_integral;
    const double top = 0.5 * rho * (2.0 + s2 + std::abs(shear_integral) * std::sqrt(s2 + 4.0));
    // The smaller root via the product rho^2 avoids cancellation.
    const double bottom = top != 0.0 ? rho * rho / top : 0.0;
    std::array<double, 3> v{top, rho, bottom};
    std::sort(v.begin(), v.end(), std::greater<>());
    return {v[0], v[1], v[2]};
}

EigenTriple eigenvalues_numeric(const Mat3& f) {
    Mat3 a = f;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j)
            if (a[i][j] != a[j][i]) throw InvalidArgument("matrix is not symmetric");
    for (int sweep = 0; sweep < 50; ++sweep) {
        const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = a[q][p] = 0.0;
            }
        }
    }
    std::array<double, 3> v{a[0][0], a[1][1], a[2][2]};
    std::sort(v.begin(), v.end(), std::greater<>());
    return {v[0], v[1], v[2]};
}

std::vector<SupNormSample> sup_norm_trajectory(const std::vector<double>& times, const RhoProfile& rho,
                                               const UnidirectionalFlow& flow, const PhysicalParams& params) {
    params.validate();
    check_inputs(rho, flow);
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw InvalidArgument("times must be increasing");
    }
    const auto& g = *rho.grid();
    const std::size_t n = g.size();
    std::vector<SupNormSample> out;
    out.reserve(times.size());
    std::vector<double> lam(n);
    for (double t : times) {
        for (std::size_t i = 0; i < n; ++i) lam[i] = eigenvalues_closed_form(rho.node(i), t * flow.shear[i]).l1;
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i) {
            const double tol = 1e-13 * std::abs(lam[best]);
            if (lam[i] > lam[best] + tol || (lam[i] >= lam[best] - tol && g.node(i) > g.node(best))) best = i;
        }
        SupNormSample s{t, lam[best], g.node(best)};
        if (best > 0 && best + 1 < n) {
            const double fm = lam[best - 1], f0 = lam[best], fp = lam[best + 1];
            const double curv = fm - 2.0 * f0 + fp;
            if (curv < 0.0) {
                const double shift = 0.5 * (fm - fp) / curv;
                s.argmax = g.node(best) + shift * g.spacing();
                s.max = f0 - 0.125 * (fm - fp) * (fm - fp) / curv;
            }
        }
        out.push_back(s);
    }
    return out;
}

CovarianceTrajectory closed_form_trajectory(const std::vector<double>& times, const RhoProfile& rho,
                                            const UnidirectionalFlow& flow, const PhysicalParams& params,
                                            double theta) {
    params.validate();
    check_inputs(rho, flow);
    CovarianceTrajectory tr;
    tr.times = times;
    const Geometry geom = rho.grid()->geometry();
    for (double t : times) {
        std::vector<Mat3> row(rho.size());
        for (std::size_t i = 0; i < rho.size(); ++i) row[i] = covariance_unchecked(t, i, rho, flow, geom, theta);
        tr.values.push_back(std::move(row));
    }
    return tr;
}

Mat3 f_evolution_residual(const Mat3& grad_u, const CovarianceTrajectory& traj, std::size_t k,
                          std::size_t node) {
    if (traj.values.size() != traj.times.size()) throw InvalidArgument("trajectory size mismatch");
    if (k == 0 || k + 1 >= traj.times.size()) throw InvalidArgument("insufficient stencil");
    if (node >= traj.values[k].size()) throw InvalidArgument("node out of range");
    const double hm = traj.times[k] - traj.times[k - 1];
    const double hp = traj.times[k + 1] - traj.times[k];
    // Three-point derivative on a possibly uneven stencil.
    const double wm = -hp / (hm * (hm + hp));
    const double w0 = (hp - hm) / (hm * hp);
    const double wp = hm / (hp * (hm + hp));
    const Mat3& f = traj.values[k][node];
    const Mat3 gf = mat_mul(grad_u, f);
    Mat3 r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double dfdt = wm * traj.values[k - 1][node][i][j] + w0 * f[i][j] + wp * traj.values[k + 1][node][i][j];
            r[i][j] = dfdt - gf[i][j] - gf[j][i];
        }
    }
    return r;
}

Mat3 f_evolution_residual(const UnidirectionalFlow& flow, Geometry geometry, const CovarianceTrajectory& traj,
                          std::size_t k, std::size_t node, double theta) {
    if (node >= flow.shear.size()) throw InvalidArgument("node out of range");
    return f_evolution_residual(velocity_gradient(geometry, flow.shear[node], theta), traj, k, node);
}

double growth_exponent(const std::vector<SupNormSample>& samples) {
    if (samples.size() < 2) throw InvalidArgument("need at least two samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : samples) {
        if (!(s.t > 0.0 && s.max > 0.0)) throw InvalidArgument("growth fit needs positive times and maxima");
        const double lx = std::log(s.t), ly = std::log(s.max);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double n = double(samples.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DecayFit boundary_decay_fit(const RhoProfile& rho, double d_lo, double d_hi, DecayModel model) {
    if (!(d_lo > 0.0 && d_hi > d_lo && d_hi <= 0.1)) throw InvalidArgument("fit window must lie in (0, 0.1]");
    const auto dist = rho.grid()->wall_distance();
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    std::size_t count = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double d = dist[i];
        if (d < d_lo || d > d_hi) continue;
        const double phi = model == DecayModel::LogDistance ? d * std::sqrt(std::abs(std::log(d))) : d;
        pts.emplace_back(phi, rho.node(i));
        sxy += phi * rho.node(i);
        sxx += phi * phi;
        syy += rho.node(i) * rho.node(i);
        ++count;
    }
    if (count < 10) throw InvalidArgument("too few samples");
    DecayFit fit;
    fit.model = model;
    fit.d_lo = d_lo;
    fit.d_hi = d_hi;
    fit.samples = count;
    fit.coefficient = sxy / sxx;
    double ssr = 0.0;
    for (const auto& [phi, y] : pts) ssr += (y - fit.coefficient * phi) * (y - fit.coefficient * phi);
    fit.goodness = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 0.0;
    return fit;
}

GrowthBoundReport f_growth_bound_check(const CovarianceTrajectory& traj, const UnidirectionalFlow& flow) {
    if (traj.times.empty() || traj.values.size() != traj.times.size()) {
        throw InvalidArgument("trajectory size mismatch");
    }
    if (traj.times.front() != 0.0) throw InvalidArgument("trajectory must start at t = 0");
    double w = 0.0;
    for (std::size_t i = 0; i < flow.velocity.size(); ++i) {
        w = std::max(w, std::abs(flow.velocity[i]));
    }
    double ws = 0.0;
    for (std::size_t i = 0; i < flow.shear.size(); ++i) ws = std::max(ws, std::abs(flow.shear[i]));
    w += ws;

    const auto norm_at = [&](std::size_t k) {
        double m = 0.0;
        for (const auto& f : traj.values[k]) m = std::max(m, eigenvalues_numeric(f).l1);
        return m;
    };
    GrowthBoundReport rep;
    const double f0 = norm_at(0);
    rep.constant = f0 > 0.0 ? 1.0 : 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        const double nk = norm_at(k);
        const double bk = rep.constant * f0 * std::exp(w * t);
        rep.times.push_back(t);
        rep.norm.push_back(nk);
        rep.bound.push_back(bk);
        if (rep.holds && nk > bk * (1.0 + 1e-12)) {
            rep.holds = false;
            rep.first_violation = k;
        }
    }
    return rep;
}

} // namespace lans
