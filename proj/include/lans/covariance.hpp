#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lans/grid.hpp"
#include "lans/params.hpp"
#include "lans/rho_profile.hpp"

namespace lans {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mat_mul(const Mat3& a, const Mat3& b);
Mat3 transpose(const Mat3& a);
double determinant(const Mat3& a);
double trace(const Mat3& a);

/// Streamwise velocity of a channel or pipe flow and its wall-normal
/// derivative. Only steady profiles are admitted by the closed-form covariance.
struct UnidirectionalFlow {
    GridFunction1D velocity;
    GridFunction1D shear;
    bool steady = true;
};

/// Poiseuille flow with the exact shear -2 beta x.
UnidirectionalFlow poiseuille_flow(const GridPtr& grid, const PhysicalParams& params);
/// Shear from second-order differences (one-sided at the ends).
UnidirectionalFlow flow_from_velocity(const GridFunction1D& velocity, bool steady = true);

/// Velocity gradient G_ij = d u_i / d x_j. Channel: G_13 = u'. Pipe at angle
/// theta: G_31 = u' cos(theta), G_32 = u' sin(theta).
Mat3 velocity_gradient(Geometry geometry, double shear, double theta = 0.0);

/// rho (I + t G)(I + t G)^T at one node.
Mat3 covariance_at(double t, std::size_t node, const RhoProfile& rho, const UnidirectionalFlow& flow,
                   const PhysicalParams& params, double theta = 0.0);

/// Descending eigenvalues.
struct EigenTriple {
    double l1 = 0.0, l2 = 0.0, l3 = 0.0;
    double product() const { return l1 * l2 * l3; }
};

EigenTriple eigenvalues_closed_form(double rho, double shear_integral);

/// Cyclic Jacobi rotations on a symmetric matrix; the input must be symmetric.
EigenTriple eigenvalues_numeric(const Mat3& f);

struct SupNormSample {
    double t = 0.0;
    double max = 0.0;     // largest eigenvalue over the grid (parabolic vertex)
    double argmax = 0.0;  // sub-grid location; the positive side wins ties
};

std::vector<SupNormSample> sup_norm_trajectory(const std::vector<double>& times, const RhoProfile& rho,
                                               const UnidirectionalFlow& flow, const PhysicalParams& params);

/// Least-squares slope of log max against log t over the samples (t > 0).
double growth_exponent(const std::vector<SupNormSample>& samples);

/// F sampled at times[k] on every node.
struct CovarianceTrajectory {
    std::vector<double> times;
    std::vector<std::vector<Mat3>> values; // [time][node]
};

CovarianceTrajectory closed_form_trajectory(const std::vector<double>& times, const RhoProfile& rho,
                                            const UnidirectionalFlow& flow, const PhysicalParams& params,
                                            double theta = 0.0);

/// dF/dt - G F - (G F)^T at (times[k], node) with a three-point difference in
/// t. The streamwise transport term vanishes for unidirectional flows.
Mat3 f_evolution_residual(const Mat3& grad_u, const CovarianceTrajectory& traj, std::size_t k,
                          std::size_t node);
Mat3 f_evolution_residual(const UnidirectionalFlow& flow, Geometry geometry,
                          const CovarianceTrajectory& traj, std::size_t k, std::size_t node,
                          double theta = 0.0);

double max_abs(const Mat3& a);

enum class DecayModel { LogDistance, Linear };

/// rho ~ C phi(d) with phi = d sqrt|log d| or phi = d, d the normalized wall
/// distance. Goodness is the uncentered coefficient of determination of the
/// fit through the origin.
struct DecayFit {
    DecayModel model = DecayModel::LogDistance;
    double coefficient = 0.0;
    double d_lo = 1e-3;
    double d_hi = 1e-2;
    double goodness = 0.0;
    std::size_t samples = 0;
};

DecayFit boundary_decay_fit(const RhoProfile& rho, double d_lo = 1e-3, double d_hi = 1e-2,
                            DecayModel model = DecayModel::LogDistance);

/// max over nodes of the largest eigenvalue of F(t) against
/// C max|F0| exp(int_0^t (max|u| + max|u'|) ds), C fixed at t = 0.
struct GrowthBoundReport {
    double constant = 0.0;
    std::vector<double> times;
    std::vector<double> norm;
    std::vector<double> bound;
    bool holds = true;
    std::size_t first_violation = 0; // index into times; meaningful when !holds
};

GrowthBoundReport f_growth_bound_check(const CovarianceTrajectory& traj, const UnidirectionalFlow& flow);

} // namespace lans
