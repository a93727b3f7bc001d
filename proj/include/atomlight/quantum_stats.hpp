#pragma once

#include "atomlight/propagator.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace atomlight {

// The one non-vacuum input: a squeezed coherent state of the probe mode.
struct InputState {
    double r = 0.0;
    double theta_sq = 0.0;
    cplx gamma = 0.0; // |gamma|^2 = probe_flux * T
};

// Quadrature covariance of a squeezed mode, vacuum = identity.
// R(theta/2) diag(e^-2r, e^2r) R(theta/2)^T.
Eigen::Matrix2d input_covariance(double r, double theta_sq);

// How strongly one input mode reaches the two detected output modes.
struct ModeOverlap {
    cplx alpha_psi = 0.0;
    cplx alpha_e = 0.0;
};

// Mode-matched detection at one evaluation time. `columns` has one entry per
// independently squeezed input mode; mean_* are the LO overlaps of the mean fields.
struct OutputModes {
    double t = 0.0; // s
    std::vector<ModeOverlap> columns;
    cplx mean_psi = 0.0;
    cplx mean_e = 0.0;
    double lo_phase_atom = 0.0;
    double lo_phase_light = 0.0;

    // Largest |alpha_psi|^2 + |alpha_e|^2 over the columns.
    double max_column_weight() const;
};

// Projects the recorded atomic windows and detector record onto the atomic
// plane-wave LO and the matched optical temporal LO, one OutputModes per
// evaluation sample. Light recorded before t = 0 is vacuum.
std::vector<OutputModes> output_overlaps(const Trajectory& trajectory, const Scenario& scenario);

// Quadratures ordered (X+, X-, Y+, Y-): X for the atom beam, Y for the transmitted light.
struct GaussianSummary {
    double t = 0.0;
    Eigen::Matrix4d sigma = Eigen::Matrix4d::Identity();
    std::array<double, 4> means{};

    double v_x_plus = 1.0, v_x_minus = 1.0, v_y_plus = 1.0, v_y_minus = 1.0;
    double cov_plus = 0.0, cov_minus = 0.0; // Cov(X+,Y+), Cov(X-,Y-)

    double vinf_x_plus = 1.0, vinf_x_minus = 1.0, vinf_y_plus = 1.0, vinf_y_minus = 1.0;
    double product_x = 1.0;     // Vinf(X+) Vinf(X-)
    double product_y = 1.0;     // Vinf(Y+) Vinf(Y-)
    double uncertainty_x = 1.0; // V(X+) V(X-)
    double uncertainty_y = 1.0; // V(Y+) V(Y-)
    bool entangled = false;
};

// sigma_out = vacuum * I4 + sum_k M_k (sigma_in - I2) M_k^T.
// `vacuum` exists only as a mutation hook for the self-check; leave it at 1.
GaussianSummary assemble_covariance(const OutputModes& modes, const Eigen::Matrix2d& sigma_in, double vacuum = 1.0);

// Inferred variances V - Cov^2/V_other in both directions. A vanishing
// conditioning variance leaves V_inf = V.
GaussianSummary epr_inferred(GaussianSummary summary);

// Symplectic eigenvalues (two, ascending) for the (X+, X-, Y+, Y-) ordering.
Eigen::Vector2d symplectic_eigenvalues(const Eigen::Matrix4d& sigma);

// Per column: atoms in the beam + absorbed + photons out + light still on the grid.
// Equals the injected input-mode norm when the dynamics is passive.
std::vector<double> commutator_norm(const Trajectory& trajectory, const Scenario& scenario);

// Full pipeline: overlaps, covariance and inference at every evaluation sample.
std::vector<GaussianSummary> summarize(const Trajectory& trajectory, const Scenario& scenario);

} // namespace atomlight
