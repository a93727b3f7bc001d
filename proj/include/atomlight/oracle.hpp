#pragma once

#include "atomlight/quantum_stats.hpp"

namespace atomlight {

// Squeezed light on one port of a lossless beam splitter, vacuum on the other.
// eta is the share sent to the atomic port.
struct BeamSplitterCase {
    double eta = 0.5;
    double r = 0.0;
    double theta_sq = 0.0;
};

// Closed-form output statistics. Both output amplitudes are taken real and
// positive (sqrt(eta), sqrt(1-eta)), which fixes the sign of the cross covariances.
GaussianSummary beamsplitter_summary(const BeamSplitterCase& bs);

// sin^2(omega_eff * tau): the transferred population of a resonant two-mode exchange.
double two_mode_rabi(double omega_eff, double tau);

// Same quantity from RK4 integration of i a' = -W b, i b' = -W a, a(0) = 1.
double two_mode_rabi_ode(double omega_eff, double tau, std::size_t steps = 20000);

} // namespace atomlight
