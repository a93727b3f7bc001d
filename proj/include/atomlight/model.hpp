#pragma once

#include "atomlight/grid.hpp"

#include <complex>
#include <vector>

namespace atomlight {

// Physical constants and experiment parameters, all SI.
struct PhysicalParams {
    double m = 1.4e-25;           // kg
    double g13 = 2.9e5;           // rad s^-1 m^1/2
    double delta = 1e11;          // one-photon detuning, rad s^-1
    double omega23 = 0.75e8;      // control Rabi frequency, rad s^-1
    double k0 = 8.05537e6;        // control wavenumber, m^-1
    double kp = -8.05537e6;       // probe wavenumber, m^-1; |k0 - kp| = 2|k0|
    double omega_trap = 5.0;      // rad s^-1
    double n_atoms = 1e6;
    double probe_flux = 2.9e6;    // photons s^-1
    double r = 2.0;
    double theta_sq = 0.0;        // rad, 0 = amplitude squeezed
    double delta2 = 0.0;          // two-photon detuning, rad s^-1; resonance lies near recoil_rate()
    double omega0 = 2.41494e15;   // optical carrier, rad s^-1

    // Momentum kick per outcoupled atom, m^-1.
    double kick() const;
    // Mean outcoupled atom speed hbar*kick/m, m/s.
    double atom_speed() const;
    // hbar*kick^2/(2m), rad/s.
    double recoil_rate() const;
    // Light shift of the untrapped state from the control beam, |omega23|^2/delta.
    double control_light_shift() const;
    // Probe amplitude at the boundary, sqrt(flux/c), m^-1/2.
    double probe_amplitude() const;
    // Harmonic oscillator length sqrt(hbar/(m omega_trap)), m.
    double trap_length() const;
};

struct ValidityOptions {
    // |delta| must exceed every other frequency in the model by this factor.
    double adiabatic_factor = 100.0;
};

// Throws ValidationError naming the offending field.
void validate(const PhysicalParams& params, const ValidityOptions& options = {});

// Condensate mean field on a grid, SI envelope units m^-1/2.
struct CondensateProfile {
    std::vector<std::complex<double>> values;
    Grid1D grid;

    // sum |phi|^2 dx
    double norm() const;
    // sum phi dx, m^1/2
    std::complex<double> integral() const;
};

// (d13/hbar) sqrt(hbar omega_k / (2 eps0)).
double coupling_coefficient(double d13, double omega_k);

// Inverse of coupling_coefficient in d13.
double dipole_for_coupling(double g13, double omega_k);

CondensateProfile ground_state(const PhysicalParams& params, const Grid1D& grid);

// |g13 omega23 / delta * integral(phi1)|. The value is returned as the raw SI
// number of this product; see QuarterPeriodConvention for what it is compared to.
double effective_rabi(const PhysicalParams& params, const CondensateProfile& profile);

enum class QuarterPeriodConvention {
    // Omega_eff = sqrt(m w/hbar) * hbar |k0 - kp| pi / (2m): crossing length set by the trap length.
    TrapLength,
    // Omega_eff = sqrt(v c) pi/2: quarter turn of the steady-state co-propagating coupler.
    FluxMatched,
};

// Target value of effective_rabi for a quarter-period transfer.
double quarter_period_target(const PhysicalParams& params,
                             QuarterPeriodConvention convention = QuarterPeriodConvention::TrapLength);

// The omega23 at which effective_rabi hits quarter_period_target.
double optimal_rabi23(const PhysicalParams& params, const CondensateProfile& profile,
                      QuarterPeriodConvention convention = QuarterPeriodConvention::TrapLength);

struct FeasibilityReport {
    double n_photons = 0.0;
    bool feasible = true;
};

// Photons in a squeezed vacuum over one drain time, sinh^2 r, against n_atoms/margin.
FeasibilityReport squeezed_flux_feasibility(double r, double n_atoms, double margin = 100.0);

} // namespace atomlight
