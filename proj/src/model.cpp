#include "atomlight/model.hpp"

#include "atomlight/error.hpp"
#include "atomlight/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace atomlight {

double PhysicalParams::kick() const { return std::abs(k0 - kp); }

double PhysicalParams::atom_speed() const { return units::hbar * kick() / m; }

double PhysicalParams::recoil_rate() const { return units::hbar * kick() * kick() / (2.0 * m); }

double PhysicalParams::control_light_shift() const { return omega23 * omega23 / delta; }

double PhysicalParams::probe_amplitude() const { return std::sqrt(probe_flux / units::c); }

double PhysicalParams::trap_length() const { return std::sqrt(units::hbar / (m * omega_trap)); }

namespace {

void require(bool ok, const char* field, const std::string& why) {
    if (!ok) throw ValidationError(std::string("physics.") + field + ": " + why);
}

} // namespace

void validate(const PhysicalParams& p, const ValidityOptions& options) {
    require(p.m > 0.0, "mass", "must be positive");
    require(p.delta != 0.0 && std::isfinite(p.delta), "delta", "must be finite and nonzero");
    require(p.n_atoms >= 0.0, "n_atoms", "must be non-negative");
    require(p.probe_flux >= 0.0, "probe_flux", "must be non-negative");
    require(p.r >= 0.0, "r", "must be non-negative");
    require(p.omega_trap > 0.0, "omega_trap", "must be positive");
    require(p.k0 != 0.0, "k0", "must be nonzero");
    require(std::abs(p.kick() - 2.0 * std::abs(p.k0)) <= 1e-9 * std::abs(p.k0), "kp",
            "geometry requires |k0 - kp| = 2|k0|");
    require(options.adiabatic_factor > 0.0, "adiabatic_factor", "must be positive");

    // Every rate that must stay small against the one-photon detuning.
    const double probe_shift = p.g13 * p.g13 / std::abs(p.delta) * p.probe_flux / units::c;
    const double rates[] = {std::abs(p.omega23), std::abs(p.control_light_shift()), p.recoil_rate(),
                            p.omega_trap, probe_shift};
    const double largest = *std::max_element(std::begin(rates), std::end(rates));
    require(std::abs(p.delta) >= options.adiabatic_factor * largest, "delta",
            "adiabatic elimination needs |delta| >= " + std::to_string(options.adiabatic_factor) +
                " x " + std::to_string(largest) + " rad/s");
}

double CondensateProfile::norm() const {
    double sum = 0.0;
    for (const auto& v : values) sum += std::norm(v);
    return sum * grid.dx();
}

std::complex<double> CondensateProfile::integral() const {
    std::complex<double> sum = 0.0;
    for (const auto& v : values) sum += v;
    return sum * grid.dx();
}

double coupling_coefficient(double d13, double omega_k) {
    if (!(omega_k > 0.0)) throw ValidationError("coupling_coefficient: omega_k must be positive");
    if (d13 < 0.0) throw ValidationError("coupling_coefficient: d13 must be non-negative");
    return d13 / units::hbar * std::sqrt(units::hbar * omega_k / (2.0 * units::epsilon0));
}

double dipole_for_coupling(double g13, double omega_k) {
    if (!(omega_k > 0.0)) throw ValidationError("dipole_for_coupling: omega_k must be positive");
    return g13 * units::hbar / std::sqrt(units::hbar * omega_k / (2.0 * units::epsilon0));
}

CondensateProfile ground_state(const PhysicalParams& params, const Grid1D& grid) {
    const double a = params.trap_length();
    // Density tail below 1e-12 of peak at both edges.
    const double reach = a * std::sqrt(12.0 * std::log(10.0));
    if (grid.x_min > -reach || grid.x_max - grid.dx() < reach)
        throw ValidationError("grid.x_min: domain must extend beyond +-" + std::to_string(reach) +
                              " m to hold the condensate tail");

    CondensateProfile profile{std::vector<std::complex<double>>(grid.n_points), grid};
    if (params.n_atoms == 0.0) return profile;

    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.position(i) / a;
        profile.values[i] = std::exp(-0.5 * x * x);
    }
    const double scale = std::sqrt(params.n_atoms / profile.norm());
    for (auto& v : profile.values) v *= scale;
    return profile;
}

double effective_rabi(const PhysicalParams& params, const CondensateProfile& profile) {
    return std::abs(params.g13 * params.omega23 / params.delta * profile.integral());
}

double quarter_period_target(const PhysicalParams& params, QuarterPeriodConvention convention) {
    const double v = params.atom_speed();
    switch (convention) {
    case QuarterPeriodConvention::TrapLength:
        return std::sqrt(params.m * params.omega_trap / units::hbar) * units::hbar * params.kick() *
               units::pi / (2.0 * params.m);
    case QuarterPeriodConvention::FluxMatched:
        return std::sqrt(v * units::c) * units::pi / 2.0;
    }
    return 0.0;
}

double optimal_rabi23(const PhysicalParams& params, const CondensateProfile& profile,
                      QuarterPeriodConvention convention) {
    const double overlap = std::abs(profile.integral());
    if (!(profile.norm() > 0.0) || overlap == 0.0)
        throw ValidationError("optimal_rabi23: condensate profile has zero norm");
    return quarter_period_target(params, convention) * std::abs(params.delta) /
           (std::abs(params.g13) * overlap);
}

FeasibilityReport squeezed_flux_feasibility(double r, double n_atoms, double margin) {
    if (r < 0.0) throw ValidationError("squeezed_flux_feasibility: r must be non-negative");
    const double s = std::sinh(r);
    return {s * s, s * s < n_atoms / margin};
}

} // namespace atomlight
