#pragma once

#include "atomlight/fft.hpp"
#include "atomlight/grid.hpp"
#include "atomlight/model.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace atomlight {

using cplx = std::complex<double>;
using Field = std::vector<cplx>;

// Which terms of the adiabatically eliminated dynamics are switched on.
struct PropagatorOptions {
    bool control_light_shift = true;     // -|omega23|^2/delta on the untrapped atoms
    bool probe_light_shift = true;       // (g13^2/delta)|phi1|^2 on the light, and its partner on phi1
    bool fluctuation_backaction = false; // add sinh^2 r times the tracked columns to <E+E>, <E+psi2>
    bool evolve_condensate = true;       // false freezes phi1 (test reductions)
    double absorber_fraction = 0.05;     // share of the domain covered by each absorbing ramp
    double absorber_rate = 1e4;          // peak imaginary potential, s^-1
};

// Atomic local oscillator window plus the optical detector plane.
struct DetectionSetup {
    double x1 = 1e-4;              // m
    double x2 = 3e-4;              // m
    double x_det = 1e-4;           // m
    double lo_wavenumber = 0.0;    // lab-frame atomic LO wavenumber, m^-1; 0 selects the mean kick
    double lo_phase_atom = 1.5707963267948966;
    double lo_phase_light = 0.0;
    bool optimize_lo_phase = false; // re-align both LOs to the mean fields at every sample
    double eval_interval = 1e-3;    // s
};

// One piece of a piecewise-constant input temporal mode. `amplitude` is in
// s^-1/2 so that the mode norm is sum |amplitude|^2 (t_end - t_start).
struct ModeSegment {
    double t_start = 0.0; // s
    double t_end = 0.0;   // s
    cplx amplitude = 0.0;
};

struct InputMode {
    std::vector<ModeSegment> segments;

    // amplitude at time t (segments are half-open [t_start, t_end))
    cplx at(double t) const;
    double norm() const;
    double first_start() const;
};

// Contiguous flat-top modes of equal length tiling [start, start + length).
std::vector<InputMode> make_input_bins(double start, double length, std::size_t count);

// A fully resolved run description, SI throughout.
struct Scenario {
    PhysicalParams params;
    Grid1D grid;
    double duration = 0.04; // s
    DetectionSetup detection;
    std::vector<InputMode> input_modes;
    PropagatorOptions options;
    ValidityOptions validity;
    std::size_t snapshot_count = 1; // snapshots after the initial one, evenly spaced, last = final state

    std::size_t step_count() const;
    void validate() const;
};

// Probe detuning that puts the Raman transition on resonance, counting only the
// shifts switched on in `options`.
double resonance_estimate(const PhysicalParams& params, const PropagatorOptions& options = {});

// Quanta entering and leaving one field group: photons in at x_min, photons
// out at x_max, atoms taken by the absorbing ramps.
struct BoundaryLedger {
    double in = 0.0;
    double out = 0.0;
    double absorbed = 0.0;
};

// Fields at one instant in internal units (um^-1/2, time in ms).
// f_psi/f_e hold one fluctuation column per input mode.
struct FieldState {
    double t = 0.0; // ms
    Field phi1;
    Field psi2_mean;
    Field e_mean;
    std::vector<Field> f_psi;
    std::vector<Field> f_e;
    BoundaryLedger mean_ledger;
    std::vector<BoundaryLedger> column_ledgers;
};

// Optical field at the detector plane, averaged over the two midpoint stages of step n.
struct DetectorSample {
    double t = 0.0; // ms, step midpoint
    cplx e_mean;
    std::vector<cplx> f_e;
};

// Atomic fields restricted to the LO window [x1, x2] at an evaluation time.
struct WindowSample {
    double t = 0.0; // ms
    std::vector<cplx> psi_mean;
    std::vector<std::vector<cplx>> f_psi;
};

struct Trajectory {
    std::vector<FieldState> snapshots;
    std::vector<DetectorSample> detector;
    std::vector<WindowSample> windows;
    std::size_t window_begin = 0; // grid index of the first window point
    std::size_t detector_index = 0;
    FieldState final_state;
    bool failed = false;
    std::size_t failed_step = 0;
    std::string failure;
};

// Coefficients of the quasi-static light equation in internal units.
struct LightCoefficients {
    double dx = 0.0;
    double c = 0.0;
    double coupling = 0.0;   // g13 omega23 / delta
    double refractive = 0.0; // g13^2 / delta, zero when the probe shift is off
};

// Solves c dE/dx = i[refractive |phi1|^2] E + i coupling conj(phi1) psi from
// E(x_min) = boundary, left to right with the second-order implicit midpoint rule.
void cross_propagate_light(std::span<const cplx> source, std::span<const cplx> phi1, cplx boundary,
                           const LightCoefficients& k, std::span<cplx> out);
Field cross_propagate_light(std::span<const cplx> source, std::span<const cplx> phi1, cplx boundary,
                            const LightCoefficients& k);

// The light recursion for a fixed condensate, reusable across sources.
struct LightStencil {
    std::vector<cplx> rotation;
    std::vector<cplx> drive;
    std::vector<cplx> conj_phi;

    void build(std::span<const cplx> phi1, const LightCoefficients& k);
    void apply(std::span<const cplx> source, cplx boundary, std::span<cplx> out) const;
};

// Interaction-picture RK4 integrator for the condensate, the mean atom beam and
// the fluctuation columns, re-solving the light at every stage.
class Propagator {
public:
    explicit Propagator(Scenario scenario);

    const Scenario& scenario() const { return scenario_; }
    const LightCoefficients& light() const { return light_; }
    std::span<const double> positions() const { return x_; } // um

    FieldState initial_state() const;
    // Fill e_mean and f_e from the atomic fields of `state`.
    void refresh_light(FieldState& state) const;

    // One RK4 step of length dt_ms (may be negative). Throws IntegrationError on non-finite fields.
    void step(FieldState& state, double dt_ms);

    Trajectory run();

    cplx mean_boundary(double t_ms) const;
    cplx column_boundary(std::size_t column, double t_ms) const;

private:
    struct Rates {
        double in = 0.0;
        double out = 0.0;
        double absorbed = 0.0;
    };

    void evaluate(double t, const std::vector<Field>& y, std::vector<Field>& dy, std::vector<Rates>& rates,
                  std::vector<cplx>& detector);
    void apply_dispersion(std::vector<Field>& y, double h);
    void prepare_dispersion(double h);
    bool column_active(std::size_t column, double t_end) const;

    Scenario scenario_;
    std::size_t n_ = 0;
    std::size_t columns_ = 0;
    double dx_ = 0.0;
    double dt_ = 0.0;
    LightCoefficients light_;
    std::vector<double> x_;
    std::vector<double> trap_;
    std::vector<double> absorber_;
    std::vector<double> k_;
    double hbar_over_m_ = 0.0;
    double kick_ = 0.0;
    double psi_offset_ = 0.0;
    double phi_offset_ = 0.0;
    double mean_amp_ = 0.0;
    double backaction_occupation_ = 0.0;
    std::size_t detector_index_ = 0;
    std::vector<double> column_start_;
    FftPair fft_;

    double cached_h_ = 0.0;
    std::vector<cplx> half_phi_;
    std::vector<cplx> half_psi_;

    std::vector<bool> active_;
    std::vector<cplx> last_detector_;
    std::size_t step_index_ = 0;
    double forcing_t_ = 0.0;
    LightStencil stencil_;
    std::vector<Field> lights_;
    std::vector<Field> y_, yi_, k1_, k2_, k3_, k4_, tmp_;
};

struct CalibrationOptions {
    double duration = 5e-3;  // s
    double half_width = 0.0; // rad/s; 0 selects 4 v/a
    double tolerance = 1.0;  // rad/s
};

// Golden-section search for the probe detuning that maximizes the number of
// outcoupled atoms after a short mean-field run.
double calibrate_two_photon_detuning(const Scenario& scenario, const CalibrationOptions& options = {});

// Outcoupled atoms (beam plus absorbed) after a mean-field-only run of `duration` seconds.
double outcoupled_atoms(const Scenario& scenario, double duration);

} // namespace atomlight
