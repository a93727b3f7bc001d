#include "atomlight/propagator.hpp"

#include "atomlight/error.hpp"
#include "atomlight/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomlight {

namespace {

constexpr cplx I{0.0, 1.0};

// Internal value of g13: s^-1 m^1/2 -> ms^-1 um^1/2.
double internal_coupling(double g13_si) { return g13_si * units::time / std::sqrt(units::length); }

double internal_light_speed() { return units::to_speed(units::c); }

} // namespace

cplx InputMode::at(double t) const {
    cplx sum = 0.0;
    for (const auto& s : segments)
        if (t >= s.t_start && t < s.t_end) sum += s.amplitude;
    return sum;
}

double InputMode::norm() const {
    double sum = 0.0;
    for (const auto& s : segments) sum += std::norm(s.amplitude) * (s.t_end - s.t_start);
    return sum;
}

double InputMode::first_start() const {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& s : segments)
        if (s.amplitude != 0.0) t = std::min(t, s.t_start);
    return t;
}

std::vector<InputMode> make_input_bins(double start, double length, std::size_t count) {
    if (count == 0) return {};
    if (!(length > 0.0)) throw ValidationError("input: window length must be positive");
    std::vector<InputMode> modes(count);
    const double width = length / static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t0 = start + width * static_cast<double>(k);
        modes[k].segments.push_back({t0, t0 + width, 1.0 / std::sqrt(width)});
    }
    return modes;
}

std::size_t Scenario::step_count() const {
    if (duration <= 0.0) return 0;
    return static_cast<std::size_t>(std::llround(duration / grid.dt));
}

void Scenario::validate() const {
    atomlight::validate(params, validity);
    grid.validate(params.m);
    if (duration < 0.0) throw ValidationError("run.duration: must be non-negative");
    if (duration > 0.0 && std::abs(duration / grid.dt - static_cast<double>(step_count())) > 1e-6)
        throw ValidationError("run.duration: must be a whole number of time steps");

    const auto& d = detection;
    const double last = grid.x_max - grid.dx();
    if (!(d.x1 < d.x2)) throw ValidationError("detection.x1: must be below detection.x2");
    if (d.x1 < grid.x_min || d.x2 > last) throw ValidationError("detection.x2: LO window must lie inside the grid");
    const double support = params.trap_length() * std::sqrt(12.0 * std::log(10.0));
    if (!(d.x_det > support)) throw ValidationError("detection.x_det: must lie beyond the condensate support");
    if (d.x_det > last) throw ValidationError("detection.x_det: must lie inside the grid");
    if (!(d.eval_interval > 0.0)) throw ValidationError("detection.eval_interval: must be positive");
    if (options.absorber_fraction < 0.0 || options.absorber_fraction >= 0.5)
        throw ValidationError("options.absorber_fraction: must lie in [0, 0.5)");
    if (options.absorber_rate < 0.0) throw ValidationError("options.absorber_rate: must be non-negative");

    for (const auto& mode : input_modes) {
        for (const auto& s : mode.segments) {
            if (!(s.t_end > s.t_start) || s.t_start < 0.0)
                throw ValidationError("input: mode segments need 0 <= t_start < t_end");
            if (s.t_end > duration * (1.0 + 1e-12) + 1e-15)
                throw ValidationError("input.window_length: input modes must end within the run duration");
        }
    }
}

double resonance_estimate(const PhysicalParams& p, const PropagatorOptions& options) {
    // Energy balance: an atom leaves the zero-point level omega_trap/2 and ends with the recoil energy.
    double estimate = p.recoil_rate() - 0.5 * p.omega_trap;
    if (options.control_light_shift) estimate -= p.control_light_shift();
    if (options.probe_light_shift && p.n_atoms > 0.0) {
        // The condensate index raises the local probe wavenumber by (g13^2/(c delta))|phi1|^2,
        // which moves the resonance by v times that at the condensate centre.
        const double peak_density = p.n_atoms / (std::sqrt(units::pi) * p.trap_length());
        estimate += p.atom_speed() * p.g13 * p.g13 / (units::c * p.delta) * peak_density;
    }
    return estimate;
}

void LightStencil::build(std::span<const cplx> phi1, const LightCoefficients& k) {
    const std::size_t n = phi1.size();
    rotation.resize(n);
    drive.resize(n);
    conj_phi.resize(n);
    const double step = k.dx / k.c;
    for (std::size_t j = 0; j < n; ++j) conj_phi[j] = std::conj(phi1[j]);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double beta = 0.5 * k.refractive * (std::norm(phi1[j]) + std::norm(phi1[j + 1])) * step;
        const cplx denom(1.0, -0.5 * beta);
        rotation[j] = cplx(1.0, 0.5 * beta) / denom;
        drive[j] = I * (0.5 * step * k.coupling) / denom;
    }
}

void LightStencil::apply(std::span<const cplx> source, cplx boundary, std::span<cplx> out) const {
    const std::size_t n = out.size();
    if (source.size() != n || conj_phi.size() != n) throw std::invalid_argument("cross_propagate_light: size mismatch");
    if (n == 0) return;
    out[0] = boundary;
    cplx src_prev = conj_phi[0] * source[0];
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const cplx src = conj_phi[j + 1] * source[j + 1];
        out[j + 1] = out[j] * rotation[j] + drive[j] * (src_prev + src);
        src_prev = src;
    }
}

void cross_propagate_light(std::span<const cplx> source, std::span<const cplx> phi1, cplx boundary,
                           const LightCoefficients& k, std::span<cplx> out) {
    if (source.size() != out.size() || phi1.size() != out.size())
        throw std::invalid_argument("cross_propagate_light: size mismatch");
    LightStencil stencil;
    stencil.build(phi1, k);
    stencil.apply(source, boundary, out);
}

Field cross_propagate_light(std::span<const cplx> source, std::span<const cplx> phi1, cplx boundary,
                            const LightCoefficients& k) {
    Field out(source.size());
    cross_propagate_light(source, phi1, boundary, k, out);
    return out;
}

Propagator::Propagator(Scenario scenario)
    : scenario_(std::move(scenario)), n_(scenario_.grid.n_points), columns_(scenario_.input_modes.size()),
      fft_(scenario_.grid.n_points) {
    scenario_.validate();
    const auto& p = scenario_.params;
    const auto& g = scenario_.grid;
    const auto& opt = scenario_.options;

    dx_ = units::to_length(g.dx());
    dt_ = units::to_time(g.dt);
    hbar_over_m_ = units::hbar_over_mass(p.m);
    kick_ = units::to_wavenumber(p.kick());

    x_.resize(n_);
    trap_.resize(n_);
    absorber_.assign(n_, 0.0);
    k_.resize(n_);
    const double omega_trap = units::to_rate(p.omega_trap);
    const double length = dx_ * static_cast<double>(n_);
    const double ramp = opt.absorber_fraction * length;
    const double gamma0 = units::to_rate(opt.absorber_rate);
    for (std::size_t i = 0; i < n_; ++i) {
        x_[i] = units::to_length(g.x_min) + dx_ * static_cast<double>(i);
        trap_[i] = 0.5 * omega_trap * omega_trap * x_[i] * x_[i] / hbar_over_m_;
        const double from_left = dx_ * static_cast<double>(i);
        const double from_right = length - from_left;
        if (ramp > 0.0) {
            double s = 0.0;
            if (from_left < ramp) s = (ramp - from_left) / ramp;
            if (from_right < ramp) s = std::max(s, (ramp - from_right) / ramp);
            absorber_[i] = gamma0 * s * s;
        }
        const double idx = i < n_ / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n_);
        k_[i] = 2.0 * units::pi / length * idx;
    }

    // Both atomic fields rotate at the condensate zero-point energy, so the
    // trapped ground state is stationary and delta2 is measured from it.
    const double mu = 0.5 * p.omega_trap;
    phi_offset_ = units::to_rate(-mu);
    double psi_si = p.recoil_rate() - p.delta2 - mu;
    if (opt.control_light_shift) psi_si -= p.control_light_shift();
    psi_offset_ = units::to_rate(psi_si);

    const double g_int = internal_coupling(p.g13);
    light_.dx = dx_;
    light_.c = internal_light_speed();
    light_.coupling = g_int * p.omega23 / p.delta;
    light_.refractive = opt.probe_light_shift ? g_int * g_int / units::to_rate(p.delta) : 0.0;

    mean_amp_ = std::sqrt(units::to_rate(p.probe_flux) / light_.c);
    if (opt.fluctuation_backaction) {
        const double s = std::sinh(p.r);
        backaction_occupation_ = s * s;
    }

    detector_index_ = static_cast<std::size_t>(std::llround((scenario_.detection.x_det - g.x_min) / g.dx()));
    column_start_.resize(columns_);
    for (std::size_t k = 0; k < columns_; ++k)
        column_start_[k] = units::to_time(scenario_.input_modes[k].first_start());

    const std::size_t fields = 2 + columns_;
    active_.assign(columns_, true);
    lights_.assign(1 + columns_, Field(n_));
    for (auto* v : {&y_, &yi_, &k1_, &k2_, &k3_, &k4_, &tmp_}) v->assign(fields, Field(n_));
}

cplx Propagator::mean_boundary(double t_ms) const {
    return t_ms >= -1e-9 * dt_ ? cplx(mean_amp_) : cplx(0.0);
}

cplx Propagator::column_boundary(std::size_t column, double t_ms) const {
    // Nudge forward so step times that land on a segment edge up to rounding count as inside it.
    const double t_s = (t_ms + 1e-9 * dt_) * units::time;
    return scenario_.input_modes[column].at(t_s) * std::sqrt(units::time) / std::sqrt(light_.c);
}

bool Propagator::column_active(std::size_t column, double t_end) const {
    return column_start_[column] <= t_end + 1e-9 * dt_;
}

FieldState Propagator::initial_state() const {
    FieldState s;
    s.t = 0.0;
    const auto profile = ground_state(scenario_.params, scenario_.grid);
    s.phi1.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) s.phi1[i] = units::to_envelope(1.0) * profile.values[i];
    s.psi2_mean.assign(n_, 0.0);
    s.f_psi.assign(columns_, Field(n_, 0.0));
    s.column_ledgers.assign(columns_, {});
    refresh_light(s);
    return s;
}

void Propagator::refresh_light(FieldState& s) const {
    LightStencil stencil;
    stencil.build(s.phi1, light_);
    s.e_mean.resize(n_);
    stencil.apply(s.psi2_mean, mean_boundary(s.t), s.e_mean);
    s.f_e.resize(columns_);
    for (std::size_t k = 0; k < columns_; ++k) {
        s.f_e[k].resize(n_);
        stencil.apply(s.f_psi[k], column_boundary(k, s.t), s.f_e[k]);
    }
}

void Propagator::prepare_dispersion(double h) {
    if (h == cached_h_ && !half_phi_.empty()) return;
    cached_h_ = h;
    half_phi_.resize(n_);
    half_psi_.resize(n_);
    const double a = 0.5 * hbar_over_m_;
    for (std::size_t i = 0; i < n_; ++i) {
        const double k = k_[i];
        const double w_phi = a * k * k + phi_offset_;
        // (k + kick)^2 - kick^2 keeps the recoil constant out of the large term.
        const double w_psi = a * k * (k + 2.0 * kick_) + psi_offset_;
        half_phi_[i] = std::exp(-I * (0.5 * h * w_phi));
        half_psi_[i] = std::exp(-I * (0.5 * h * w_psi));
    }
}

void Propagator::apply_dispersion(std::vector<Field>& y, double) {
    auto apply = [&](Field& f, const std::vector<cplx>& factor) {
        fft_.forward(f);
        for (std::size_t i = 0; i < n_; ++i) f[i] *= factor[i];
        fft_.inverse(f);
    };
    if (scenario_.options.evolve_condensate) apply(y[0], half_phi_);
    apply(y[1], half_psi_);
    for (std::size_t k = 0; k < columns_; ++k)
        if (active_[k]) apply(y[2 + k], half_psi_);
}

void Propagator::evaluate(double t, const std::vector<Field>& y, std::vector<Field>& dy, std::vector<Rates>& rates,
                          std::vector<cplx>& detector) {
    const Field& phi = y[0];
    const Field& psi = y[1];
    const double kappa = light_.coupling;
    const double c = light_.c;

    stencil_.build(phi, light_);
    stencil_.apply(psi, mean_boundary(t), lights_[0]);
    for (std::size_t k = 0; k < columns_; ++k)
        if (active_[k]) stencil_.apply(y[2 + k], column_boundary(k, forcing_t_), lights_[1 + k]);

    const Field& e = lights_[0];
    if (scenario_.options.evolve_condensate) {
        Field& dphi = dy[0];
        const bool backaction = backaction_occupation_ > 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double intensity = std::norm(e[i]);
            cplx coherence = std::conj(e[i]) * psi[i];
            if (backaction) {
                for (std::size_t k = 0; k < columns_; ++k) {
                    if (!active_[k]) continue;
                    intensity += backaction_occupation_ * std::norm(lights_[1 + k][i]);
                    coherence += backaction_occupation_ * std::conj(lights_[1 + k][i]) * y[2 + k][i];
                }
            }
            const double energy = trap_[i] - light_.refractive * intensity;
            dphi[i] = -I * energy * phi[i] + I * kappa * coherence;
        }
    } else {
        std::fill(dy[0].begin(), dy[0].end(), cplx(0.0));
    }

    auto atomic = [&](const Field& f, const Field& light, Field& df, Rates& r, cplx boundary) {
        double lost = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            df[i] = -absorber_[i] * f[i] + I * kappa * phi[i] * light[i];
            lost += absorber_[i] * std::norm(f[i]);
        }
        r.in = c * std::norm(boundary);
        r.out = c * std::norm(light[n_ - 1]);
        r.absorbed = 2.0 * lost * dx_;
    };

    atomic(psi, e, dy[1], rates[0], mean_boundary(t));
    detector[0] = e[detector_index_];
    for (std::size_t k = 0; k < columns_; ++k) {
        if (!active_[k]) {
            rates[1 + k] = {};
            detector[1 + k] = 0.0;
            continue;
        }
        atomic(y[2 + k], lights_[1 + k], dy[2 + k], rates[1 + k], column_boundary(k, forcing_t_));
        detector[1 + k] = lights_[1 + k][detector_index_];
    }
}

void Propagator::step(FieldState& s, double h) {
    prepare_dispersion(h);
    const double t = s.t;
    for (std::size_t k = 0; k < columns_; ++k) active_[k] = h < 0.0 || column_active(k, t + h);
    // Input modes are held at their mid-step value, so segments whose edges fall on
    // step boundaries are integrated exactly.
    forcing_t_ = t + 0.5 * h;

    std::swap(y_[0], s.phi1);
    std::swap(y_[1], s.psi2_mean);
    for (std::size_t k = 0; k < columns_; ++k) std::swap(y_[2 + k], s.f_psi[k]);

    const std::size_t groups = 1 + columns_;
    std::vector<Rates> r1(groups), r2(groups), r3(groups), r4(groups);
    std::vector<cplx> d1(groups), d2(groups), d3(groups), d4(groups);

    const std::size_t fields = 2 + columns_;
    auto live = [&](std::size_t f) { return f < 2 || active_[f - 2]; };
    auto combine = [&](std::vector<Field>& out, const std::vector<Field>& base, double w, const std::vector<Field>& k) {
        for (std::size_t f = 0; f < fields; ++f) {
            if (!live(f)) continue;
            for (std::size_t i = 0; i < n_; ++i) out[f][i] = base[f][i] + w * k[f][i];
        }
    };

    evaluate(t, y_, k1_, r1, d1);
    for (std::size_t f = 0; f < fields; ++f)
        if (live(f)) yi_[f] = y_[f];
    apply_dispersion(yi_, h);
    apply_dispersion(k1_, h);

    combine(tmp_, yi_, 0.5 * h, k1_);
    evaluate(t + 0.5 * h, tmp_, k2_, r2, d2);
    combine(tmp_, yi_, 0.5 * h, k2_);
    evaluate(t + 0.5 * h, tmp_, k3_, r3, d3);
    combine(tmp_, yi_, h, k3_);
    apply_dispersion(tmp_, h);
    evaluate(t + h, tmp_, k4_, r4, d4);

    const double w = h / 6.0;
    for (std::size_t f = 0; f < fields; ++f) {
        if (!live(f)) continue;
        for (std::size_t i = 0; i < n_; ++i)
            y_[f][i] = yi_[f][i] + w * (k1_[f][i] + 2.0 * k2_[f][i] + 2.0 * k3_[f][i]);
    }
    apply_dispersion(y_, h);
    for (std::size_t f = 0; f < fields; ++f) {
        if (!live(f)) continue;
        for (std::size_t i = 0; i < n_; ++i) y_[f][i] += w * k4_[f][i];
    }

    std::swap(y_[0], s.phi1);
    std::swap(y_[1], s.psi2_mean);
    for (std::size_t k = 0; k < columns_; ++k) std::swap(y_[2 + k], s.f_psi[k]);

    auto accumulate = [&](BoundaryLedger& ledger, std::size_t g) {
        ledger.in += w * (r1[g].in + 2.0 * r2[g].in + 2.0 * r3[g].in + r4[g].in);
        ledger.out += w * (r1[g].out + 2.0 * r2[g].out + 2.0 * r3[g].out + r4[g].out);
        ledger.absorbed += w * (r1[g].absorbed + 2.0 * r2[g].absorbed + 2.0 * r3[g].absorbed + r4[g].absorbed);
    };
    accumulate(s.mean_ledger, 0);
    for (std::size_t k = 0; k < columns_; ++k) accumulate(s.column_ledgers[k], 1 + k);

    s.t = t + h;
    last_detector_.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) last_detector_[g] = 0.5 * (d2[g] + d3[g]);

    auto finite = [](const Field& f) {
        double sum = 0.0;
        for (const auto& v : f) sum += std::norm(v);
        return std::isfinite(sum);
    };
    bool ok = finite(s.phi1) && finite(s.psi2_mean);
    for (std::size_t k = 0; ok && k < columns_; ++k) ok = finite(s.f_psi[k]);
    if (!ok) throw IntegrationError("non-finite field", step_index_);
    refresh_light(s);
}

Trajectory Propagator::run() {
    Trajectory tr;
    FieldState state = initial_state();
    tr.snapshots.push_back(state);
    tr.detector_index = detector_index_;

    const auto& g = scenario_.grid;
    const auto& d = scenario_.detection;
    const std::size_t steps = scenario_.step_count();
    const std::size_t eval_every =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(d.eval_interval / g.dt)));

    std::vector<std::size_t> snapshot_steps;
    const std::size_t count = std::max<std::size_t>(1, scenario_.snapshot_count);
    for (std::size_t j = 1; j <= count && steps > 0; ++j) {
        const auto at = static_cast<std::size_t>(std::llround(static_cast<double>(j * steps) / static_cast<double>(count)));
        if (at > 0 && (snapshot_steps.empty() || at != snapshot_steps.back())) snapshot_steps.push_back(at);
    }

    const auto i1 = static_cast<std::size_t>(std::ceil((d.x1 - g.x_min) / g.dx() - 1e-9));
    const auto i2 = static_cast<std::size_t>(std::ceil((d.x2 - g.x_min) / g.dx() - 1e-9));
    tr.window_begin = i1;

    tr.detector.reserve(steps);
    std::size_t next_snapshot = 0;
    for (std::size_t n = 1; n <= steps; ++n) {
        step_index_ = n;
        try {
            step(state, dt_);
        } catch (const IntegrationError& e) {
            tr.failed = true;
            tr.failed_step = e.step();
            tr.failure = e.what();
            break;
        }
        DetectorSample sample;
        sample.t = (static_cast<double>(n) - 0.5) * dt_;
        sample.e_mean = last_detector_[0];
        sample.f_e.assign(last_detector_.begin() + 1, last_detector_.end());
        tr.detector.push_back(std::move(sample));

        if (n % eval_every == 0) {
            WindowSample w;
            w.t = state.t;
            w.psi_mean.assign(state.psi2_mean.begin() + i1, state.psi2_mean.begin() + i2);
            w.f_psi.reserve(columns_);
            for (std::size_t k = 0; k < columns_; ++k)
                w.f_psi.emplace_back(state.f_psi[k].begin() + i1, state.f_psi[k].begin() + i2);
            tr.windows.push_back(std::move(w));
        }
        if (next_snapshot < snapshot_steps.size() && snapshot_steps[next_snapshot] == n) {
            tr.snapshots.push_back(state);
            ++next_snapshot;
        }
    }
    tr.final_state = std::move(state);
    return tr;
}

double outcoupled_atoms(const Scenario& scenario, double duration) {
    Scenario s = scenario;
    s.duration = duration;
    s.input_modes.clear();
    Propagator prop(std::move(s));
    FieldState state = prop.initial_state();
    const std::size_t steps = prop.scenario().step_count();
    const double dt = units::to_time(prop.scenario().grid.dt);
    for (std::size_t n = 0; n < steps; ++n) prop.step(state, dt);
    double beam = 0.0;
    for (const auto& v : state.psi2_mean) beam += std::norm(v);
    return beam * units::to_length(prop.scenario().grid.dx()) + state.mean_ledger.absorbed;
}

double calibrate_two_photon_detuning(const Scenario& scenario, const CalibrationOptions& options) {
    const auto& p = scenario.params;
    if (p.omega23 == 0.0 || p.g13 == 0.0 || p.n_atoms == 0.0 || p.probe_flux == 0.0)
        throw CalibrationError("calibration: no outcoupling to maximize (zero coupling, atoms or probe)");

    const double centre = resonance_estimate(p, scenario.options);
    const double half = options.half_width > 0.0 ? options.half_width : 4.0 * p.atom_speed() / p.trap_length();
    double lo = centre - half;
    double hi = centre + half;

    auto objective = [&](double delta2) {
        Scenario s = scenario;
        s.params.delta2 = delta2;
        return outcoupled_atoms(s, options.duration);
    };

    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double fa = objective(a);
    double fb = objective(b);
    while (hi - lo > options.tolerance) {
        if (fa > fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = objective(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = objective(b);
        }
    }
    const double best = 0.5 * (lo + hi);
    const double peak = std::max(fa, fb);
    if (!(peak > 0.0) || peak < 1e-12 * p.n_atoms)
        throw CalibrationError("calibration: outcoupled number vanishes across the bracket");
    if (best - (centre - half) < 2.0 * options.tolerance || (centre + half) - best < 2.0 * options.tolerance)
        throw CalibrationError("calibration: no interior maximum in the search bracket");
    return best;
}

} // namespace atomlight
