#include "atomlight/app.hpp"

#include "atomlight/error.hpp"
#include "atomlight/output.hpp"
#include "atomlight/svg_plot.hpp"
#include "atomlight/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace atomlight {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json params_json(const Scenario& s) {
    const auto& p = s.params;
    return json{{"mass", p.m},           {"g13", p.g13},         {"delta", p.delta},
                {"omega23", p.omega23},  {"omega_trap", p.omega_trap}, {"n_atoms", p.n_atoms},
                {"probe_flux", p.probe_flux}, {"r", p.r},        {"theta_sq", p.theta_sq},
                {"k0", p.k0},            {"kp", p.kp},           {"omega0", p.omega0},
                {"delta2", p.delta2},    {"duration", s.duration}, {"grid_points", s.grid.n_points},
                {"dt", s.grid.dt},       {"x_min", s.grid.x_min}, {"x_max", s.grid.x_max},
                {"input_modes", s.input_modes.size()}};
}

json metrics_json(const RunMetrics& m) {
    return json{{"delta2", m.delta2},
                {"samples", m.samples},
                {"min_product", number(m.min_product)},
                {"t_min_product", number(m.t_min_product)},
                {"vinf_x_plus_at_min", number(m.vinf_x_plus_at_min)},
                {"vinf_x_minus_at_min", number(m.vinf_x_minus_at_min)},
                {"min_vinf_x_plus", number(m.min_vinf_x_plus)},
                {"min_v_x_plus", number(m.min_v_x_plus)},
                {"t_min_v_x_plus", number(m.t_min_v_x_plus)},
                {"final_v_x_plus", number(m.final_v_x_plus)},
                {"min_v_y_plus", number(m.min_v_y_plus)},
                {"final_v_y_plus", number(m.final_v_y_plus)},
                {"min_uncertainty_product", number(m.min_uncertainty)},
                {"min_symplectic_eigenvalue", number(m.min_symplectic)},
                {"ledger_residuals",
                 {{"atoms", m.atom_ledger}, {"excitations", m.excitation_ledger}, {"columns", m.column_ledger}}},
                {"failed", m.failed},
                {"failure", m.failure}};
}

void say(bool quiet, std::ostream* log, const std::string& msg) {
    if (!quiet && log) *log << msg << '\n' << std::flush;
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream o;
    o << std::setprecision(digits) << v;
    return o.str();
}

} // namespace

std::string output_directory(const RunConfig& config, const AppOptions& options) {
    if (!options.out_dir.empty()) return options.out_dir;
    if (const char* env = std::getenv(output_dir_env); env && *env) return env;
    return config.output_dir;
}

RunMetrics compute_metrics(const Trajectory& tr, const Scenario& s, const std::vector<GaussianSummary>& sums) {
    RunMetrics m;
    m.delta2 = s.params.delta2;
    m.samples = sums.size();
    m.failed = tr.failed;
    m.failure = tr.failure;
    if (sums.empty()) {
        m.min_product = m.t_min_product = m.vinf_x_plus_at_min = m.vinf_x_minus_at_min = nan;
        m.min_vinf_x_plus = m.min_v_x_plus = m.t_min_v_x_plus = m.final_v_x_plus = nan;
        m.final_v_y_plus = m.min_v_y_plus = m.min_uncertainty = m.min_symplectic = nan;
    } else {
        m.min_product = m.min_vinf_x_plus = m.min_v_x_plus = m.min_v_y_plus = m.min_uncertainty =
            m.min_symplectic = std::numeric_limits<double>::infinity();
        for (const auto& g : sums) {
            if (g.product_x < m.min_product) {
                m.min_product = g.product_x;
                m.t_min_product = g.t;
                m.vinf_x_plus_at_min = g.vinf_x_plus;
                m.vinf_x_minus_at_min = g.vinf_x_minus;
            }
            if (g.v_x_plus < m.min_v_x_plus) {
                m.min_v_x_plus = g.v_x_plus;
                m.t_min_v_x_plus = g.t;
            }
            m.min_vinf_x_plus = std::min(m.min_vinf_x_plus, g.vinf_x_plus);
            m.min_v_y_plus = std::min(m.min_v_y_plus, g.v_y_plus);
            m.min_uncertainty = std::min({m.min_uncertainty, g.uncertainty_x, g.uncertainty_y});
            m.min_symplectic = std::min(m.min_symplectic, symplectic_eigenvalues(g.sigma)(0));
        }
        m.final_v_x_plus = sums.back().v_x_plus;
        m.final_v_y_plus = sums.back().v_y_plus;
    }

    const auto& f = tr.final_state;
    const double dx = units::to_length(s.grid.dx());
    double nphi = 0.0, npsi = 0.0;
    for (const auto& v : f.phi1) nphi += std::norm(v);
    for (const auto& v : f.psi2_mean) npsi += std::norm(v);
    nphi *= dx;
    npsi *= dx;
    const auto& L = f.mean_ledger;
    if (s.params.n_atoms > 0.0) m.atom_ledger = (nphi + npsi + L.absorbed - s.params.n_atoms) / s.params.n_atoms;
    if (L.in > 0.0) m.excitation_ledger = (npsi + L.absorbed + L.out - L.in) / L.in;

    const auto norms = commutator_norm(tr, s);
    const double t_end = f.t * units::time;
    for (std::size_t k = 0; k < norms.size() && k < s.input_modes.size(); ++k) {
        const auto& segs = s.input_modes[k].segments;
        if (segs.empty() || segs.back().t_end > t_end * (1.0 + 1e-12)) continue;
        m.column_ledger = std::max(m.column_ledger, std::abs(norms[k] - s.input_modes[k].norm()));
    }
    return m;
}

RunOutcome execute_run(const RunConfig& config, bool quiet, std::ostream* log) {
    RunOutcome out;
    out.scenario = config.scenario;
    if (config.detuning == DetuningMode::Calibrate && out.scenario.params.omega23 != 0.0) {
        say(quiet, log, "calibrating two-photon detuning...");
        out.scenario.params.delta2 = calibrate_two_photon_detuning(out.scenario);
        say(quiet, log, "  delta2 = " + fixed(out.scenario.params.delta2, 10) + " rad/s");
    }
    say(quiet, log, "integrating " + std::to_string(out.scenario.step_count()) + " steps with " +
                        std::to_string(out.scenario.input_modes.size()) + " input modes...");
    Propagator prop(out.scenario);
    out.trajectory = prop.run();
    if (out.trajectory.failed) say(quiet, log, "integration failed: " + out.trajectory.failure);
    try {
        out.summaries = summarize(out.trajectory, out.scenario);
    } catch (const ValidationError& e) {
        if (!out.trajectory.failed) throw;
        // a truncated record can leave the last window without its optical partner
        out.summaries.clear();
    }
    out.metrics = compute_metrics(out.trajectory, out.scenario, out.summaries);
    return out;
}

// ---- run ------------------------------------------------------------------

namespace {

void write_run_plots(const fs::path& dir, const RunOutcome& r) {
    const auto& s = r.scenario;
    const auto& f = r.trajectory.final_state;
    const double to_density = 1.0 / units::length; // um^-1 -> m^-1
    const double light_scale = units::c / s.params.atom_speed(); // m c / (2 hbar k0)

    PlotSeries cond{"condensate", {}, {}, "", false};
    PlotSeries beam{"beam x100", {}, {}, "", false};
    PlotSeries light{"light x mc/2hk0", {}, {}, "", false};
    for (std::size_t i = 0; i < s.grid.n_points; ++i) {
        const double x = s.grid.position(i) * 1e3;
        cond.x.push_back(x);
        beam.x.push_back(x);
        light.x.push_back(x);
        cond.y.push_back(std::norm(f.phi1[i]) * to_density);
        beam.y.push_back(100.0 * std::norm(f.psi2_mean[i]) * to_density);
        light.y.push_back(light_scale * std::norm(f.e_mean[i]) * to_density);
    }
    write_svg(dir / "density.svg",
              {"Densities at t = " + fixed(f.t * units::time * 1e3, 4) + " ms", "x (mm)", "density (m^-1)"},
              {cond, beam, light});

    PlotSeries vx{"V(X+) atoms", {}, {}, "", false}, vy{"V(Y+) light", {}, {}, "", false};
    PlotSeries px{"Vinf(X+)Vinf(X-)", {}, {}, "", false}, py{"Vinf(Y+)Vinf(Y-)", {}, {}, "", false};
    PlotSeries bound{"bound", {}, {}, "#888888", false};
    for (const auto& g : r.summaries) {
        const double t = g.t * 1e3;
        vx.x.push_back(t);
        vx.y.push_back(g.v_x_plus);
        vy.x.push_back(t);
        vy.y.push_back(g.v_y_plus);
        px.x.push_back(t);
        px.y.push_back(g.product_x);
        py.x.push_back(t);
        py.y.push_back(g.product_y);
    }
    if (!r.summaries.empty()) bound = {"bound", {px.x.front(), px.x.back()}, {1.0, 1.0}, "#888888", false};
    write_svg(dir / "variances.svg", {"Amplitude quadrature variances", "t (ms)", "variance (vacuum = 1)"},
              {vx, vy});
    write_svg(dir / "products.svg", {"Inferred variance products", "t (ms)", "product", true}, {px, py, bound});
}

} // namespace

int cmd_run(RunConfig config, const AppOptions& options, std::ostream& log) {
    if (options.snapshots) config.scenario.snapshot_count = *options.snapshots;
    const fs::path dir = output_directory(config, options);
    fs::create_directories(dir);

    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome r = execute_run(config, options.quiet, &log);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    RunConfig resolved = config;
    resolved.scenario.params.delta2 = r.scenario.params.delta2;
    resolved.detuning = DetuningMode::Fixed;
    {
        std::ofstream cfg(dir / "config.toml", std::ios::binary);
        cfg << emit_config(resolved);
    }

    const auto& snaps = r.trajectory.snapshots;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
        write_snapshot_csv(dir / name, snaps[i], r.scenario.grid);
    }
    write_detector_csv(dir / "detector.csv", r.trajectory);
    write_summary_csv(dir / "summary.csv", r.summaries);

    json j;
    j["parameters"] = params_json(r.scenario);
    j["metrics"] = metrics_json(r.metrics);
    if (r.trajectory.failed) j["failed_step"] = r.trajectory.failed_step;
    {
        std::ofstream out(dir / "summary.json", std::ios::binary);
        out << j.dump(2) << '\n';
    }
    {
        // kept apart so that summary.json is reproducible bit for bit
        std::ofstream out(dir / "timing.json", std::ios::binary);
        out << json{{"wall_time_s", wall}}.dump(2) << '\n';
    }
    if (config.plots) write_run_plots(dir, r);

    if (!options.quiet) {
        log << "wrote " << dir.string() << "\n";
        log << "  min product " << fixed(r.metrics.min_product) << " at t = " << fixed(r.metrics.t_min_product * 1e3)
            << " ms, min V(X+) " << fixed(r.metrics.min_v_x_plus) << ", wall " << fixed(wall, 4) << " s\n";
    }
    return r.trajectory.failed ? exit_integration : exit_success;
}

// ---- sweep ----------------------------------------------------------------

const std::vector<std::string>& sweep_metrics(SweepPath path) {
    static const std::vector<std::string> simulation = {"min_product", "vinf_x_plus_at_min", "min_vinf_x_plus",
                                                        "min_v_x_plus", "final_v_y_plus", "min_uncertainty_product",
                                                        "atom_ledger"};
    static const std::vector<std::string> oracle = {"min_product", "vinf_x_plus", "vinf_x_minus", "v_x_plus",
                                                    "v_y_plus"};
    return path == SweepPath::Oracle ? oracle : simulation;
}

namespace {

struct SweepResult {
    std::vector<double> values; // per metric
    std::string status = "ok";
    std::string message;
};

SweepResult sweep_simulation_point(RunConfig cfg, const std::vector<std::pair<std::string, double>>& point) {
    SweepResult res;
    const auto& names = sweep_metrics(SweepPath::Simulation);
    res.values.assign(names.size(), nan);
    try {
        for (const auto& [name, value] : point) set_physics_parameter(cfg.scenario.params, name, value);
        if (std::any_of(point.begin(), point.end(), [](const auto& p) { return p.first == "delta2"; }))
            cfg.detuning = DetuningMode::Fixed;
        validate(cfg.scenario.params, cfg.scenario.validity);
        resolve(cfg);
        cfg.scenario.validate();
        RunOutcome r = execute_run(cfg);
        const auto& m = r.metrics;
        res.values = {m.min_product, m.vinf_x_plus_at_min, m.min_vinf_x_plus, m.min_v_x_plus, m.final_v_y_plus,
                      m.min_uncertainty, m.atom_ledger};
        if (m.failed) {
            res.status = "integration_error";
            res.message = m.failure;
        }
    } catch (const ValidationError& e) {
        res.status = "validation_error";
        res.message = e.what();
    } catch (const CalibrationError& e) {
        res.status = "calibration_error";
        res.message = e.what();
    } catch (const std::exception& e) {
        res.status = "error";
        res.message = e.what();
    }
    return res;
}

SweepResult sweep_oracle_point(const RunConfig& cfg, const std::vector<std::pair<std::string, double>>& point) {
    SweepResult res;
    BeamSplitterCase bs{cfg.sweep_eta, cfg.scenario.params.r, cfg.scenario.params.theta_sq};
    try {
        for (const auto& [name, value] : point) {
            if (name == "eta") bs.eta = value;
            else if (name == "r") bs.r = value;
            else bs.theta_sq = value;
        }
        const auto s = beamsplitter_summary(bs);
        res.values = {s.product_x, s.vinf_x_plus, s.vinf_x_minus, s.v_x_plus, s.v_y_plus};
    } catch (const std::exception& e) {
        res.values.assign(sweep_metrics(SweepPath::Oracle).size(), nan);
        res.status = "validation_error";
        res.message = e.what();
    }
    return res;
}

} // namespace

int cmd_sweep(RunConfig config, const AppOptions& options, std::ostream& log) {
    if (config.axes.empty()) throw ValidationError("sweep.axes: at least one sweep axis is required");
    const fs::path dir = output_directory(config, options);
    fs::create_directories(dir);

    std::vector<std::vector<std::pair<std::string, double>>> points(1);
    for (const auto& axis : config.axes) {
        std::vector<std::vector<std::pair<std::string, double>>> next;
        for (const auto& p : points)
            for (double v : axis.values) {
                auto q = p;
                q.emplace_back(axis.name, v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }

    std::size_t workers = options.workers.value_or(config.workers);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, points.size());

    std::vector<SweepResult> results(points.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
            results[i] = config.sweep_path == SweepPath::Oracle ? sweep_oracle_point(config, points[i])
                                                                 : sweep_simulation_point(config, points[i]);
            if (!options.quiet) {
                std::lock_guard lock(log_mutex);
                log << "run " << i + 1 << "/" << points.size() << ": " << results[i].status << '\n' << std::flush;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // single writer, in run order
    const auto& metrics = sweep_metrics(config.sweep_path);
    std::vector<std::string> header = {"run"};
    for (const auto& a : config.axes) header.push_back(a.name);
    header.insert(header.end(), {"metric", "value", "status", "message"});
    CsvWriter csv(dir / "sweep.csv", header);
    bool any_failed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        any_failed |= results[i].status != "ok";
        for (std::size_t m = 0; m < metrics.size(); ++m) {
            std::vector<std::string> row = {std::to_string(i)};
            for (const auto& [name, v] : points[i]) row.push_back(format_double(v));
            row.push_back(metrics[m]);
            row.push_back(std::isfinite(results[i].values[m]) ? format_double(results[i].values[m]) : "nan");
            row.push_back(results[i].status);
            row.push_back(results[i].message);
            csv.row(row);
        }
    }

    if (config.plots) {
        // min_product against the first axis, one curve per combination of the others
        std::map<std::string, PlotSeries> curves;
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::string label;
            for (std::size_t a = 1; a < points[i].size(); ++a)
                label += (label.empty() ? "" : ", ") + points[i][a].first + " = " + fixed(points[i][a].second, 4);
            if (label.empty()) label = "min product";
            auto& c = curves[label];
            c.label = label;
            c.markers = true;
            c.x.push_back(points[i][0].second);
            c.y.push_back(results[i].values[0]);
        }
        std::vector<PlotSeries> series;
        for (auto& [k, c] : curves) series.push_back(std::move(c));
        write_svg(dir / "sweep_min_product.svg",
                  {"Minimum inferred variance product", config.axes[0].name, "min product", true}, series);
    }
    if (!options.quiet) log << "wrote " << (dir / "sweep.csv").string() << '\n';
    return any_failed ? exit_integration : exit_success;
}

// ---- calibrate, oracle ----------------------------------------------------

int cmd_calibrate(RunConfig config, const AppOptions& options, std::ostream& out) {
    auto& s = config.scenario;
    const double estimate = resonance_estimate(s.params, s.options);
    s.params.delta2 = estimate;
    const double best = calibrate_two_photon_detuning(s);
    if (!options.quiet) out << "recoil_rate " << format_double(s.params.recoil_rate()) << " rad/s\n";
    out << "estimate " << format_double(estimate) << " rad/s\n";
    out << "calibrated " << format_double(best) << " rad/s\n";
    return exit_success;
}

int cmd_oracle(const BeamSplitterCase& bs, std::ostream& out) {
    const auto s = beamsplitter_summary(bs);
    json j{{"eta", bs.eta},
           {"r", bs.r},
           {"theta_sq", bs.theta_sq},
           {"v_x_plus", s.v_x_plus},
           {"v_x_minus", s.v_x_minus},
           {"v_y_plus", s.v_y_plus},
           {"v_y_minus", s.v_y_minus},
           {"cov_plus", s.cov_plus},
           {"cov_minus", s.cov_minus},
           {"vinf_x_plus", s.vinf_x_plus},
           {"vinf_x_minus", s.vinf_x_minus},
           {"product", s.product_x},
           {"entangled", s.entangled}};
    out << j.dump(2) << '\n';
    return exit_success;
}

// ---- check ----------------------------------------------------------------

std::vector<CheckResult> run_checks(double covariance_vacuum) {
    std::vector<CheckResult> out;
    auto add = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };

    {
        const auto s = beamsplitter_summary({0.5, 2.0, 0.0});
        const bool ok = std::abs(s.vinf_x_plus - 0.03596) < 1e-3 && std::abs(s.vinf_x_minus - 1.9643) < 1e-3 &&
                        std::abs(s.product_x - 0.0706) < 1e-3;
        add("oracle values at eta = 1/2, r = 2", ok,
            "Vinf(X+) " + fixed(s.vinf_x_plus) + ", Vinf(X-) " + fixed(s.vinf_x_minus) + ", product " +
                fixed(s.product_x));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const double eta = i / 49.0;
                const double r = 3.0 * j / 49.0;
                OutputModes modes;
                modes.columns = {{std::sqrt(eta), std::sqrt(1.0 - eta)}};
                const auto a = epr_inferred(assemble_covariance(modes, input_covariance(r, 0.0), covariance_vacuum));
                const auto b = beamsplitter_summary({eta, r, 0.0});
                // relative to the entry size: at r = 3 the anti-squeezed entries reach ~400
                auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
                for (int p = 0; p < 4; ++p)
                    for (int q = 0; q < 4; ++q) worst = std::max(worst, rel(a.sigma(p, q), b.sigma(p, q)));
                // V_inf = V - Cov^2/V' cancels terms of size V, so V sets its scale
                auto inf = [](double x, double y, double v) { return std::abs(x - y) / std::max(1.0, v); };
                worst = std::max({worst, inf(a.vinf_x_plus, b.vinf_x_plus, b.v_x_plus),
                                  inf(a.vinf_x_minus, b.vinf_x_minus, b.v_x_minus)});
            }
        }
        add("covariance assembly matches oracle (50 x 50)", worst <= 1e-12, "max relative deviation " + fixed(worst, 3));
    }
    {
        double worst = 0.0;
        for (double r : {0.0, 0.5, 1.0, 2.0, 3.0}) {
            const double expect = 4.0 / (2.0 + std::exp(2.0 * r) + std::exp(-2.0 * r));
            worst = std::max(worst, std::abs(beamsplitter_summary({0.5, r, 0.0}).product_x - expect));
        }
        add("balanced product 4/(2 + e^2r + e^-2r)", worst <= 1e-12, "max deviation " + fixed(worst, 3));
    }
    {
        OutputModes modes;
        modes.columns = {{cplx(0.3, 0.4), cplx(-0.5, 0.2)}, {cplx(0.1, -0.6), cplx(0.2, 0.1)}};
        const auto s = epr_inferred(assemble_covariance(modes, input_covariance(0.0, 0.0), covariance_vacuum));
        const double dev = (s.sigma - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
        add("vacuum input gives identity covariance", dev <= 1e-12 && std::abs(s.product_x - 1.0) <= 1e-12,
            "max deviation " + fixed(dev, 3));
    }
    {
        double lowest = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 10; ++i)
            for (double r : {0.0, 1.0, 2.0})
                for (double th : {0.0, 0.7})
                    lowest = std::min(lowest, symplectic_eigenvalues(beamsplitter_summary({i / 10.0, r, th}).sigma)(0));
        add("oracle states are physical", lowest >= 1.0 - 1e-6, "min symplectic eigenvalue " + fixed(lowest, 9));
    }
    try {
        Scenario s;
        s.duration = 2e-3;
        s.params.delta2 = resonance_estimate(s.params, s.options);
        s.input_modes = make_input_bins(0.0, 1e-3, 2);
        Propagator prop(s);
        const Trajectory tr = prop.run();
        const auto sums = summarize(tr, s);
        const RunMetrics m = compute_metrics(tr, s, sums);
        add("2 ms run completes", !tr.failed, tr.failed ? tr.failure : "ok");
        add("atom number ledger", std::abs(m.atom_ledger) <= 1e-3, "relative residual " + fixed(m.atom_ledger, 3));
        add("photon/atom exchange ledger", std::abs(m.excitation_ledger) <= 1e-3,
            "relative residual " + fixed(m.excitation_ledger, 3));
        add("fluctuation column norms", m.column_ledger <= 1e-3, "max |norm - 1| " + fixed(m.column_ledger, 3));

        Scenario v = s;
        v.params.r = 0.0;
        double dev = 0.0;
        for (const auto& g : summarize(tr, v)) dev = std::max({dev, std::abs(g.product_x - 1.0),
                                                               (g.sigma - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff()});
        add("r = 0 run stays at vacuum", dev <= 1e-3, "max deviation " + fixed(dev, 3));
    } catch (const std::exception& e) {
        add("2 ms run completes", false, e.what());
    }
    return out;
}

int cmd_check(const AppOptions& options, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_checks(options.covariance_vacuum);
    bool ok = true;
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        ok &= r.passed;
        out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << r.name << "  "
            << r.detail << '\n';
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!options.quiet) out << (ok ? "all checks passed" : "some checks failed") << " in " << fixed(wall, 3) << " s\n";
    return ok ? exit_success : exit_check;
}

} // namespace atomlight
