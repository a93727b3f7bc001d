// atomlight: command-line front end for the Raman outcoupler simulator.

#include "atomlight/app.hpp"
#include "atomlight/error.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace atomlight;

int main(int argc, char** argv) {
    CLI::App app{"Squeezed-light Raman outcoupler: atom-laser / light entanglement simulator"};
    app.require_subcommand(1);

    AppOptions opts;
    std::size_t snapshots = 0;
    std::size_t workers = 0;
    app.add_option("--out", opts.out_dir, "Output directory (overrides ATOMLIGHT_OUTPUT_DIR and the config)");
    auto* snap_opt = app.add_option("--snapshots", snapshots, "Snapshots after the initial state");
    auto* work_opt = app.add_option("--workers", workers, "Parallel runs for sweeps (0 = all cores)");
    app.add_flag("--quiet", opts.quiet, "Only print results");
    app.add_option("--mutate-covariance", opts.covariance_vacuum)->group(""); // self-check hook

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run one scenario and write CSV, JSON and SVG output");
    run->add_option("config", config_path, "TOML run file")->required();
    auto* sweep = app.add_subcommand("sweep", "Run the cross product of the configured sweep axes");
    sweep->add_option("config", config_path, "TOML run file")->required();
    auto* calibrate = app.add_subcommand("calibrate", "Search the two-photon detuning for maximal outcoupling");
    calibrate->add_option("config", config_path, "TOML run file")->required();
    auto* check = app.add_subcommand("check", "Fast invariant suite");

    BeamSplitterCase bs;
    auto* oracle = app.add_subcommand("oracle", "Closed-form beam-splitter statistics");
    oracle->add_option("--eta", bs.eta, "Share of the squeezed mode sent to the atoms")->required();
    oracle->add_option("--r", bs.r, "Squeezing parameter")->required();
    oracle->add_option("--theta", bs.theta_sq, "Squeezing angle (rad)");

    // CLI11 puts global options before or after the subcommand alike
    for (auto* sub : {run, sweep, calibrate, check, oracle}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_success : exit_validation;
    }
    if (*snap_opt) opts.snapshots = snapshots;
    if (*work_opt) opts.workers = workers;

    try {
        if (*oracle) return cmd_oracle(bs, std::cout);
        if (*check) return cmd_check(opts, std::cout);
        RunConfig cfg = parse_config(config_path);
        if (*run) return cmd_run(std::move(cfg), opts, std::cerr);
        if (*sweep) return cmd_sweep(std::move(cfg), opts, std::cerr);
        if (*calibrate) return cmd_calibrate(std::move(cfg), opts, std::cout);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const CalibrationError& e) {
        std::cerr << "calibration failed: " << e.what() << '\n';
        return exit_validation;
    } catch (const IntegrationError& e) {
        std::cerr << "integration failed: " << e.what() << '\n';
        return exit_integration;
    }
    return exit_success;
}
