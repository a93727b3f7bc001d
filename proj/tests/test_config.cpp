#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atomlight/config.hpp"
#include "atomlight/error.hpp"

#include <string>

using namespace atomlight;

namespace {

const std::string minimal = R"(
[physics]
mass = 1.4e-25
g13 = 2.9e5
delta = 1e11
omega23 = 0.75e8
omega_trap = 5.0
n_atoms = 1e6
probe_flux = 2.9e6
r = 2.0
)";

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text, "run.toml");
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("shipped entanglement configuration") {
    const auto cfg = parse_config(ATOMLIGHT_CONFIGS "/entanglement.toml");
    const auto& p = cfg.scenario.params;
    CHECK(p.m == 1.4e-25);
    CHECK(p.g13 == 2.9e5);
    CHECK(p.delta == 1e11);
    CHECK(p.n_atoms == 1e6);
    CHECK(p.omega_trap == 5.0);
    CHECK(p.probe_flux == 2.9e6);
    CHECK(p.r == 2.0);
    CHECK(p.omega23 == 0.75e8);
    CHECK(cfg.detuning == DetuningMode::Calibrate);
    CHECK(cfg.input_bins == 40);
    CHECK(cfg.scenario.input_modes.size() == 40);
    CHECK(cfg.scenario.duration == 0.04);
}

TEST_CASE("minimal configuration takes defaults") {
    const auto cfg = parse_config_text(minimal);
    const Scenario defaults;
    CHECK(cfg.scenario.grid.n_points == defaults.grid.n_points);
    CHECK(cfg.scenario.grid.dt == defaults.grid.dt);
    CHECK(cfg.scenario.duration == defaults.duration);
    CHECK(cfg.scenario.detection.x1 == defaults.detection.x1);
    CHECK(cfg.scenario.params.k0 == defaults.params.k0);
    CHECK(cfg.scenario.params.theta_sq == 0.0);
    CHECK(cfg.detuning == DetuningMode::Calibrate);
    // the detuning is seeded with the estimate until calibration refines it
    CHECK(cfg.scenario.params.delta2 == resonance_estimate(cfg.scenario.params, cfg.scenario.options));
    CHECK(cfg.axes.empty());
}

TEST_CASE("validation errors") {
    std::string text = minimal;
    text.replace(text.find("delta = 1e11"), 12, "delta = 1e6");
    CHECK(error_of(text).find("delta") != std::string::npos);

    CHECK(error_of(minimal + "colour = 3\n").find("physics.colour: unknown key (run.toml:11)") != std::string::npos);
    CHECK(error_of(minimal + "[grid]\npoints = 4000\n").find("grid.points") != std::string::npos);
    CHECK(error_of(minimal + "[run]\nduration = = 2\n").find("run.toml:12") != std::string::npos);
    CHECK(error_of(minimal + "r = 1.0\n").find("duplicate key") != std::string::npos);
    CHECK(error_of("[physics]\nmass = 1.4e-25\n").find("required") != std::string::npos);
    CHECK(error_of(minimal + "delta2 = 97000\n[run]\ndetuning = \"calibrate\"\n").find("physics.delta2") !=
          std::string::npos);
    CHECK(error_of(minimal + "[input]\nbins = 0\n").find("input.bins") != std::string::npos);
}

TEST_CASE("a fixed detuning is taken as written") {
    const auto cfg = parse_config_text(minimal + "delta2 = 41500.5\n");
    CHECK(cfg.detuning == DetuningMode::Fixed);
    CHECK(cfg.scenario.params.delta2 == 41500.5);
}

TEST_CASE("emitted configuration parses back unchanged") {
    auto cfg = parse_config(ATOMLIGHT_CONFIGS "/entanglement.toml");
    cfg.scenario.params.delta2 = 41504.681234567891;
    cfg.detuning = DetuningMode::Fixed;
    cfg.scenario.detection.lo_phase_atom = 0.1 + 0.2;
    const auto back = parse_config_text(emit_config(cfg), "emitted");
    CHECK(back.scenario == cfg.scenario);
    CHECK(back.detuning == DetuningMode::Fixed);
    CHECK(back.input_bins == cfg.input_bins);
    CHECK(back.output_dir == cfg.output_dir);
    CHECK(emit_config(back) == emit_config(cfg));

    auto sweep = parse_config(ATOMLIGHT_CONFIGS "/sweep_omega23.toml");
    const auto again = parse_config_text(emit_config(sweep));
    REQUIRE(again.axes.size() == sweep.axes.size());
    CHECK(again.axes[0].name == sweep.axes[0].name);
    CHECK(again.axes[0].values == sweep.axes[0].values);
}

TEST_CASE("sweep axes") {
    const auto ok = parse_config_text(minimal + "[sweep.axes]\nomega23 = [0.5e8, 1e8]\nr = [0, 1, 2]\n");
    CHECK(ok.axes.size() == 2);

    CHECK(error_of(minimal + "[sweep.axes]\ncolour = [1, 2]\n").find("sweep.axes.colour") != std::string::npos);
    CHECK(error_of(minimal + "[sweep.axes]\nr = []\n").find("no values") != std::string::npos);
    CHECK(error_of(minimal + "[sweep.axes]\nr = 2\n").find("expected an array") != std::string::npos);
    CHECK(error_of(minimal + "[sweep]\npath = \"oracle\"\n[sweep.axes]\nomega23 = [1e8]\n").find("sweepable") !=
          std::string::npos);

    const auto oracle = parse_config(ATOMLIGHT_CONFIGS "/oracle_r.toml");
    CHECK(oracle.sweep_path == SweepPath::Oracle);
    REQUIRE(oracle.axes.size() == 1);
    CHECK(oracle.axes[0].values.size() == 13);
}

TEST_CASE("toml subset") {
    const auto doc = parse_toml("# c\n[a]\nx = 3 # n\ny = \"s # t\"\n[a.b]\nz = [1, 2.5, -3e2]\nw = true\n");
    CHECK(std::get<double>(doc.at("a.x").value) == 3.0);
    CHECK(doc.at("a.x").is_integer);
    CHECK(std::get<std::string>(doc.at("a.y").value) == "s # t");
    CHECK(std::get<std::vector<double>>(doc.at("a.b.z").value) == std::vector<double>{1, 2.5, -300});
    CHECK(std::get<bool>(doc.at("a.b.w").value));
    CHECK(doc.at("a.b.w").line == 7);
    CHECK_THROWS_AS(parse_toml("[a]\n[a]\n"), ValidationError);
    CHECK_THROWS_AS(parse_toml("x = [1, 2\n"), ValidationError);
}
