#pragma once

#include "atomlight/propagator.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace atomlight {

// ---- TOML subset ------------------------------------------------------------
// Tables, dotted table headers, and key = value with numbers, booleans, strings
// and single-line arrays of numbers. Enough for run files; no inline tables.

using TomlValue = std::variant<double, bool, std::string, std::vector<double>>;

struct TomlEntry {
    TomlValue value;
    int line = 0;
    bool is_integer = false;
};

// "table.key" -> entry
using TomlDocument = std::map<std::string, TomlEntry>;

// Throws ValidationError("<source>:<line>: ...") on malformed input or duplicate keys.
TomlDocument parse_toml(const std::string& text, const std::string& source = "<string>");

// ---- run configuration ------------------------------------------------------

enum class DetuningMode {
    Fixed,     // physics.delta2 as written
    Estimate,  // resonance_estimate()
    Calibrate, // golden-section search before the run, seeded by the estimate
};

enum class SweepPath { Simulation, Oracle };

struct SweepAxis {
    std::string name; // physics key, or eta / r / theta_sq on the oracle path
    std::vector<double> values;
};

struct RunConfig {
    Scenario scenario;
    DetuningMode detuning = DetuningMode::Calibrate;
    std::size_t input_bins = 40;
    std::string output_dir = "out";
    bool plots = true;
    std::size_t workers = 0; // 0 = hardware concurrency
    std::uint64_t seed = 0;  // reserved; the dynamics are deterministic

    SweepPath sweep_path = SweepPath::Simulation;
    double sweep_eta = 0.5;
    std::vector<SweepAxis> axes;
};

// Names accepted for sweep axes on each path.
const std::vector<std::string>& simulation_axis_names();
const std::vector<std::string>& oracle_axis_names();

// Sets one physics parameter by its config key. Throws ValidationError for unknown names.
void set_physics_parameter(PhysicalParams& params, const std::string& name, double value);
double get_physics_parameter(const PhysicalParams& params, const std::string& name);

// Builds input modes from input_bins and resolves delta2 for the Fixed and Estimate
// modes. Calibrate leaves the estimate in place; cmd_run refines it.
void resolve(RunConfig& config);

RunConfig parse_config_text(const std::string& text, const std::string& source = "<string>");
RunConfig parse_config(const std::string& path);

// TOML text that parses back to an equal configuration (all doubles at %.17g).
std::string emit_config(const RunConfig& config);

bool operator==(const Scenario& a, const Scenario& b);

} // namespace atomlight
