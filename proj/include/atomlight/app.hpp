#pragma once

#include "atomlight/config.hpp"
#include "atomlight/oracle.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace atomlight {

enum ExitCode : int {
    exit_success = 0,
    exit_validation = 1,
    exit_integration = 2,
    exit_check = 3,
};

struct AppOptions {
    std::string out_dir;                  // --out; wins over the environment and the config
    std::optional<std::size_t> snapshots; // --snapshots
    std::optional<std::size_t> workers;   // --workers
    bool quiet = false;
    double covariance_vacuum = 1.0;       // mutation hook for `check`
};

// Environment variable that overrides output.directory.
inline constexpr const char* output_dir_env = "ATOMLIGHT_OUTPUT_DIR";

std::string output_directory(const RunConfig& config, const AppOptions& options);

// Extremal and final figures of one simulation run. NaN marks "no sample".
struct RunMetrics {
    double delta2 = 0.0;
    std::size_t samples = 0;
    double min_product = 1.0;
    double t_min_product = 0.0;
    double vinf_x_plus_at_min = 1.0;
    double vinf_x_minus_at_min = 1.0;
    double min_vinf_x_plus = 1.0;
    double min_v_x_plus = 1.0;
    double t_min_v_x_plus = 0.0;
    double final_v_x_plus = 1.0;
    double final_v_y_plus = 1.0;
    double min_v_y_plus = 1.0;
    double min_uncertainty = 1.0; // over V(X+)V(X-) and V(Y+)V(Y-)
    double min_symplectic = 1.0;
    double atom_ledger = 0.0;       // relative, condensate + beam + absorbed vs N
    double excitation_ledger = 0.0; // relative, photons in vs atoms made + photons out
    double column_ledger = 0.0;     // largest |norm - 1| over fully injected columns
    bool failed = false;
    std::string failure;
};

struct RunOutcome {
    Scenario scenario; // with delta2 resolved
    Trajectory trajectory;
    std::vector<GaussianSummary> summaries;
    RunMetrics metrics;
};

// Resolve the detuning (calibrating if asked), integrate and summarize. No files.
RunOutcome execute_run(const RunConfig& config, bool quiet = true, std::ostream* log = nullptr);

RunMetrics compute_metrics(const Trajectory& trajectory, const Scenario& scenario,
                           const std::vector<GaussianSummary>& summaries);

int cmd_run(RunConfig config, const AppOptions& options, std::ostream& log);
int cmd_sweep(RunConfig config, const AppOptions& options, std::ostream& log);
int cmd_calibrate(RunConfig config, const AppOptions& options, std::ostream& out);
int cmd_oracle(const BeamSplitterCase& bs, std::ostream& out);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_checks(double covariance_vacuum = 1.0);
int cmd_check(const AppOptions& options, std::ostream& out);

// Metric names written per run by cmd_sweep, in order.
const std::vector<std::string>& sweep_metrics(SweepPath path);

} // namespace atomlight
