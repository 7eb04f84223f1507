// scenario.hpp: turns a SimulationConfig into runnable objects and implements the
// command-line operations (run, mu-table, compare) and their CSV output.

#pragma once

#include "tqme/config.hpp"
#include "tqme/environment.hpp"
#include "tqme/integrator.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tqme::cli {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 1, kExitMonitorViolation = 2 };

struct Scenario {
    DensityMatrix rho0;
    HeatBath bath0;
    QuantumSystem system;
    IntegratorConfig integrator;
    bool two_level{false};
    std::optional<two_level::TwoLevelParams> params;  // set for two-level systems
};

// Throws config::ConfigError on inconsistent input.
Scenario build_scenario(const config::SimulationConfig& cfg);

// Scientific notation with 17 significant digits, '.' decimal separator.
std::string format_number(double v);

std::vector<std::string> csv_header(const Scenario& s);
void write_csv(std::ostream& out, const Trajectory& traj, const Scenario& s, int stride);

void write_mu_table(std::ostream& out, double min, double max, int steps);

struct ComparisonSummary {
    double max_abs_delta_rho{0.0};
    bool nonlinear_completed{true};
    bool linearized_completed{true};
    std::string nonlinear_detail;
    std::string linearized_detail;
    // two-level only
    std::optional<double> x;
    std::optional<double> nonlinear_final_m3;
    std::optional<double> linearized_final_m3;
    std::optional<double> nonlinear_steady_m3;   // -tanh x
    std::optional<double> linearized_steady_m3;  // -x
    std::optional<bool> linearized_leaves_sphere;
};

struct Comparison {
    Trajectory nonlinear;
    Trajectory linearized;
    std::vector<std::pair<double, double>> delta;  // (t, max |rho_nl - rho_lin|)
    ComparisonSummary summary;
};

// Runs both variants from identical initial data, concurrently.
Comparison compare_variants(const Scenario& s);

// Command entry points; return process exit codes.
int run_command(const std::string& config_path, const std::optional<std::string>& out_path);
int mu_table_command(double min, double max, int steps, const std::string& out_path);
int compare_command(const std::string& config_path, const std::string& out_dir);

}  // namespace tqme::cli
