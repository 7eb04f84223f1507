// tqme: command-line driver: run, mu-table, compare

#include "tqme/scenario.hpp"

#include <CLI11.hpp>

#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Thermodynamic quantum master equation simulator"};
    app.require_subcommand(1);

    std::string run_config;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Integrate one configured scenario and write a CSV trajectory");
    run->add_option("--config", run_config, "JSON configuration file")->required();
    run->add_option("--out", run_out, "Output CSV (overrides output.path)");

    double mu_min = 0.0;
    double mu_max = 0.999;
    int mu_steps = 1000;
    std::string mu_out;
    auto* mu = app.add_subcommand("mu-table", "Tabulate mu(m) on an evenly spaced grid");
    mu->add_option("--min", mu_min, "Smallest m")->required();
    mu->add_option("--max", mu_max, "Largest m (< 1)")->required();
    mu->add_option("--steps", mu_steps, "Number of grid points (>= 2)")->required();
    mu->add_option("--out", mu_out, "Output CSV")->required();

    std::string cmp_config;
    std::string cmp_dir;
    auto* cmp = app.add_subcommand("compare", "Run nonlinear and linearized variants side by side");
    cmp->add_option("--config", cmp_config, "JSON configuration file")->required();
    cmp->add_option("--out-dir", cmp_dir, "Directory for both trajectories and the summary")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tqme::cli::kExitConfigError;
    }

    if (*run) {
        return tqme::cli::run_command(run_config, run_out.empty() ? std::nullopt : std::optional(run_out));
    }
    if (*mu) return tqme::cli::mu_table_command(mu_min, mu_max, mu_steps, mu_out);
    return tqme::cli::compare_command(cmp_config, cmp_dir);
}
