// scenario.cpp

#include "tqme/scenario.hpp"

#include "tqme/two_level.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string_view>

namespace tqme::cli {

namespace {

// TQME_LOG=quiet|info|debug; default info.
int log_level() {
    static const int level = [] {
        const char* env = std::getenv("TQME_LOG");
        if (!env) return 1;
        const std::string_view v(env);
        if (v == "quiet") return 0;
        if (v == "debug") return 2;
        return 1;
    }();
    return level;
}

void log(int level, const std::string& msg) {
    if (level <= log_level()) std::cerr << "[tqme] " << msg << '\n';
}

HeatBath make_bath(const config::Environment& env, double gamma0, double omega_ref) {
    if (const auto* inf = std::get_if<config::InfiniteBath>(&env.bath)) {
        return HeatBath::infinite(inf->T_e, gamma0, omega_ref);
    }
    const auto& f = std::get<config::FiniteBath>(env.bath);
    return HeatBath::finite(f.C_e, f.H_e0, f.H_ref, gamma0, omega_ref);
}

}  // namespace

Scenario build_scenario(const config::SimulationConfig& cfg) {
    using namespace config;
    cfg.constants.validate();
    try {
        if (const auto* tl = std::get_if<TwoLevelSystem>(&cfg.system)) {
            HeatBath bath = make_bath(cfg.environment, tl->gamma0, tl->omega);
            two_level::TwoLevelParams p;
            p.omega = tl->omega;
            p.gamma0 = tl->gamma0;
            p.T_e = bath.temperature();
            p.isotropic = tl->isotropic;
            p.q3_multiplier = tl->q3_multiplier;
            p.constants = cfg.constants;
            QuantumSystem sys = two_level::make_system(p);
            refresh_bath_rates(sys, bath);

            Matrix rho0 = Matrix::Identity(2, 2) / 2.0;
            if (const auto* b = std::get_if<BlochInitial>(&cfg.initial)) {
                rho0 = two_level::pauli_compose(1.0, b->m);
            } else if (const auto* m = std::get_if<MatrixInitial>(&cfg.initial)) {
                rho0 = m->rho;
            } else if (const auto* e = std::get_if<EquilibriumInitial>(&cfg.initial)) {
                rho0 = equilibrium_state(sys.H, e->T, cfg.constants).matrix();
            }
            return Scenario{DensityMatrix(rho0), bath, std::move(sys), cfg.integrator, true, p};
        }

        const auto& g = std::get<GenericSystem>(cfg.system);
        HeatBath bath = make_bath(cfg.environment, cfg.environment.gamma0.value_or(0.0),
                                  cfg.environment.omega_ref.value_or(1.0));
        QuantumSystem sys{HermitianObservable(g.hamiltonian), {}, cfg.constants};
        for (const auto& ch : g.channels) {
            if (ch.use_bath_bracket) {
                sys.channels.push_back(CouplingChannel::from_bath(HermitianObservable(ch.Q), ch.bath_scale));
            } else {
                sys.channels.emplace_back(HermitianObservable(ch.Q), *ch.friction_rate, *ch.diffusion_rate);
            }
        }
        refresh_bath_rates(sys, bath);
        const Eigen::Index n = g.hamiltonian.rows();
        Matrix rho0 = Matrix::Identity(n, n) / static_cast<double>(n);
        if (const auto* m = std::get_if<MatrixInitial>(&cfg.initial)) {
            rho0 = m->rho;
        } else if (const auto* e = std::get_if<EquilibriumInitial>(&cfg.initial)) {
            rho0 = equilibrium_state(sys.H, e->T, cfg.constants).matrix();
        }
        return Scenario{DensityMatrix(rho0), bath, std::move(sys), cfg.integrator, false, std::nullopt};
    } catch (const std::invalid_argument& e) {
        throw ConfigError("$", e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError("$", e.what());
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::vector<std::string> csv_header(const Scenario& s) {
    std::vector<std::string> cols{"t"};
    if (s.two_level) {
        cols.insert(cols.end(), {"m1", "m2", "m3"});
    } else {
        const Eigen::Index n = s.system.dim();
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                const std::string idx = std::to_string(i + 1) + "_" + std::to_string(j + 1);
                cols.push_back("rho_" + idx + "_re");
                cols.push_back("rho_" + idx + "_im");
            }
        }
    }
    if (s.bath0.kind() == HeatBath::Kind::finite) cols.insert(cols.end(), {"H_e", "T_e"});
    cols.insert(cols.end(), {"total_energy", "total_entropy", "min_eig", "trace_err"});
    return cols;
}

void write_csv(std::ostream& out, const Trajectory& traj, const Scenario& s, int stride) {
    const auto header = csv_header(s);
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    const bool finite = s.bath0.kind() == HeatBath::Kind::finite;
    const std::size_t n_points = traj.points.size();
    for (std::size_t k = 0; k < n_points; ++k) {
        if (k % static_cast<std::size_t>(stride) != 0 && k + 1 != n_points) continue;
        const auto& p = traj.points[k];
        std::vector<double> row{p.t};
        if (s.two_level) {
            const Matrix h = 0.5 * (p.rho + p.rho.adjoint());
            const auto pv = two_level::pauli_decompose(h);
            row.insert(row.end(), {pv.a(0), pv.a(1), pv.a(2)});
        } else {
            const Eigen::Index n = p.rho.rows();
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = i; j < n; ++j) {
                    row.push_back(p.rho(i, j).real());
                    row.push_back(p.rho(i, j).imag());
                }
            }
        }
        if (finite) {
            row.push_back(p.env ? p.env->H_e : 0.0);
            row.push_back(p.env ? p.env->T_e : 0.0);
        }
        row.insert(row.end(), {p.monitors.total_energy, p.monitors.total_entropy, p.monitors.min_eig,
                               p.monitors.trace_err});
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

void write_mu_table(std::ostream& out, double min, double max, int steps) {
    if (!(min >= 0.0) || !(max < 1.0) || !(min < max)) {
        throw std::domain_error("mu-table: need 0 <= min < max < 1");
    }
    if (steps < 2) throw std::domain_error("mu-table: need at least 2 steps");
    out << "m,mu\n";
    const double h = (max - min) / (steps - 1);
    for (int k = 0; k < steps; ++k) {
        const double m = k + 1 == steps ? max : min + k * h;
        out << format_number(m) << ',' << format_number(two_level::mu(m)) << '\n';
    }
}

Comparison compare_variants(const Scenario& s) {
    IntegratorConfig nl_cfg = s.integrator;
    nl_cfg.variant = Variant::nonlinear;
    IntegratorConfig lin_cfg = s.integrator;
    lin_cfg.variant = Variant::linearized;

    auto nl = std::async(std::launch::async, [&] { return simulate(s.rho0, s.bath0, s.system, nl_cfg); });
    auto lin = std::async(std::launch::async, [&] { return simulate(s.rho0, s.bath0, s.system, lin_cfg); });

    Comparison c{nl.get(), lin.get(), {}, {}};
    const std::size_t common = std::min(c.nonlinear.points.size(), c.linearized.points.size());
    for (std::size_t k = 0; k < common; ++k) {
        const auto& a = c.nonlinear.points[k];
        const auto& b = c.linearized.points[k];
        const double d = (a.rho - b.rho).cwiseAbs().maxCoeff();
        c.delta.emplace_back(a.t, d);
        c.summary.max_abs_delta_rho = std::max(c.summary.max_abs_delta_rho, d);
    }
    auto& sum = c.summary;
    sum.nonlinear_completed = c.nonlinear.termination == Termination::completed;
    sum.linearized_completed = c.linearized.termination == Termination::completed;
    sum.nonlinear_detail = c.nonlinear.violation_detail;
    sum.linearized_detail = c.linearized.violation_detail;
    if (s.params) {
        const double x = s.params->x();
        sum.x = x;
        auto final_m3 = [](const Trajectory& t) {
            const Matrix h = 0.5 * (t.points.back().rho + t.points.back().rho.adjoint());
            return two_level::pauli_decompose(h).a(2);
        };
        sum.nonlinear_final_m3 = final_m3(c.nonlinear);
        sum.linearized_final_m3 = final_m3(c.linearized);
        sum.nonlinear_steady_m3 = -std::tanh(x);
        sum.linearized_steady_m3 = -x;
        sum.linearized_leaves_sphere = x > 1.0 || !sum.linearized_completed;
    }
    return c;
}

namespace {

bool write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path);
    if (!out) {
        log(0, "cannot open " + path + " for writing");
        return false;
    }
    body(out);
    return static_cast<bool>(out);
}

nlohmann::json summary_json(const ComparisonSummary& s) {
    nlohmann::json j{{"max_abs_delta_rho", s.max_abs_delta_rho},
                     {"nonlinear_completed", s.nonlinear_completed},
                     {"linearized_completed", s.linearized_completed},
                     {"nonlinear_detail", s.nonlinear_detail},
                     {"linearized_detail", s.linearized_detail}};
    if (s.x) {
        j["x"] = *s.x;
        j["nonlinear_final_m3"] = *s.nonlinear_final_m3;
        j["linearized_final_m3"] = *s.linearized_final_m3;
        j["nonlinear_steady_m3"] = *s.nonlinear_steady_m3;
        j["linearized_steady_m3"] = *s.linearized_steady_m3;
        j["linearized_leaves_sphere"] = *s.linearized_leaves_sphere;
        j["steady_state_gap"] = std::abs(*s.nonlinear_steady_m3 - *s.linearized_steady_m3);
    }
    return j;
}

}  // namespace

int run_command(const std::string& config_path, const std::optional<std::string>& out_path) {
    std::optional<Scenario> scenario;
    config::SimulationConfig cfg;
    try {
        cfg = config::load_config(config_path);
        scenario.emplace(build_scenario(cfg));
    } catch (const config::ConfigError& e) {
        log(0, std::string("config error: ") + e.what());
        return kExitConfigError;
    }
    const std::string path = out_path.value_or(cfg.output.path);
    log(1, "running " + config_path + " (" + config::to_string(scenario->integrator.variant) + ")");
    const Trajectory traj = simulate(scenario->rho0, scenario->bath0, scenario->system, scenario->integrator);
    if (!write_file(path, [&](std::ostream& o) { write_csv(o, traj, *scenario, cfg.output.stride); })) {
        return kExitConfigError;
    }
    if (traj.termination == Termination::monitor_violation) {
        log(0, "monitor violation: " + traj.violation_detail);
        return kExitMonitorViolation;
    }
    log(1, "wrote " + std::to_string(traj.points.size()) + " points to " + path);
    return kExitOk;
}

int mu_table_command(double min, double max, int steps, const std::string& out_path) {
    std::ostringstream buf;
    try {
        write_mu_table(buf, min, max, steps);
    } catch (const std::domain_error& e) {
        log(0, e.what());
        return kExitConfigError;
    }
    if (!write_file(out_path, [&](std::ostream& o) { o << buf.str(); })) return kExitConfigError;
    return kExitOk;
}

int compare_command(const std::string& config_path, const std::string& out_dir) {
    std::optional<Scenario> scenario;
    config::SimulationConfig cfg;
    try {
        cfg = config::load_config(config_path);
        scenario.emplace(build_scenario(cfg));
    } catch (const config::ConfigError& e) {
        log(0, std::string("config error: ") + e.what());
        return kExitConfigError;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        log(0, "cannot create " + out_dir + ": " + ec.message());
        return kExitConfigError;
    }
    const Comparison c = compare_variants(*scenario);
    const std::filesystem::path dir(out_dir);
    const int stride = cfg.output.stride;
    bool ok = write_file((dir / "nonlinear.csv").string(),
                         [&](std::ostream& o) { write_csv(o, c.nonlinear, *scenario, stride); });
    ok = ok && write_file((dir / "linearized.csv").string(),
                          [&](std::ostream& o) { write_csv(o, c.linearized, *scenario, stride); });
    ok = ok && write_file((dir / "delta.csv").string(), [&](std::ostream& o) {
        o << "t,max_abs_delta_rho\n";
        for (const auto& [t, d] : c.delta) o << format_number(t) << ',' << format_number(d) << '\n';
    });
    const auto summary = summary_json(c.summary);
    ok = ok && write_file((dir / "summary.json").string(), [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
    if (!ok) return kExitConfigError;
    std::cout << summary.dump(2) << '\n';
    if (!c.summary.nonlinear_completed || !c.summary.linearized_completed) return kExitMonitorViolation;
    return kExitOk;
}

}  // namespace tqme::cli
