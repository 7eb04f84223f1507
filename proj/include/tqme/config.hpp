// config.hpp: JSON simulation configuration: schema, parsing with field-path
// diagnostics, and serialization back to JSON.

#pragma once

#include "tqme/integrator.hpp"
#include "tqme/master_equation.hpp"
#include "tqme/operator_core.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tqme::config {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct TwoLevelSystem {
    double omega{1.0};
    double gamma0{0.0};
    bool isotropic{false};
    double q3_multiplier{1.0};
};

struct GenericChannel {
    Matrix Q;
    std::optional<double> friction_rate;
    std::optional<double> diffusion_rate;
    bool use_bath_bracket{false};
    double bath_scale{1.0};
};

struct GenericSystem {
    Matrix hamiltonian;
    std::vector<GenericChannel> channels;
};

struct InfiniteBath {
    double T_e{1.0};
};

struct FiniteBath {
    double C_e{1.0};
    double H_e0{1.0};
    double H_ref{1.0};
};

struct Environment {
    std::variant<InfiniteBath, FiniteBath> bath;
    std::optional<double> gamma0;     // required for generic systems using the bath bracket
    std::optional<double> omega_ref;  // idem
};

struct BlochInitial {
    Eigen::Vector3d m{Eigen::Vector3d::Zero()};
};
struct MatrixInitial {
    Matrix rho;
};
struct MaximallyMixedInitial {};
struct EquilibriumInitial {
    double T{1.0};
};
using InitialState = std::variant<MaximallyMixedInitial, BlochInitial, MatrixInitial, EquilibriumInitial>;

struct Output {
    std::string path{"trajectory.csv"};
    int stride{1};
};

struct SimulationConfig {
    std::variant<TwoLevelSystem, GenericSystem> system;
    Environment environment;
    PhysicalConstants constants{};
    IntegratorConfig integrator{};
    InitialState initial{MaximallyMixedInitial{}};
    Output output{};

    bool is_two_level() const { return std::holds_alternative<TwoLevelSystem>(system); }
    bool has_finite_bath() const { return std::holds_alternative<FiniteBath>(environment.bath); }
};

SimulationConfig parse_config(const nlohmann::json& doc);
SimulationConfig load_config(const std::string& path);
nlohmann::json to_json(const SimulationConfig& cfg);

// [[ [re, im], ... ], ... ]
Matrix parse_complex_matrix(const nlohmann::json& j, const std::string& path);
nlohmann::json complex_matrix_to_json(const Matrix& m);

const char* to_string(Variant v);
const char* to_string(Method m);

}  // namespace tqme::config
