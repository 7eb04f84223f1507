// integrator.hpp: fixed-step time integration of the coupled quantum / heat-bath
// system with structure monitors (trace, hermiticity, positivity, energy, entropy).

#pragma once

#include "tqme/environment.hpp"
#include "tqme/master_equation.hpp"
#include "tqme/operator_core.hpp"
#include "tqme/two_level.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tqme {

enum class Method { rk4, euler };

struct MonitorTolerances {
    double trace{1e-10};
    double hermiticity{1e-10};
    double positivity{1e-9};  // allowed magnitude of a negative eigenvalue
    double energy{1e-8};      // relative; checked only for finite baths
};

struct IntegratorConfig {
    double dt{1e-3};
    double t_end{1.0};
    Method method{Method::rk4};
    int monitor_every{1};
    MonitorTolerances tolerances{};
    Variant variant{Variant::nonlinear};

    void validate() const;
    long long steps() const;
};

struct Monitors {
    double trace_err{0.0};
    double herm_err{0.0};
    double min_eig{0.0};
    double total_energy{0.0};   // <H> + H_e; for an infinite bath H_e is the heat absorbed so far
    double total_entropy{0.0};  // S_e - k_B tr(rho ln rho)
};

struct TrajectoryPoint {
    double t{0.0};
    Matrix rho;
    std::optional<EnvironmentObservableReport> env;
    Monitors monitors;
};

enum class Termination { completed, monitor_violation };

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    IntegratorConfig config;
    Termination termination{Termination::completed};
    std::string violation_detail;
};

struct CoupledState {
    Matrix rho;
    HeatBath bath;
};

/// One explicit step of the joint ODE for (rho, H_e). Bath-driven channel rates are
/// re-evaluated from each stage's bath energy; the result is re-Hermitized.
CoupledState step(const CoupledState& state, const QuantumSystem& sys, double dt, Method method,
                  Variant variant = Variant::nonlinear);

Monitors measure(const CoupledState& state, const QuantumSystem& sys);

Trajectory simulate(const DensityMatrix& rho0, const HeatBath& bath0, const QuantumSystem& sys,
                    const IntegratorConfig& cfg);

struct BlochSample {
    double t{0.0};
    two_level::Vec3 m;
};

// Same stepping scheme applied directly to the Bloch equation; sampled every monitor_every steps.
std::vector<BlochSample> integrate_bloch(const two_level::Vec3& m0,
                                         const two_level::TwoLevelParams& params,
                                         const IntegratorConfig& cfg);

}  // namespace tqme
