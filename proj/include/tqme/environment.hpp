// environment.hpp: heat-bath environments, their dissipative brackets, and the
// energy balance that couples them to the quantum subsystem.

#pragma once

#include "tqme/master_equation.hpp"
#include "tqme/operator_core.hpp"

#include <stdexcept>

namespace tqme {

class NotApplicableError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Classical heat bath characterised by its energy H_e.
///
/// An infinite bath keeps T_e fixed; its energy is the heat absorbed since t = 0
/// and its entropy is that heat divided by T_e. A finite bath has constant heat
/// capacity C_e, so S_e = C_e ln(H_e / H_ref) and T_e = H_e / C_e.
class HeatBath {
public:
    enum class Kind { infinite, finite };

    static HeatBath infinite(double temperature, double gamma0, double omega_ref);
    static HeatBath finite(double heat_capacity, double energy, double reference_energy,
                           double gamma0, double omega_ref);

    Kind kind() const noexcept { return kind_; }
    double energy() const noexcept { return energy_; }
    double gamma0() const noexcept { return gamma0_; }
    double omega_ref() const noexcept { return omega_ref_; }
    double heat_capacity() const noexcept { return heat_capacity_; }
    double reference_energy() const noexcept { return reference_energy_; }

    double temperature() const;
    double entropy() const;

    HeatBath with_energy(double energy) const;

private:
    HeatBath() = default;
    void validate() const;

    Kind kind_{Kind::infinite};
    double fixed_temperature_{1.0};
    double heat_capacity_{0.0};
    double reference_energy_{1.0};
    double energy_{0.0};
    double gamma0_{0.0};
    double omega_ref_{1.0};
};

struct BracketRates {
    double friction{0.0};   // {H_e, S_e}
    double diffusion{0.0};  // {H_e, H_e}
};

struct EnvironmentObservableReport {
    double H_e{0.0};
    double T_e{0.0};
    double S_e{0.0};
    double energy_flux_to_quantum{0.0};
};

double temperature(const HeatBath& bath);

// {A, B} = A'(H_e) gamma0 k_B T_e / (hbar omega) B'(H_e), evaluated for (H_e, S_e) and (H_e, H_e).
BracketRates channel_rates(const HeatBath& bath, const PhysicalConstants& constants);

// Copy of sys with every bath-driven channel's rates evaluated at the bath's current state.
QuantumSystem with_bath_rates(QuantumSystem sys, const HeatBath& bath);
void refresh_bath_rates(QuantumSystem& sys, const HeatBath& bath);

/// dH_e/dt. For a heat bath the Poisson term and the internal dissipative term vanish
/// by degeneracy, leaving only the exchange with the quantum subsystem:
///   -(1/k_B) sum_j {H_e,S_e}^j <<[H,Q_j];[H,Q_j]>> + sum_j {H_e,H_e}^j <[Q_j,[Q_j,H]]>.
/// Uses the rates stored in sys.
double environment_rhs(const HeatBath& bath, const DensityMatrix& rho, const QuantumSystem& sys,
                       Variant variant = Variant::nonlinear);
double environment_rhs_unchecked(const Matrix& rho, const QuantumSystem& sys, Variant variant);

EnvironmentObservableReport environment_report(const HeatBath& bath, const DensityMatrix& rho,
                                               const QuantumSystem& sys,
                                               Variant variant = Variant::nonlinear);

// tr(H rho) + H_e. Throws NotApplicableError for an infinite bath.
double total_energy(const HeatBath& bath, const DensityMatrix& rho, const HermitianObservable& H);

}  // namespace tqme
