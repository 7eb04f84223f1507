// master_equation.hpp: right-hand side of the thermodynamic quantum master equation,
// its linearized variant, and the canonical equilibrium state.

#pragma once

#include "tqme/operator_core.hpp"

#include <vector>

namespace tqme {

enum class Variant { nonlinear, linearized };

// Where a channel's bracket values come from during time stepping.
enum class RateSource {
    fixed,         // friction_rate / diffusion_rate as given
    bath_bracket,  // re-evaluated from the heat bath state, times bath_scale
};

/// Coupling operator Q_j with the current values of its two dissipative brackets:
/// friction_rate = {H_e, S_e}^j and diffusion_rate = {H_e, H_e}^j.
struct CouplingChannel {
    HermitianObservable Q;
    double friction_rate{0.0};
    double diffusion_rate{0.0};
    RateSource source{RateSource::fixed};
    double bath_scale{1.0};

    CouplingChannel(HermitianObservable q, double friction, double diffusion);
    static CouplingChannel from_bath(HermitianObservable q, double scale = 1.0);

    void validate() const;
};

struct QuantumSystem {
    HermitianObservable H;
    std::vector<CouplingChannel> channels;
    PhysicalConstants constants;

    Eigen::Index dim() const noexcept { return H.dim(); }
    void validate() const;
};

// d rho / dt. The result is Hermitian and traceless up to rounding.
Matrix generator(const DensityMatrix& rho, const QuantumSystem& sys,
                 Variant variant = Variant::nonlinear);

// Same, on a raw Hermitian matrix; used inside integrator stages where positivity is only monitored.
Matrix generator_unchecked(const Matrix& rho, const QuantumSystem& sys, Variant variant);

// exp(-H / (k_B T)) / Z, evaluated with the spectral minimum shifted to zero.
DensityMatrix equilibrium_state(const HermitianObservable& H, double temperature,
                                const PhysicalConstants& constants = {});

// |T friction - diffusion| <= tol * max(1, diffusion)
bool check_bath_equilibrium(const CouplingChannel& channel, double temperature,
                            const PhysicalConstants& constants = {}, double tol = 1e-12);

double energy_expectation(const DensityMatrix& rho, const HermitianObservable& H);

}  // namespace tqme
