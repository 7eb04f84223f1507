// environment.cpp

#include "tqme/environment.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace tqme {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("HeatBath: ") + what + " must be positive");
    }
}

}  // namespace

HeatBath HeatBath::infinite(double temperature, double gamma0, double omega_ref) {
    HeatBath b;
    b.kind_ = Kind::infinite;
    b.fixed_temperature_ = temperature;
    b.gamma0_ = gamma0;
    b.omega_ref_ = omega_ref;
    b.validate();
    return b;
}

HeatBath HeatBath::finite(double heat_capacity, double energy, double reference_energy,
                          double gamma0, double omega_ref) {
    HeatBath b;
    b.kind_ = Kind::finite;
    b.heat_capacity_ = heat_capacity;
    b.energy_ = energy;
    b.reference_energy_ = reference_energy;
    b.gamma0_ = gamma0;
    b.omega_ref_ = omega_ref;
    b.validate();
    return b;
}

void HeatBath::validate() const {
    if (!(gamma0_ >= 0.0) || !std::isfinite(gamma0_)) {
        throw std::invalid_argument("HeatBath: gamma0 must be nonnegative");
    }
    require_positive(omega_ref_, "omega_ref");
    if (kind_ == Kind::infinite) {
        require_positive(fixed_temperature_, "temperature");
    } else {
        require_positive(heat_capacity_, "heat capacity");
        require_positive(reference_energy_, "reference energy");
        require_positive(energy_, "energy");
    }
}

double HeatBath::temperature() const {
    if (kind_ == Kind::infinite) return fixed_temperature_;
    if (!(energy_ > 0.0)) {
        std::ostringstream os;
        os << "HeatBath: finite bath energy " << energy_ << " is not positive";
        throw std::domain_error(os.str());
    }
    return energy_ / heat_capacity_;
}

double HeatBath::entropy() const {
    if (kind_ == Kind::infinite) return energy_ / fixed_temperature_;
    if (!(energy_ > 0.0)) {
        throw std::domain_error("HeatBath: finite bath energy is not positive");
    }
    return heat_capacity_ * std::log(energy_ / reference_energy_);
}

HeatBath HeatBath::with_energy(double energy) const {
    HeatBath b = *this;
    b.energy_ = energy;
    return b;
}

double temperature(const HeatBath& bath) { return bath.temperature(); }

BracketRates channel_rates(const HeatBath& bath, const PhysicalConstants& constants) {
    constants.validate();
    const double T = bath.temperature();
    // dH_e/dH_e = 1, dS_e/dH_e = 1/T_e
    const double strength = bath.gamma0() * constants.kB * T / (constants.hbar * bath.omega_ref());
    return {strength / T, strength};
}

void refresh_bath_rates(QuantumSystem& sys, const HeatBath& bath) {
    std::optional<BracketRates> rates;
    for (auto& ch : sys.channels) {
        if (ch.source != RateSource::bath_bracket) continue;
        if (!rates) rates = channel_rates(bath, sys.constants);
        ch.friction_rate = ch.bath_scale * rates->friction;
        ch.diffusion_rate = ch.bath_scale * rates->diffusion;
    }
}

QuantumSystem with_bath_rates(QuantumSystem sys, const HeatBath& bath) {
    refresh_bath_rates(sys, bath);
    return sys;
}

double environment_rhs_unchecked(const Matrix& rho, const QuantumSystem& sys, Variant variant) {
    require_same_dim(rho, sys.H.matrix(), "environment_rhs");
    const Matrix& H = sys.H.matrix();
    std::optional<ModifiedOperatorMap> kubo;
    double rate = 0.0;
    for (const auto& ch : sys.channels) {
        const Matrix& Q = ch.Q.matrix();
        const Matrix HQ = H * Q - Q * H;
        if (ch.friction_rate != 0.0) {
            Complex corr;
            if (variant == Variant::nonlinear) {
                if (!kubo) kubo.emplace(rho);
                corr = kubo->correlation(HQ, HQ);
            } else {
                corr = 0.5 * ((HQ * rho + rho * HQ) * HQ).trace();
            }
            rate -= ch.friction_rate / sys.constants.kB * corr.real();
        }
        if (ch.diffusion_rate != 0.0) {
            // [Q, [Q, H]] = -[Q, HQ]
            const Matrix dc = HQ * Q - Q * HQ;
            rate += ch.diffusion_rate * (dc * rho).trace().real();
        }
    }
    return rate;
}

double environment_rhs(const HeatBath& bath, const DensityMatrix& rho, const QuantumSystem& sys,
                       Variant variant) {
    (void)bath.temperature();  // throws on an invalid finite bath
    sys.validate();
    return environment_rhs_unchecked(rho.matrix(), sys, variant);
}

EnvironmentObservableReport environment_report(const HeatBath& bath, const DensityMatrix& rho,
                                               const QuantumSystem& sys, Variant variant) {
    EnvironmentObservableReport r;
    r.H_e = bath.energy();
    r.T_e = bath.temperature();
    r.S_e = bath.entropy();
    r.energy_flux_to_quantum = -environment_rhs(bath, rho, sys, variant);
    return r;
}

double total_energy(const HeatBath& bath, const DensityMatrix& rho, const HermitianObservable& H) {
    if (bath.kind() == HeatBath::Kind::infinite) {
        throw NotApplicableError("total_energy: an infinite bath has no finite total energy");
    }
    return expectation(rho, H) + bath.energy();
}

}  // namespace tqme
