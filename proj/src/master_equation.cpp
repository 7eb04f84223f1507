// master_equation.cpp

#include "tqme/master_equation.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace tqme {

CouplingChannel::CouplingChannel(HermitianObservable q, double friction, double diffusion)
    : Q(std::move(q)), friction_rate(friction), diffusion_rate(diffusion) {
    validate();
}

CouplingChannel CouplingChannel::from_bath(HermitianObservable q, double scale) {
    CouplingChannel ch(std::move(q), 0.0, 0.0);
    ch.source = RateSource::bath_bracket;
    ch.bath_scale = scale;
    ch.validate();
    return ch;
}

void CouplingChannel::validate() const {
    if (!(friction_rate >= 0.0) || !std::isfinite(friction_rate)) {
        throw std::invalid_argument("CouplingChannel: friction_rate must be nonnegative");
    }
    if (!(diffusion_rate >= 0.0) || !std::isfinite(diffusion_rate)) {
        throw std::invalid_argument("CouplingChannel: diffusion_rate must be nonnegative");
    }
    if (!(bath_scale >= 0.0) || !std::isfinite(bath_scale)) {
        throw std::invalid_argument("CouplingChannel: bath_scale must be nonnegative");
    }
}

void QuantumSystem::validate() const {
    constants.validate();
    for (std::size_t j = 0; j < channels.size(); ++j) {
        if (channels[j].Q.dim() != H.dim()) {
            std::ostringstream os;
            os << "QuantumSystem: channel " << j << " has dimension " << channels[j].Q.dim()
               << ", Hamiltonian has " << H.dim();
            throw std::invalid_argument(os.str());
        }
        channels[j].validate();
    }
}

Matrix generator_unchecked(const Matrix& rho, const QuantumSystem& sys, Variant variant) {
    require_same_dim(rho, sys.H.matrix(), "generator");
    const Matrix& H = sys.H.matrix();
    const Complex i_over_hbar(0.0, 1.0 / sys.constants.hbar);
    Matrix drho = i_over_hbar * (rho * H - H * rho);

    std::optional<ModifiedOperatorMap> kubo;
    for (const auto& ch : sys.channels) {
        const Matrix& Q = ch.Q.matrix();
        if (ch.friction_rate != 0.0) {
            const Matrix QH = Q * H - H * Q;
            Matrix modified;
            if (variant == Variant::nonlinear) {
                if (!kubo) kubo.emplace(rho);
                modified = kubo->apply(QH);
            } else {
                modified = 0.5 * (QH * rho + rho * QH);
            }
            drho -= (ch.friction_rate / sys.constants.kB) * (Q * modified - modified * Q);
        }
        if (ch.diffusion_rate != 0.0) {
            const Matrix Qrho = Q * rho - rho * Q;
            drho -= ch.diffusion_rate * (Q * Qrho - Qrho * Q);
        }
    }
    return drho;
}

Matrix generator(const DensityMatrix& rho, const QuantumSystem& sys, Variant variant) {
    sys.validate();
    return generator_unchecked(rho.matrix(), sys, variant);
}

DensityMatrix equilibrium_state(const HermitianObservable& H, double temperature,
                                const PhysicalConstants& constants) {
    constants.validate();
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("equilibrium_state: temperature must be positive");
    }
    const auto spec = spectral_decompose(H);
    const double beta = 1.0 / (constants.kB * temperature);
    const double e_min = spec.eigenvalues.minCoeff();
    RealVector w(spec.eigenvalues.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        w(i) = std::exp(-beta * (spec.eigenvalues(i) - e_min));
    }
    w /= w.sum();
    Matrix rho = spec.eigenvectors * w.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(std::move(rho));
}

bool check_bath_equilibrium(const CouplingChannel& channel, double temperature,
                            const PhysicalConstants& constants, double tol) {
    constants.validate();
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("check_bath_equilibrium: temperature must be positive");
    }
    const double lhs = temperature * channel.friction_rate;
    return std::abs(lhs - channel.diffusion_rate) <= tol * std::max(1.0, channel.diffusion_rate);
}

double energy_expectation(const DensityMatrix& rho, const HermitianObservable& H) {
    return expectation(rho, H);
}

}  // namespace tqme
