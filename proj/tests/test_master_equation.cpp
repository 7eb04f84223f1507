#include "tqme/environment.hpp"
#include "tqme/master_equation.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace tqme;
using namespace tqme::testing;

namespace {

// tanh(1/2) and 1/(1 + e^-1), frozen from mpmath
constexpr double kTanhHalf = 0.462117157260009758502;
constexpr double kUpperPop = 0.731058578630004879252;

// Hamiltonian rescaled to unit spectral width
QuantumSystem random_system(RandomOperators& rnd, int n, int channels, double T) {
    Matrix h = rnd.hermitian(n).matrix();
    const RealVector e = spectral_decompose(HermitianObservable(h)).eigenvalues;
    h /= e.maxCoeff() - e.minCoeff();
    QuantumSystem sys{HermitianObservable(h), {}, {}};
    for (int j = 0; j < channels; ++j) {
        const double f = rnd.uniform(0.1, 2.0);
        sys.channels.emplace_back(rnd.hermitian(n), f, T * f);
    }
    return sys;
}

}  // namespace

TEST_CASE("von Neumann term alone") {
    const HermitianObservable H(diag2(0.5, -0.5));
    const QuantumSystem sys{H, {}, {}};
    const DensityMatrix rho(diag2(0.3, 0.7));
    CHECK(generator(rho, sys).norm() == 0.0);

    RandomOperators rnd(2);
    const auto r = rnd.full_rank_density(3);
    const QuantumSystem sys3{rnd.hermitian(3), {}, {2.0, 1.0}};
    const Matrix expect = Complex(0.0, 0.5) * commutator(r.matrix(), sys3.H.matrix());
    CHECK((generator(r, sys3) - expect).norm() < 1e-14);
}

TEST_CASE("generator is Hermitian and traceless") {
    RandomOperators rnd(41);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = rnd.integer(2, 5);
        const auto sys = random_system(rnd, n, rnd.integer(1, 3), rnd.uniform(0.2, 3.0));
        const auto rho = rnd.full_rank_density(n);
        for (Variant v : {Variant::nonlinear, Variant::linearized}) {
            const Matrix d = generator(rho, sys, v);
            CHECK(std::abs(d.trace()) < 1e-13);
            CHECK(hermiticity_error(d) < 1e-12);
        }
    }
}

TEST_CASE("equilibrium state") {
    const HermitianObservable H(0.5 * pauli_z());
    const auto rho = equilibrium_state(H, 1.0);
    CHECK(rho.matrix()(0, 0).real() == doctest::Approx(1 - kUpperPop).epsilon(1e-14));
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(kUpperPop).epsilon(1e-14));
    CHECK((rho.matrix() * pauli_z()).trace().real() == doctest::Approx(-kTanhHalf).epsilon(1e-14));
    CHECK(energy_expectation(rho, H) == doctest::Approx(-0.5 * kTanhHalf).epsilon(1e-14));

    const auto hot = equilibrium_state(HermitianObservable(pauli_z() * 0.5), 1e9);
    CHECK((hot.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-9);

    const auto flat = equilibrium_state(HermitianObservable(Matrix::Zero(3, 3)), 0.7);
    CHECK((flat.matrix() - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-15);

    // very low temperature does not overflow
    const auto cold = equilibrium_state(HermitianObservable(pauli_z() * 500.0), 1e-3);
    CHECK(cold.matrix()(1, 1).real() == doctest::Approx(1.0));

    // SI-like constants enter only through k_B T
    const PhysicalConstants si{1.054571817e-34, 1.380649e-23};
    const HermitianObservable Hsi(0.5 * 1.380649e-23 * pauli_z());
    const auto rho_si = equilibrium_state(Hsi, 1.0, si);
    CHECK((rho_si.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(equilibrium_state(H, 0.0), std::invalid_argument);
}

TEST_CASE("energy expectation") {
    const HermitianObservable H(0.5 * pauli_z());
    CHECK(energy_expectation(DensityMatrix::maximally_mixed(2), H) == 0.0);
    CHECK(energy_expectation(DensityMatrix(diag2(1.0, 0.0)), H) == 0.5);
}

TEST_CASE("bath equilibrium condition") {
    const HermitianObservable Q(pauli_x());
    const HeatBath bath = HeatBath::infinite(0.37, 1.3, 2.1);
    const auto r = channel_rates(bath, {});
    CHECK(check_bath_equilibrium(CouplingChannel(Q, r.friction, r.diffusion), 0.37));
    CHECK_FALSE(check_bath_equilibrium(CouplingChannel(Q, 1.0, 2.0), 1.0));
    CHECK(check_bath_equilibrium(CouplingChannel(Q, 0.0, 0.0), 1.0));
    CHECK_THROWS_AS(CouplingChannel(Q, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("equilibrium state is a fixed point of the nonlinear generator") {
    RandomOperators rnd(43);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rnd.integer(2, 5);
        for (double T : {0.1, 0.2, 0.5, 1.0, 2.0}) {
            const auto sys = random_system(rnd, n, 2, T);
            for (const auto& ch : sys.channels) REQUIRE(check_bath_equilibrium(ch, T));
            const auto rho = equilibrium_state(sys.H, T);
            CHECK(generator(rho, sys, Variant::nonlinear).norm() <= 1e-10);
        }
    }
}

TEST_CASE("linearized generator does not vanish at low-temperature equilibrium") {
    // hbar omega / (k_B T) = 10
    const HermitianObservable H(0.5 * pauli_z());
    const double T = 0.1;
    const HeatBath bath = HeatBath::infinite(T, 1.0, 1.0);
    QuantumSystem sys{H, {}, {}};
    sys.channels.push_back(CouplingChannel::from_bath(HermitianObservable(0.5 * pauli_x())));
    sys.channels.push_back(CouplingChannel::from_bath(HermitianObservable(0.5 * pauli_y())));
    refresh_bath_rates(sys, bath);
    const auto rho = equilibrium_state(H, T);
    CHECK(generator(rho, sys, Variant::linearized).norm() > 1e-3);
    CHECK(generator(rho, sys, Variant::nonlinear).norm() < 1e-12);
}

TEST_CASE("nonlinear minus linearized friction equals the A'_rho term") {
    RandomOperators rnd(47);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rnd.integer(2, 5);
        const auto sys = random_system(rnd, n, rnd.integer(1, 3), rnd.uniform(0.2, 3.0));
        const auto rho = rnd.full_rank_density(n);
        const Matrix diff = generator(rho, sys, Variant::nonlinear) - generator(rho, sys, Variant::linearized);
        Matrix expect = Matrix::Zero(n, n);
        for (const auto& ch : sys.channels) {
            const Matrix QH = commutator(ch.Q.matrix(), sys.H.matrix());
            // i[Q,H] is Hermitian and A'_rho is linear in A
            const HermitianObservable iQH = HermitianObservable::hermitian_part(Complex(0.0, 1.0) * QH);
            const Matrix np = Complex(0.0, -1.0) * a_rho_nonlinear_part(rho, iQH).matrix();
            expect -= ch.friction_rate / sys.constants.kB * commutator(ch.Q.matrix(), 0.5 * np);
        }
        CHECK((diff - expect).norm() < 1e-12);
    }
}

TEST_CASE("generator rejects mismatched inputs") {
    const QuantumSystem sys{HermitianObservable(pauli_z()), {}, {}};
    CHECK_THROWS_AS(generator(DensityMatrix::maximally_mixed(3), sys), std::invalid_argument);
    QuantumSystem bad{HermitianObservable(pauli_z()), {}, {}};
    bad.channels.emplace_back(HermitianObservable(Matrix::Identity(3, 3)), 1.0, 1.0);
    CHECK_THROWS_AS(generator(DensityMatrix::maximally_mixed(2), bad), std::invalid_argument);
}
