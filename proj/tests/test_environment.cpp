#include "tqme/environment.hpp"
#include "tqme/two_level.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace tqme;
using namespace tqme::testing;

namespace {

QuantumSystem paper_two_level(double T) {
    two_level::TwoLevelParams p;
    p.omega = 1.0;
    p.gamma0 = 1.0;
    p.T_e = T;
    return two_level::make_system(p);
}

}  // namespace

TEST_CASE("bath temperature") {
    CHECK(temperature(HeatBath::infinite(2.0, 1.0, 1.0)) == 2.0);
    CHECK(temperature(HeatBath::finite(10.0, 5.0, 1.0, 1.0, 1.0)) == 0.5);
    CHECK(temperature(HeatBath::finite(1.0, 1.0, 1.0, 1.0, 1.0)) == 1.0);

    CHECK_THROWS_AS(HeatBath::infinite(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(HeatBath::infinite(1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(HeatBath::finite(0.0, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(HeatBath::finite(1.0, 1.0, 1.0, 1.0, 1.0).with_energy(-0.5).temperature(),
                    std::domain_error);
}

TEST_CASE("finite bath entropy") {
    const auto bath = HeatBath::finite(10.0, 5.0, 2.0, 1.0, 1.0);
    CHECK(bath.entropy() == doctest::Approx(10.0 * std::log(2.5)).epsilon(1e-15));
    // 1/T = dS/dH
    const double h = 1e-5;
    const double dS = (bath.with_energy(5.0 + h).entropy() - bath.with_energy(5.0 - h).entropy()) / (2 * h);
    CHECK(dS == doctest::Approx(1.0 / bath.temperature()).epsilon(1e-9));
}

TEST_CASE("heat-bath rates") {
    const PhysicalConstants c{};
    auto r = channel_rates(HeatBath::infinite(1.0, 1.0, 1.0), c);
    CHECK(r.friction == 1.0);
    CHECK(r.diffusion == 1.0);

    r = channel_rates(HeatBath::infinite(1.0, 0.0, 1.0), c);
    CHECK(r.friction == 0.0);
    CHECK(r.diffusion == 0.0);

    r = channel_rates(HeatBath::infinite(2.0, 1.0, 1.0), c);
    CHECK(r.friction == 1.0);
    CHECK(r.diffusion == 2.0);
    CHECK(check_bath_equilibrium(CouplingChannel(HermitianObservable(pauli_x()), r.friction, r.diffusion), 2.0));

    const PhysicalConstants odd{0.7, 1.9};
    r = channel_rates(HeatBath::infinite(0.3, 0.4, 2.5), odd);
    CHECK(r.friction == doctest::Approx(0.4 * 1.9 / (0.7 * 2.5)).epsilon(1e-15));
    CHECK(r.diffusion == doctest::Approx(0.4 * 1.9 * 0.3 / (0.7 * 2.5)).epsilon(1e-15));
}

TEST_CASE("rates are nonnegative, exact equilibrium pairs and monotone in bath energy") {
    double prev = -1.0;
    for (double He = 0.1; He < 20.0; He *= 1.7) {
        const auto bath = HeatBath::finite(3.0, He, 1.0, 0.8, 1.3);
        const auto r = channel_rates(bath, {});
        CHECK(r.friction >= 0.0);
        CHECK(r.diffusion >= 0.0);
        CHECK(r.diffusion == doctest::Approx(bath.temperature() * r.friction).epsilon(1e-15));
        CHECK(r.diffusion > prev);
        prev = r.diffusion;
    }
}

TEST_CASE("bath channels pick up current rates") {
    auto sys = paper_two_level(1.0);
    const auto bath = HeatBath::finite(4.0, 2.0, 1.0, 0.5, 1.0);
    const auto updated = with_bath_rates(sys, bath);
    for (const auto& ch : updated.channels) {
        CHECK(ch.friction_rate == doctest::Approx(0.5));
        CHECK(ch.diffusion_rate == doctest::Approx(0.25));
    }
}

TEST_CASE("no net flux at equilibrium") {
    for (double T : {0.2, 0.5, 1.0, 3.0}) {
        const auto sys = paper_two_level(T);
        const auto rho = equilibrium_state(sys.H, T);
        CHECK(std::abs(environment_rhs(HeatBath::infinite(T, 1.0, 1.0), rho, sys)) < 1e-10);
    }
    RandomOperators rnd(61);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rnd.integer(2, 5);
        const double T = rnd.uniform(0.5, 2.0);
        const auto bath = HeatBath::infinite(T, 0.7, 1.0);
        QuantumSystem sys{rnd.hermitian(n), {}, {}};
        sys.channels.push_back(CouplingChannel::from_bath(rnd.hermitian(n)));
        sys.channels.push_back(CouplingChannel::from_bath(rnd.hermitian(n), 0.5));
        refresh_bath_rates(sys, bath);
        CHECK(std::abs(environment_rhs(bath, equilibrium_state(sys.H, T), sys)) < 1e-10);
    }
}

TEST_CASE("decoupled bath exchanges nothing") {
    two_level::TwoLevelParams p;
    p.gamma0 = 0.0;
    const auto sys = two_level::make_system(p);
    const DensityMatrix rho(two_level::pauli_compose(1.0, two_level::Vec3(0.2, -0.3, 0.4)));
    CHECK(environment_rhs(HeatBath::infinite(1.0, 0.0, 1.0), rho, sys) == 0.0);
}

TEST_CASE("maximally mixed two-level state heats the bath") {
    const auto sys = paper_two_level(1.0);
    const auto rho = DensityMatrix::maximally_mixed(2);
    for (const auto& ch : sys.channels) {
        const Matrix dc = commutator(ch.Q.matrix(), commutator(ch.Q.matrix(), sys.H.matrix()));
        CHECK(std::abs((rho.matrix() * dc).trace()) < 1e-15);
        const Matrix B = commutator(sys.H.matrix(), ch.Q.matrix());
        CHECK(canonical_correlation(rho, B, B).real() < 0.0);
    }
    const double dHe = environment_rhs(HeatBath::infinite(1.0, 1.0, 1.0), rho, sys);
    CHECK(dHe > 0.0);
    const double dH = (generator(rho, sys) * sys.H.matrix()).trace().real();
    CHECK(dHe + dH == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("instantaneous energy balance") {
    RandomOperators rnd(67);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = rnd.integer(2, 5);
        const auto bath = HeatBath::finite(rnd.uniform(0.5, 5.0), rnd.uniform(0.5, 5.0), 1.0,
                                           rnd.uniform(0.1, 1.0), 1.0);
        QuantumSystem sys{rnd.hermitian(n), {}, {}};
        for (int j = 0; j < rnd.integer(1, 3); ++j) sys.channels.push_back(CouplingChannel::from_bath(rnd.hermitian(n)));
        refresh_bath_rates(sys, bath);
        const auto rho = rnd.full_rank_density(n);
        for (Variant v : {Variant::nonlinear, Variant::linearized}) {
            const double dHe = environment_rhs(bath, rho, sys, v);
            const double dH = (generator(rho, sys, v) * sys.H.matrix()).trace().real();
            CHECK(std::abs(dHe + dH) <= 1e-11);
        }
    }
}

TEST_CASE("environment report") {
    const auto sys = paper_two_level(1.0);
    const auto bath = HeatBath::finite(10.0, 5.0, 1.0, 1.0, 1.0);
    const auto rho = DensityMatrix::maximally_mixed(2);
    const auto rep = environment_report(bath, rho, with_bath_rates(sys, bath));
    CHECK(rep.H_e == 5.0);
    CHECK(rep.T_e == 0.5);
    CHECK(rep.S_e == doctest::Approx(10.0 * std::log(5.0)));
    CHECK(rep.energy_flux_to_quantum < 0.0);
}

TEST_CASE("total energy") {
    const HermitianObservable H(0.5 * pauli_z());
    const auto rho = DensityMatrix::maximally_mixed(2);
    CHECK(total_energy(HeatBath::finite(10.0, 5.0, 1.0, 1.0, 1.0), rho, H) == 5.0);
    CHECK_THROWS_AS(total_energy(HeatBath::infinite(1.0, 1.0, 1.0), rho, H), NotApplicableError);
    CHECK_THROWS_AS(total_energy(HeatBath::finite(10.0, 5.0, 1.0, 1.0, 1.0), DensityMatrix::maximally_mixed(3), H),
                    std::invalid_argument);
}
