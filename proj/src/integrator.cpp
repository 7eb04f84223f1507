// integrator.cpp

#include "tqme/integrator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tqme {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("IntegratorConfig: dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("IntegratorConfig: t_end must be positive");
    }
    if (!(dt < t_end)) throw std::invalid_argument("IntegratorConfig: dt must be smaller than t_end");
    if (monitor_every < 1) throw std::invalid_argument("IntegratorConfig: monitor_every must be >= 1");
    const MonitorTolerances& t = tolerances;
    if (!(t.trace > 0.0) || !(t.hermiticity > 0.0) || !(t.positivity > 0.0) || !(t.energy > 0.0)) {
        throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
    }
}

long long IntegratorConfig::steps() const { return std::llround(t_end / dt); }

namespace {

struct Derivative {
    Matrix drho;
    double dHe{0.0};
};

Derivative evaluate(const Matrix& rho, const HeatBath& bath, QuantumSystem& scratch,
                    Variant variant) {
    refresh_bath_rates(scratch, bath);
    return {generator_unchecked(rho, scratch, variant),
            environment_rhs_unchecked(rho, scratch, variant)};
}

CoupledState advance(const CoupledState& s, const Derivative& k, double h) {
    return {s.rho + h * k.drho, s.bath.with_energy(s.bath.energy() + h * k.dHe)};
}

}  // namespace

CoupledState step(const CoupledState& state, const QuantumSystem& sys, double dt, Method method,
                  Variant variant) {
    QuantumSystem scratch = sys;
    if (method == Method::euler) {
        CoupledState next = advance(state, evaluate(state.rho, state.bath, scratch, variant), dt);
        next.rho = 0.5 * (next.rho + next.rho.adjoint()).eval();
        return next;
    }
    const Derivative k1 = evaluate(state.rho, state.bath, scratch, variant);
    const CoupledState s2 = advance(state, k1, 0.5 * dt);
    const Derivative k2 = evaluate(s2.rho, s2.bath, scratch, variant);
    const CoupledState s3 = advance(state, k2, 0.5 * dt);
    const Derivative k3 = evaluate(s3.rho, s3.bath, scratch, variant);
    const CoupledState s4 = advance(state, k3, dt);
    const Derivative k4 = evaluate(s4.rho, s4.bath, scratch, variant);
    const double w = dt / 6.0;
    CoupledState next{state.rho + w * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho),
                      state.bath.with_energy(state.bath.energy() +
                                             w * (k1.dHe + 2.0 * k2.dHe + 2.0 * k3.dHe + k4.dHe))};
    next.rho = 0.5 * (next.rho + next.rho.adjoint()).eval();
    return next;
}

Monitors measure(const CoupledState& state, const QuantumSystem& sys) {
    Monitors m;
    const Matrix& rho = state.rho;
    m.trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    m.herm_err = hermiticity_error(rho);
    const auto spec = spectral_decompose_unchecked(0.5 * (rho + rho.adjoint()));
    m.min_eig = spec.eigenvalues.minCoeff();
    m.total_energy = (sys.H.matrix() * rho).trace().real() + state.bath.energy();
    m.total_entropy = von_neumann_entropy(spec.eigenvalues, sys.constants) + state.bath.entropy();
    return m;
}

namespace {

std::string check(const Monitors& m, const MonitorTolerances& tol, double energy0, bool finite_bath) {
    std::ostringstream os;
    if (!std::isfinite(m.trace_err) || !std::isfinite(m.min_eig) || !std::isfinite(m.total_energy)) {
        os << "non-finite state";
    } else if (m.trace_err > tol.trace) {
        os << "trace drift " << m.trace_err << " exceeds " << tol.trace;
    } else if (m.herm_err > tol.hermiticity) {
        os << "hermiticity error " << m.herm_err << " exceeds " << tol.hermiticity;
    } else if (m.min_eig < -tol.positivity) {
        os << "positivity violated: min eigenvalue " << m.min_eig;
    } else if (finite_bath) {
        const double rel = std::abs(m.total_energy - energy0) / std::max(std::abs(energy0), 1e-300);
        if (rel > tol.energy) os << "total energy drift " << rel << " exceeds " << tol.energy;
    }
    return os.str();
}

TrajectoryPoint make_point(double t, const CoupledState& s, const QuantumSystem& sys,
                           const Monitors& m, Variant variant) {
    TrajectoryPoint p;
    p.t = t;
    p.rho = s.rho;
    EnvironmentObservableReport env;
    env.H_e = s.bath.energy();
    env.T_e = s.bath.temperature();
    env.S_e = s.bath.entropy();
    env.energy_flux_to_quantum = -environment_rhs_unchecked(s.rho, with_bath_rates(sys, s.bath), variant);
    p.env = env;
    p.monitors = m;
    return p;
}

}  // namespace

Trajectory simulate(const DensityMatrix& rho0, const HeatBath& bath0, const QuantumSystem& sys,
                    const IntegratorConfig& cfg) {
    cfg.validate();
    sys.validate();
    require_same_dim(rho0.matrix(), sys.H.matrix(), "simulate");

    Trajectory traj;
    traj.config = cfg;
    const bool finite_bath = bath0.kind() == HeatBath::Kind::finite;

    CoupledState state{rho0.matrix(), bath0};
    const Monitors m0 = measure(state, sys);
    const double energy0 = m0.total_energy;
    traj.points.push_back(make_point(0.0, state, sys, m0, cfg.variant));

    const long long n = cfg.steps();
    for (long long k = 1; k <= n; ++k) {
        try {
            state = step(state, sys, cfg.dt, cfg.method, cfg.variant);
        } catch (const std::domain_error& e) {
            traj.termination = Termination::monitor_violation;
            std::ostringstream os;
            os << "step " << k << ": " << e.what();
            traj.violation_detail = os.str();
            return traj;
        }
        if (k % cfg.monitor_every != 0 && k != n) continue;
        const double t = static_cast<double>(k) * cfg.dt;
        const Monitors m = measure(state, sys);
        traj.points.push_back(make_point(t, state, sys, m, cfg.variant));
        const std::string breach = check(m, cfg.tolerances, energy0, finite_bath);
        if (!breach.empty()) {
            traj.termination = Termination::monitor_violation;
            std::ostringstream os;
            os << "t = " << t << ": " << breach;
            traj.violation_detail = os.str();
            return traj;
        }
    }
    return traj;
}

std::vector<BlochSample> integrate_bloch(const two_level::Vec3& m0,
                                         const two_level::TwoLevelParams& params,
                                         const IntegratorConfig& cfg) {
    using two_level::Vec3;
    cfg.validate();
    params.validate();
    auto f = [&](const Vec3& m) { return two_level::bloch_rhs(m, params, cfg.variant); };

    std::vector<BlochSample> out{{0.0, m0}};
    Vec3 m = m0;
    const long long n = cfg.steps();
    const double dt = cfg.dt;
    for (long long k = 1; k <= n; ++k) {
        if (cfg.method == Method::euler) {
            m = m + dt * f(m);
        } else {
            const Vec3 k1 = f(m);
            const Vec3 k2 = f(m + 0.5 * dt * k1);
            const Vec3 k3 = f(m + 0.5 * dt * k2);
            const Vec3 k4 = f(m + dt * k3);
            m = m + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (k % cfg.monitor_every == 0 || k == n) out.push_back({static_cast<double>(k) * dt, m});
    }
    return out;
}

}  // namespace tqme
