// two_level.hpp: closed-form two-level algebra in the Pauli basis and the
// nonlinear Bloch equation. Doubles as the analytic oracle for the generic engine.
//
// Every self-adjoint 2x2 matrix is written A = O(alpha, a) = (alpha I + a . sigma) / 2,
// so alpha = tr A and a_j = tr(A sigma_j). A density matrix is O(1, m).

#pragma once

#include "tqme/master_equation.hpp"
#include "tqme/operator_core.hpp"

#include <Eigen/Dense>

#include <functional>

namespace tqme::two_level {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline const Vec3 q1{1.0, 0.0, 0.0};
inline const Vec3 q2{0.0, 1.0, 0.0};
inline const Vec3 q3{0.0, 0.0, 1.0};

inline constexpr double kBlochSlack = 1e-9;

struct PauliVector {
    double alpha{0.0};
    Vec3 a{Vec3::Zero()};
};

Matrix pauli_compose(double alpha, const Vec3& a);
Matrix pauli_compose(const PauliVector& p);
// Throws std::invalid_argument on non-2x2 or non-Hermitian input.
PauliVector pauli_decompose(const Matrix& m, double tol = kHermiticityTol);

// [A, B] = i O(0, a x b); returns the Hermitian coefficient O(0, a x b).
PauliVector pauli_commutator(const PauliVector& A, const PauliVector& B);
// {A, B} = O(alpha beta + a.b, beta a + alpha b)
PauliVector pauli_anticommutator(const PauliVector& A, const PauliVector& B);
// [A, [A, B]] = O(0, (a^2 1 - a a) b)
PauliVector pauli_double_commutator(const PauliVector& A, const PauliVector& B);
// tr(AB) = (alpha beta + a.b) / 2
double pauli_trace_product(const PauliVector& A, const PauliVector& B);

// f(A) = O(f+ + f-, (f+ - f-) a/|a|), f+- = f((alpha +- |a|)/2)
PauliVector function_of_observable(const PauliVector& A, const std::function<double(double)>& f);

class BlochState {
public:
    explicit BlochState(const Vec3& m);

    const Vec3& m() const noexcept { return m_; }
    double magnitude() const noexcept { return m_.norm(); }
    DensityMatrix density() const;

    static BlochState from_density(const DensityMatrix& rho);

private:
    Vec3 m_;
};

// mu(m) = 1/m^2 - 1/(m artanh m) on [0, 1); std::domain_error outside.
double mu(double m);
double mu_derivative(double m);
// mu on [0, 1] with the continuous extension mu(1) = 1.
double mu_extended(double m);

/// Nonlinear part of A_rho for rho = O(1, m): -O(0, mu(|m|) (m^2 1 - m m) a).
/// Requires |m| < 1.
PauliVector nonlinear_part_bloch(const BlochState& rho, const Vec3& a);

/// Same quantity written through Delta rho = rho - I/2:
///   2 mu(|m|) [Delta rho tr(A0 Delta rho) - A0 tr(Delta rho^2)],  A0 = A - tr(A) I / 2.
PauliVector nonlinear_part_alternative(const BlochState& rho, const PauliVector& A);

struct TwoLevelParams {
    double omega{1.0};
    double gamma0{0.0};
    double T_e{1.0};
    bool isotropic{false};
    double q3_multiplier{1.0};  // strength of the Q3 channel relative to Q1, Q2 (isotropic only)
    PhysicalConstants constants{};

    void validate() const;
    // hbar omega / (2 k_B T_e)
    double x() const;
};

// Diffusion matrix R: (1 + q3 q3)/2, plus q3_multiplier (1 - q3 q3)/2 when isotropic.
Mat3 dissipation_matrix(const TwoLevelParams& p);

/// dm/dt = omega q3 x m - gamma0 (2 k_B T_e/(hbar omega)) R m - gamma0 q3
///         + gamma0 (mu/2)(m^2 1 + m m) q3.
/// The linearized variant drops the mu term. |m| = 1 uses mu(1) = 1; |m| > 1 throws
/// for the nonlinear variant.
Vec3 bloch_rhs(const Vec3& m, const TwoLevelParams& p, Variant variant = Variant::nonlinear);
Vec3 bloch_rhs(const BlochState& m, const TwoLevelParams& p);

// m_eq = -q3 tanh(hbar omega / (2 k_B T_e))
BlochState bloch_equilibrium(const TwoLevelParams& p);
// Steady state of the linearized equation, -q3 hbar omega / (2 k_B T_e); may lie outside the ball.
Vec3 linearized_steady_state(const TwoLevelParams& p);

// Jacobian of bloch_rhs at m_eq.
Mat3 bloch_linearized_matrix(const TwoLevelParams& p);

// H = O(0, hbar omega q3), Q_j = O(0, q_j) driven by the heat-bath bracket.
QuantumSystem make_system(const TwoLevelParams& p);

}  // namespace tqme::two_level
