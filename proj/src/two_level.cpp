// two_level.cpp

#include "tqme/two_level.hpp"

#include "tqme/environment.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tqme::two_level {

namespace {

Matrix sigma(int j) {
    Matrix s = Matrix::Zero(2, 2);
    switch (j) {
        case 0:
            s(0, 1) = s(1, 0) = 1.0;
            break;
        case 1:
            s(0, 1) = Complex(0.0, -1.0);
            s(1, 0) = Complex(0.0, 1.0);
            break;
        default:
            s(0, 0) = 1.0;
            s(1, 1) = -1.0;
    }
    return s;
}

constexpr double kSeriesSwitch = 1e-4;
constexpr double kOddSeriesSwitch = 0.25;

void require_mu_domain(double m, const char* where) {
    if (!(m >= 0.0) || !(m < 1.0)) {
        std::ostringstream os;
        os << where << ": argument " << m << " outside [0, 1)";
        throw std::domain_error(os.str());
    }
}

double artanh(double m) { return 0.5 * std::log1p(2.0 * m / (1.0 - m)); }

// artanh(m) - m = sum_{k>=1} m^(2k+1) / (2k+1), summed directly for small m to avoid cancellation
double artanh_minus_identity(double m) {
    if (m >= kOddSeriesSwitch) return artanh(m) - m;
    const double m2 = m * m;
    double power = m * m2;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double term = power / (2.0 * k + 1.0);
        sum += term;
        if (term < 1e-18 * sum) break;
        power *= m2;
    }
    return sum;
}

}  // namespace

// ------------------------------- Pauli algebra ------------------------------

Matrix pauli_compose(double alpha, const Vec3& a) {
    Matrix m = alpha * Matrix::Identity(2, 2);
    for (int j = 0; j < 3; ++j) m += a(j) * sigma(j);
    return 0.5 * m;
}

Matrix pauli_compose(const PauliVector& p) { return pauli_compose(p.alpha, p.a); }

PauliVector pauli_decompose(const Matrix& m, double tol) {
    if (m.rows() != 2 || m.cols() != 2) {
        throw std::invalid_argument("pauli_decompose: expected a 2x2 matrix");
    }
    if (hermiticity_error(m) > tol) {
        throw std::invalid_argument("pauli_decompose: matrix is not self-adjoint");
    }
    PauliVector p;
    p.alpha = m.trace().real();
    for (int j = 0; j < 3; ++j) p.a(j) = (m * sigma(j)).trace().real();
    return p;
}

PauliVector pauli_commutator(const PauliVector& A, const PauliVector& B) {
    return {0.0, A.a.cross(B.a)};
}

PauliVector pauli_anticommutator(const PauliVector& A, const PauliVector& B) {
    return {A.alpha * B.alpha + A.a.dot(B.a), B.alpha * A.a + A.alpha * B.a};
}

PauliVector pauli_double_commutator(const PauliVector& A, const PauliVector& B) {
    return {0.0, A.a.squaredNorm() * B.a - A.a * A.a.dot(B.a)};
}

double pauli_trace_product(const PauliVector& A, const PauliVector& B) {
    return 0.5 * (A.alpha * B.alpha + A.a.dot(B.a));
}

PauliVector function_of_observable(const PauliVector& A, const std::function<double(double)>& f) {
    const double norm = A.a.norm();
    const double fp = f(0.5 * (A.alpha + norm));
    const double fm = f(0.5 * (A.alpha - norm));
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw std::domain_error("function_of_observable: f is undefined at an eigenvalue");
    }
    if (norm == 0.0) return {2.0 * fp, Vec3::Zero()};
    return {fp + fm, (fp - fm) * A.a / norm};
}

// -------------------------------- Bloch states ------------------------------

BlochState::BlochState(const Vec3& m) : m_(m) {
    if (!m.allFinite() || m.norm() > 1.0 + kBlochSlack) {
        std::ostringstream os;
        os << "BlochState: |m| = " << m.norm() << " lies outside the Bloch ball";
        throw std::invalid_argument(os.str());
    }
}

DensityMatrix BlochState::density() const {
    DensityTolerances tol;
    tol.positivity = kBlochSlack;
    return DensityMatrix(pauli_compose(1.0, m_), tol);
}

BlochState BlochState::from_density(const DensityMatrix& rho) {
    return BlochState(pauli_decompose(rho.matrix()).a);
}

// ------------------------------------ mu ------------------------------------

double mu(double m) {
    require_mu_domain(m, "mu");
    if (m < kSeriesSwitch) {
        const double m2 = m * m;
        return 1.0 / 3.0 + 4.0 * m2 / 45.0 + 44.0 * m2 * m2 / 945.0;
    }
    if (m < kOddSeriesSwitch) {
        const double s = artanh_minus_identity(m);
        return s / (m * m * (m + s));
    }
    return 1.0 / (m * m) - 1.0 / (m * artanh(m));
}

double mu_derivative(double m) {
    require_mu_domain(m, "mu_derivative");
    if (m < kSeriesSwitch) {
        return 8.0 * m / 45.0 + 176.0 * m * m * m / 945.0;
    }
    const double s = artanh_minus_identity(m);
    const double t = m + s;
    const double m2 = m * m;
    const double inv = 1.0 / (1.0 - m2);
    return (m2 * m2 * t * inv - s * (2.0 * m * t + m2 * inv)) / (m2 * m2 * t * t);
}

double mu_extended(double m) {
    if (m == 1.0) return 1.0;
    return mu(m);
}

// ---------------------------- nonlinear part of A_rho -----------------------

PauliVector nonlinear_part_bloch(const BlochState& rho, const Vec3& a) {
    const Vec3& m = rho.m();
    const double mag = m.norm();
    if (mag >= 1.0) {
        throw std::domain_error("nonlinear_part_bloch: requires |m| < 1");
    }
    const Vec3 proj = m.squaredNorm() * a - m * m.dot(a);
    return {0.0, -mu(mag) * proj};
}

PauliVector nonlinear_part_alternative(const BlochState& rho, const PauliVector& A) {
    const double mag = rho.magnitude();
    if (mag >= 1.0) {
        throw std::domain_error("nonlinear_part_alternative: requires |m| < 1");
    }
    const PauliVector delta{0.0, rho.m()};
    const PauliVector traceless{0.0, A.a};
    const double c = 2.0 * mu(mag);
    const double overlap = pauli_trace_product(traceless, delta);
    const double spread = pauli_trace_product(delta, delta);
    return {0.0, c * (delta.a * overlap - traceless.a * spread)};
}

// ------------------------------- Bloch equation -----------------------------

void TwoLevelParams::validate() const {
    constants.validate();
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("TwoLevelParams: omega must be positive");
    }
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
        throw std::invalid_argument("TwoLevelParams: gamma0 must be nonnegative");
    }
    if (!(T_e > 0.0) || !std::isfinite(T_e)) {
        throw std::invalid_argument("TwoLevelParams: T_e must be positive");
    }
    if (!(q3_multiplier >= 0.0) || !std::isfinite(q3_multiplier)) {
        throw std::invalid_argument("TwoLevelParams: q3_multiplier must be nonnegative");
    }
}

double TwoLevelParams::x() const {
    return constants.hbar * omega / (2.0 * constants.kB * T_e);
}

Mat3 dissipation_matrix(const TwoLevelParams& p) {
    const Mat3 q33 = q3 * q3.transpose();
    Mat3 R = 0.5 * (Mat3::Identity() + q33);
    if (p.isotropic) R += 0.5 * p.q3_multiplier * (Mat3::Identity() - q33);
    return R;
}

Vec3 bloch_rhs(const Vec3& m, const TwoLevelParams& p, Variant variant) {
    p.validate();
    const double inv_x = 1.0 / p.x();  // 2 k_B T_e / (hbar omega)
    Vec3 dm = p.omega * q3.cross(m) - p.gamma0 * inv_x * (dissipation_matrix(p) * m) -
              p.gamma0 * q3;
    if (variant == Variant::nonlinear) {
        const double mag = m.norm();
        if (mag > 1.0 + kBlochSlack) {
            std::ostringstream os;
            os << "bloch_rhs: |m| = " << mag << " outside the Bloch ball";
            throw std::domain_error(os.str());
        }
        const double mu_m = mag >= 1.0 ? 1.0 : mu(mag);
        dm += p.gamma0 * 0.5 * mu_m * (m.squaredNorm() * q3 + m * m(2));
    }
    return dm;
}

Vec3 bloch_rhs(const BlochState& m, const TwoLevelParams& p) {
    return bloch_rhs(m.m(), p, Variant::nonlinear);
}

BlochState bloch_equilibrium(const TwoLevelParams& p) {
    p.validate();
    return BlochState(-q3 * std::tanh(p.x()));
}

Vec3 linearized_steady_state(const TwoLevelParams& p) {
    p.validate();
    return -q3 * p.x();
}

Mat3 bloch_linearized_matrix(const TwoLevelParams& p) {
    p.validate();
    const double m = std::tanh(p.x());
    const Mat3 q33 = q3 * q3.transpose();
    Mat3 rot;
    rot << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0;  // q3 x (.)
    const double mu_m = mu(m);
    return p.omega * rot - p.gamma0 / p.x() * dissipation_matrix(p) -
           p.gamma0 * 0.5 * m * mu_m * (Mat3::Identity() + 3.0 * q33) -
           p.gamma0 * m * m * mu_derivative(m) * q33;
}

QuantumSystem make_system(const TwoLevelParams& p) {
    p.validate();
    QuantumSystem sys{HermitianObservable(pauli_compose(0.0, p.constants.hbar * p.omega * q3)), {},
                      p.constants};
    sys.channels.push_back(CouplingChannel::from_bath(HermitianObservable(pauli_compose(0.0, q1))));
    sys.channels.push_back(CouplingChannel::from_bath(HermitianObservable(pauli_compose(0.0, q2))));
    if (p.isotropic) {
        sys.channels.push_back(CouplingChannel::from_bath(
            HermitianObservable(pauli_compose(0.0, q3)), p.q3_multiplier));
    }
    refresh_bath_rates(sys, HeatBath::infinite(p.T_e, p.gamma0, p.omega));
    return sys;
}

}  // namespace tqme::two_level
