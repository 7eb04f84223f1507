// operator_core.hpp: Dense Hermitian operator algebra: spectra, operator functions,
// commutators, the modified operator A_rho and canonical correlations.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace tqme {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kLogFloor = 1e-14;

// hbar and k_B. Natural units by default.
struct PhysicalConstants {
    double hbar{1.0};
    double kB{1.0};

    void validate() const;
};

// Largest |A_ij - conj(A_ji)|.
double hermiticity_error(const Matrix& a);

// Self-adjoint dim x dim operator (dim >= 2).
class HermitianObservable {
public:
    explicit HermitianObservable(Matrix entries, double tol = kHermiticityTol);

    // Hermitian part (A + A^dagger)/2 of an arbitrary square matrix; never throws on asymmetry.
    static HermitianObservable hermitian_part(const Matrix& a);

    Eigen::Index dim() const noexcept { return entries_.rows(); }
    const Matrix& matrix() const noexcept { return entries_; }

private:
    struct Unchecked {};
    HermitianObservable(Matrix entries, Unchecked) : entries_(std::move(entries)) {}

    Matrix entries_;
};

struct DensityTolerances {
    double hermiticity{kHermiticityTol};
    double trace{kTraceTol};
    double positivity{kPositivityTol};
};

// Trace-one, positive semidefinite Hermitian matrix.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries, DensityTolerances tol = {});

    static DensityMatrix maximally_mixed(Eigen::Index dim);

    Eigen::Index dim() const noexcept { return entries_.rows(); }
    const Matrix& matrix() const noexcept { return entries_; }
    HermitianObservable observable() const { return HermitianObservable::hermitian_part(entries_); }

private:
    Matrix entries_;
};

// Eigenvalues in descending order; eigenvectors are the matching columns of a unitary.
struct SpectralDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const;
};

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

SpectralDecomposition spectral_decompose(const HermitianObservable& a);
// Same, on a matrix that the caller guarantees to be Hermitian (only the lower triangle is read).
SpectralDecomposition spectral_decompose_unchecked(const Matrix& a);

// U f(Lambda) U^dagger. Throws std::domain_error when f is not finite on the spectrum.
HermitianObservable operator_function(const HermitianObservable& a,
                                      const std::function<double(double)>& f);

// Logarithmic mean (p - q)/(ln p - ln q) with the limits d(p, p) = p and d(p, 0) = 0.
double logarithmic_mean(double p, double q);

/// Linear map A -> A_rho = \int_0^1 rho^l A rho^(1-l) dl for a fixed rho.
///
/// In the eigenbasis of rho with populations p_i the map is a Hadamard product
/// with the logarithmic-mean matrix d(p_i, p_j). It is evaluated for general
/// complex A so that anti-Hermitian arguments such as [Q, H] can be passed
/// directly. Eigenvalues <= 0 contribute d = 0 off the diagonal.
class ModifiedOperatorMap {
public:
    explicit ModifiedOperatorMap(const Matrix& rho);

    Eigen::Index dim() const noexcept { return rho_.rows(); }

    Matrix apply(const Matrix& a) const;
    // A'_rho = 2 A_rho - (A rho + rho A)
    Matrix nonlinear_part(const Matrix& a) const;
    // tr(A_rho B)
    Complex correlation(const Matrix& a, const Matrix& b) const;

    const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }

private:
    Matrix rho_;
    SpectralDecomposition spectrum_;
    Eigen::MatrixXd weights_;
};

HermitianObservable a_rho(const DensityMatrix& rho, const HermitianObservable& a);
Matrix a_rho(const DensityMatrix& rho, const Matrix& a);

// Gauss-Legendre evaluation of the lambda-integral, with rho^l from the spectrum and 0^l = 0.
HermitianObservable a_rho_quadrature(const DensityMatrix& rho, const HermitianObservable& a,
                                     int nodes);
Matrix a_rho_quadrature(const DensityMatrix& rho, const Matrix& a, int nodes);

HermitianObservable a_rho_nonlinear_part(const DensityMatrix& rho, const HermitianObservable& a);

// <<A; B>> = tr(A_rho B)
double canonical_correlation(const DensityMatrix& rho, const HermitianObservable& a,
                             const HermitianObservable& b);
Complex canonical_correlation(const DensityMatrix& rho, const Matrix& a, const Matrix& b);

double expectation(const DensityMatrix& rho, const HermitianObservable& a);

HermitianObservable log_density(const DensityMatrix& rho, double floor = kLogFloor);

// -k_B tr(rho ln rho), with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho, const PhysicalConstants& constants = {});
// Eigenvalue form for states that may carry small negative eigenvalues; those count as 0.
double von_neumann_entropy(const RealVector& populations, const PhysicalConstants& constants = {});

struct QuadratureRule {
    RealVector nodes;    // on [0, 1]
    RealVector weights;  // sum to 1
};

// n-point Gauss-Legendre rule mapped to [0, 1].
QuadratureRule gauss_legendre_unit(int n);

void require_same_dim(const Matrix& a, const Matrix& b, const char* where);

}  // namespace tqme
