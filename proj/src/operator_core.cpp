// operator_core.cpp: spectral machinery and the modified operator A_rho

#include "tqme/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tqme {

void PhysicalConstants::validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw std::invalid_argument("PhysicalConstants: hbar must be positive");
    }
    if (!(kB > 0.0) || !std::isfinite(kB)) {
        throw std::invalid_argument("PhysicalConstants: kB must be positive");
    }
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* where) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw std::invalid_argument(std::string(where) + ": matrices must be square");
    }
    if (a.rows() != b.rows()) {
        std::ostringstream os;
        os << where << ": dimension mismatch (" << a.rows() << " vs " << b.rows() << ")";
        throw std::invalid_argument(os.str());
    }
}

double hermiticity_error(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

// ------------------------------- value types --------------------------------

HermitianObservable::HermitianObservable(Matrix entries, double tol) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("HermitianObservable: matrix must be square");
    }
    if (entries_.rows() < 2) {
        throw std::invalid_argument("HermitianObservable: dimension must be at least 2");
    }
    if (!entries_.allFinite()) {
        throw std::invalid_argument("HermitianObservable: non-finite entries");
    }
    const double err = hermiticity_error(entries_);
    if (err > tol) {
        std::ostringstream os;
        os << "HermitianObservable: matrix is not self-adjoint (max deviation " << err << ")";
        throw std::invalid_argument(os.str());
    }
}

HermitianObservable HermitianObservable::hermitian_part(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 2) {
        throw std::invalid_argument("HermitianObservable: need a square matrix of dimension >= 2");
    }
    Matrix h = 0.5 * (a + a.adjoint());
    return HermitianObservable(std::move(h), Unchecked{});
}

DensityMatrix::DensityMatrix(Matrix entries, DensityTolerances tol) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
        throw std::invalid_argument("DensityMatrix: need a square matrix of dimension >= 2");
    }
    if (!entries_.allFinite()) {
        throw std::invalid_argument("DensityMatrix: non-finite entries");
    }
    const double herm = hermiticity_error(entries_);
    if (herm > tol.hermiticity) {
        std::ostringstream os;
        os << "DensityMatrix: not Hermitian (max deviation " << herm << ")";
        throw std::invalid_argument(os.str());
    }
    const double trace_err = std::abs(entries_.trace() - Complex(1.0, 0.0));
    if (trace_err > tol.trace) {
        std::ostringstream os;
        os << "DensityMatrix: trace differs from 1 by " << trace_err;
        throw std::invalid_argument(os.str());
    }
    const auto spec = spectral_decompose_unchecked(0.5 * (entries_ + entries_.adjoint()));
    const double min_eig = spec.eigenvalues.minCoeff();
    if (min_eig < -tol.positivity) {
        std::ostringstream os;
        os << "DensityMatrix: negative eigenvalue " << min_eig;
        throw std::invalid_argument(os.str());
    }
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
    if (dim < 2) throw std::invalid_argument("DensityMatrix: dimension must be at least 2");
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

// --------------------------------- spectra ----------------------------------

Matrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b, "anticommutator");
    return a * b + b * a;
}

SpectralDecomposition spectral_decompose_unchecked(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectral_decompose: eigensolver did not converge");
    }
    // Eigen returns ascending order
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

SpectralDecomposition spectral_decompose(const HermitianObservable& a) {
    return spectral_decompose_unchecked(a.matrix());
}

HermitianObservable operator_function(const HermitianObservable& a,
                                      const std::function<double(double)>& f) {
    const auto spec = spectral_decompose(a);
    RealVector fx(spec.eigenvalues.size());
    for (Eigen::Index i = 0; i < fx.size(); ++i) {
        fx(i) = f(spec.eigenvalues(i));
        if (!std::isfinite(fx(i))) {
            std::ostringstream os;
            os << "operator_function: f is undefined at eigenvalue " << spec.eigenvalues(i);
            throw std::domain_error(os.str());
        }
    }
    Matrix out = spec.eigenvectors * fx.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
    return HermitianObservable::hermitian_part(out);
}

// ------------------------------- A_rho family -------------------------------

double logarithmic_mean(double p, double q) {
    if (p == q) return p;
    if (p <= 0.0 || q <= 0.0) return 0.0;
    const double hi = std::max(p, q);
    const double lo = std::min(p, q);
    // r in (-1, 0); d = hi * r / log1p(r) has no cancellation as lo -> hi
    const double r = (lo - hi) / hi;
    if (std::abs(r) < 1e-12) return hi * (1.0 + 0.5 * r);
    return hi * r / std::log1p(r);
}

ModifiedOperatorMap::ModifiedOperatorMap(const Matrix& rho)
    : rho_(rho), spectrum_(spectral_decompose_unchecked(0.5 * (rho + rho.adjoint()))) {
    const Eigen::Index n = rho.rows();
    weights_.resize(n, n);
    const RealVector& p = spectrum_.eigenvalues;
    for (Eigen::Index i = 0; i < n; ++i) {
        weights_(i, i) = p(i);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            weights_(i, j) = weights_(j, i) = logarithmic_mean(p(i), p(j));
        }
    }
}

Matrix ModifiedOperatorMap::apply(const Matrix& a) const {
    require_same_dim(rho_, a, "a_rho");
    const Matrix& u = spectrum_.eigenvectors;
    Matrix in_eig = u.adjoint() * a * u;
    in_eig = in_eig.cwiseProduct(weights_.cast<Complex>());
    return u * in_eig * u.adjoint();
}

Matrix ModifiedOperatorMap::nonlinear_part(const Matrix& a) const {
    return 2.0 * apply(a) - (a * rho_ + rho_ * a);
}

Complex ModifiedOperatorMap::correlation(const Matrix& a, const Matrix& b) const {
    require_same_dim(a, b, "canonical_correlation");
    return (apply(a) * b).trace();
}

HermitianObservable a_rho(const DensityMatrix& rho, const HermitianObservable& a) {
    return HermitianObservable::hermitian_part(a_rho(rho, a.matrix()));
}

Matrix a_rho(const DensityMatrix& rho, const Matrix& a) {
    require_same_dim(rho.matrix(), a, "a_rho");
    return ModifiedOperatorMap(rho.matrix()).apply(a);
}

QuadratureRule gauss_legendre_unit(int n) {
    if (n < 2) throw std::invalid_argument("gauss_legendre_unit: need at least 2 nodes");
    QuadratureRule rule{RealVector(n), RealVector(n)};
    // Newton iteration on P_n from the Chebyshev-like initial guess
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes(i) = 0.5 * (1.0 - x);
        rule.nodes(n - 1 - i) = 0.5 * (1.0 + x);
        rule.weights(i) = rule.weights(n - 1 - i) = 0.5 * w;
    }
    return rule;
}

Matrix a_rho_quadrature(const DensityMatrix& rho, const Matrix& a, int nodes) {
    require_same_dim(rho.matrix(), a, "a_rho_quadrature");
    const auto rule = gauss_legendre_unit(nodes);
    const auto spec = spectral_decompose(rho.observable());
    const Matrix& u = spec.eigenvectors;
    const Eigen::Index n = rho.dim();

    auto power = [&](double lambda) {
        RealVector d(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = spec.eigenvalues(i);
            d(i) = p > 0.0 ? std::pow(p, lambda) : 0.0;
        }
        return Matrix(u * d.cast<Complex>().asDiagonal() * u.adjoint());
    };

    Matrix acc = Matrix::Zero(n, n);
    for (int k = 0; k < nodes; ++k) {
        const double lambda = rule.nodes(k);
        acc += rule.weights(k) * (power(lambda) * a * power(1.0 - lambda));
    }
    return acc;
}

HermitianObservable a_rho_quadrature(const DensityMatrix& rho, const HermitianObservable& a,
                                     int nodes) {
    return HermitianObservable::hermitian_part(a_rho_quadrature(rho, a.matrix(), nodes));
}

HermitianObservable a_rho_nonlinear_part(const DensityMatrix& rho, const HermitianObservable& a) {
    require_same_dim(rho.matrix(), a.matrix(), "a_rho_nonlinear_part");
    return HermitianObservable::hermitian_part(
        ModifiedOperatorMap(rho.matrix()).nonlinear_part(a.matrix()));
}

double canonical_correlation(const DensityMatrix& rho, const HermitianObservable& a,
                             const HermitianObservable& b) {
    return canonical_correlation(rho, a.matrix(), b.matrix()).real();
}

Complex canonical_correlation(const DensityMatrix& rho, const Matrix& a, const Matrix& b) {
    require_same_dim(rho.matrix(), a, "canonical_correlation");
    return ModifiedOperatorMap(rho.matrix()).correlation(a, b);
}

double expectation(const DensityMatrix& rho, const HermitianObservable& a) {
    require_same_dim(rho.matrix(), a.matrix(), "expectation");
    return (a.matrix() * rho.matrix()).trace().real();
}

HermitianObservable log_density(const DensityMatrix& rho, double floor) {
    if (!(floor > 0.0 && floor < 1.0)) {
        throw std::invalid_argument("log_density: floor must lie in (0, 1)");
    }
    return operator_function(rho.observable(),
                             [floor](double p) { return std::log(std::max(p, floor)); });
}

double von_neumann_entropy(const RealVector& populations, const PhysicalConstants& constants) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < populations.size(); ++i) {
        const double p = populations(i);
        if (p > 0.0) s -= p * std::log(p);
    }
    return constants.kB * s;
}

double von_neumann_entropy(const DensityMatrix& rho, const PhysicalConstants& constants) {
    return von_neumann_entropy(spectral_decompose(rho.observable()).eigenvalues, constants);
}

}  // namespace tqme
