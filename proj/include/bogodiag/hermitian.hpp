#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace bogodiag {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Dense self-adjoint operator. The stored matrix is exactly Hermitian: the
// constructor path symmetrizes (raw + raw^H)/2 and records how far the input
// was from its adjoint.
class HermitianOperator {
public:
    HermitianOperator() = default;

    // tol < 0 selects the default 1e-12 * (1 + max |entry|).
    static HermitianOperator validated(const Matrix& raw, double tol = -1.0) {
        if (raw.rows() != raw.cols()) throw NotSquare(raw.rows(), raw.cols());
        double defect = max_abs(raw - raw.adjoint());
        if (tol < 0.0) tol = 1e-12 * (1.0 + max_abs(raw));
        if (defect > tol) throw HermiticityViolation(defect, tol);
        return HermitianOperator(0.5 * (raw + raw.adjoint()), defect);
    }

    // For matrices Hermitian by construction. Still symmetrizes so the class
    // invariant holds to the last bit, but never rejects.
    static HermitianOperator trusted(const Matrix& m) {
        if (m.rows() != m.cols()) throw NotSquare(m.rows(), m.cols());
        return HermitianOperator(0.5 * (m + m.adjoint()), max_abs(m - m.adjoint()));
    }

    static HermitianOperator diagonal(const RealVector& d) {
        Matrix m = d.cast<Complex>().asDiagonal();
        return HermitianOperator(std::move(m), 0.0);
    }

    static HermitianOperator identity(Eigen::Index n) {
        return HermitianOperator(Matrix::Identity(n, n), 0.0);
    }

    Eigen::Index dim() const { return mat_.rows(); }
    const Matrix& matrix() const { return mat_; }
    double hermiticity_defect() const { return defect_; }

private:
    HermitianOperator(Matrix m, double defect) : mat_(std::move(m)), defect_(defect) {}

    Matrix mat_;
    double defect_ = 0.0;
};

inline HermitianOperator validate_hermitian(const Matrix& raw, double tol = -1.0) {
    return HermitianOperator::validated(raw, tol);
}

struct EigenDecomposition {
    RealVector eigenvalues; // ascending
    Matrix eigenvectors;    // column k belongs to eigenvalues[k]
    double unitarity_defect;
    double reconstruction_defect;
};

inline EigenDecomposition eig_hermitian(const HermitianOperator& op) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix());
    if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
    EigenDecomposition d;
    d.eigenvalues = solver.eigenvalues();
    d.eigenvectors = solver.eigenvectors();
    const auto n = op.dim();
    d.unitarity_defect = max_abs(d.eigenvectors * d.eigenvectors.adjoint() - Matrix::Identity(n, n));
    d.reconstruction_defect = max_abs(
        d.eigenvectors * d.eigenvalues.cast<Complex>().asDiagonal() * d.eigenvectors.adjoint() -
        op.matrix());
    double max_eig = n == 0 ? 0.0 : d.eigenvalues.cwiseAbs().maxCoeff();
    if (d.unitarity_defect > 1e-12 * static_cast<double>(n) ||
        d.reconstruction_defect > 1e-11 * (1.0 + max_eig))
        throw Error("eigendecomposition defect above contract bounds");
    return d;
}

struct Metrics {
    double trace;
    double hs_norm;
    double op_norm;
    double eigmin;
};

inline Metrics operator_metrics(const HermitianOperator& op) {
    Metrics m;
    m.trace = op.matrix().trace().real();
    m.hs_norm = op.matrix().norm();
    auto d = eig_hermitian(op);
    m.op_norm = op.dim() == 0 ? 0.0 : d.eigenvalues.cwiseAbs().maxCoeff();
    m.eigmin = op.dim() == 0 ? 0.0 : d.eigenvalues(0);
    return m;
}

inline double default_floor_tol(const EigenDecomposition& d) {
    double max_eig = d.eigenvalues.size() == 0 ? 0.0 : d.eigenvalues.cwiseAbs().maxCoeff();
    return 1e-10 * (1.0 + max_eig);
}

namespace detail {

template <class Fn>
HermitianOperator spectral_apply(const EigenDecomposition& d, Fn&& fn) {
    RealVector mapped(d.eigenvalues.size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = fn(d.eigenvalues(i));
    Matrix out = d.eigenvectors * mapped.cast<Complex>().asDiagonal() * d.eigenvectors.adjoint();
    return HermitianOperator::trusted(out);
}

inline bool is_integer(double p) { return p == std::floor(p); }

} // namespace detail

// Fractional powers clamp eigenvalues in [-floor_tol, 0) to zero; anything
// further below zero is rejected. Inverse powers never clamp: a spectrum
// touching floor_tol from above is already an error there.
inline HermitianOperator matrix_pow(const HermitianOperator& op, double p, double floor_tol = -1.0) {
    auto d = eig_hermitian(op);
    if (floor_tol < 0.0) floor_tol = default_floor_tol(d);
    double eigmin = d.eigenvalues.size() == 0 ? 0.0 : d.eigenvalues(0);
    if (!detail::is_integer(p) && eigmin < -floor_tol) throw NegativeSpectrum(eigmin);
    if (p < 0.0 && eigmin <= floor_tol) throw SingularOperator(eigmin);
    return detail::spectral_apply(d, [&](double x) {
        if (!detail::is_integer(p) && p >= 0.0 && x < 0.0) x = 0.0;
        return std::pow(x, p);
    });
}

inline HermitianOperator matrix_sqrt(const HermitianOperator& op, double floor_tol = -1.0) {
    auto d = eig_hermitian(op);
    if (floor_tol < 0.0) floor_tol = default_floor_tol(d);
    double eigmin = d.eigenvalues.size() == 0 ? 0.0 : d.eigenvalues(0);
    if (eigmin < -floor_tol) throw NegativeSpectrum(eigmin);
    return detail::spectral_apply(d, [](double x) { return x < 0.0 ? 0.0 : std::sqrt(x); });
}

inline HermitianOperator matrix_inv_sqrt(const HermitianOperator& op, double floor_tol = -1.0) {
    auto d = eig_hermitian(op);
    if (floor_tol < 0.0) floor_tol = default_floor_tol(d);
    double eigmin = d.eigenvalues.size() == 0 ? 0.0 : d.eigenvalues(0);
    if (eigmin < -floor_tol) throw NegativeSpectrum(eigmin);
    if (eigmin <= floor_tol) throw SingularOperator(eigmin);
    return detail::spectral_apply(d, [](double x) { return 1.0 / std::sqrt(x); });
}

// exp(i t M), unitary for Hermitian M.
inline Matrix unitary_exp(const HermitianOperator& op, double t) {
    auto d = eig_hermitian(op);
    Vector phases(d.eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(Complex(0.0, t * d.eigenvalues(i)));
    return d.eigenvectors * phases.asDiagonal() * d.eigenvectors.adjoint();
}

// Operator norm (largest singular value) of a general matrix.
inline double op_norm_general(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.adjoint() * m);
    double top = solver.eigenvalues().maxCoeff();
    return top <= 0.0 ? 0.0 : std::sqrt(top);
}

} // namespace bogodiag
