#pragma once

#include <utility>
#include <vector>

#include "hermitian.hpp"

namespace bogodiag {

struct Coupling {
    double lambda;
    Vector g;
};

// Antiunitary conjugation J f = U conj(f) with U unitary and U conj(U) = 1.
// The canonical choice is entrywise conjugation (U = 1).
class Conjugation {
public:
    static Conjugation canonical(Eigen::Index n) {
        Conjugation j;
        j.u_ = Matrix::Identity(n, n);
        j.canonical_ = true;
        return j;
    }

    static Conjugation with_matrix(const Matrix& u, double tol = 1e-12) {
        if (u.rows() != u.cols()) throw NotSquare(u.rows(), u.cols());
        const auto n = u.rows();
        double unitarity = max_abs(u * u.adjoint() - Matrix::Identity(n, n));
        double involution = max_abs(u * u.conjugate() - Matrix::Identity(n, n));
        if (unitarity > tol || involution > tol)
            throw Error("conjugation matrix must be unitary with U conj(U) = 1");
        Conjugation j;
        j.u_ = u;
        j.canonical_ = false;
        return j;
    }

    Eigen::Index dim() const { return u_.rows(); }
    bool is_canonical() const { return canonical_; }
    const Matrix& matrix() const { return u_; }

    Vector apply(const Vector& f) const {
        return canonical_ ? f.conjugate() : Vector(u_ * f.conjugate());
    }

    // Matrix of the linear map J A J.
    Matrix conjugate_map(const Matrix& a) const {
        return canonical_ ? a.conjugate() : Matrix(u_ * a.conjugate() * u_.conjugate());
    }

private:
    Matrix u_;
    bool canonical_ = true;
};

struct PairModel {
    HermitianOperator T;
    std::vector<Coupling> couplings;
    Conjugation J; // must commute with T and fix every g

    static PairModel make(HermitianOperator T, std::vector<Coupling> couplings) {
        PairModel m;
        m.J = Conjugation::canonical(T.dim());
        m.T = std::move(T);
        m.couplings = std::move(couplings);
        return m;
    }

    static PairModel make(HermitianOperator T, std::vector<Coupling> couplings, Conjugation j) {
        PairModel m;
        m.T = std::move(T);
        m.couplings = std::move(couplings);
        m.J = std::move(j);
        return m;
    }

    PairModel() : J(Conjugation::canonical(0)) {}
};

struct ConditionReport {
    double eigmin_T;
    double D1; // sum |lambda_n| ||T^{-1/2} g_n||^2, relative bound of the interaction
    double D2; // sum |lambda_n| ||T^{1/2} g_n||^2
    double epsilon; // eigmin of 1 + sum lambda_n |T^{-1/2}g_n><T^{-1/2}g_n|
    bool b6_ok;
    bool kato_small; // D1 < 1
    bool pass;       // eigmin_T > 0 and epsilon > 0 and b6_ok
};

inline void check_coupling_dims(const PairModel& model) {
    const auto n = model.T.dim();
    for (const auto& c : model.couplings)
        if (c.g.size() != n) throw DimensionMismatch("coupling vector", n, c.g.size());
    if (model.J.dim() != n) throw DimensionMismatch("conjugation", n, model.J.dim());
}

inline ConditionReport validate_conditions(const PairModel& model) {
    check_coupling_dims(model);
    const auto n = model.T.dim();

    ConditionReport r{};
    auto eig_T = eig_hermitian(model.T);
    r.eigmin_T = n == 0 ? 0.0 : eig_T.eigenvalues(0);
    if (r.eigmin_T <= 0.0) throw SingularT(r.eigmin_T);

    // floor_tol 0 keeps the gate at exactly eigmin > 0; anything positive is usable here
    auto T_half = matrix_sqrt(model.T, 0.0);
    auto T_inv_half = matrix_inv_sqrt(model.T, 0.0);

    Matrix K = Matrix::Identity(n, n);
    r.D1 = 0.0;
    r.D2 = 0.0;
    for (const auto& c : model.couplings) {
        Vector u = T_inv_half.matrix() * c.g;
        Vector v = T_half.matrix() * c.g;
        r.D1 += std::abs(c.lambda) * u.squaredNorm();
        r.D2 += std::abs(c.lambda) * v.squaredNorm();
        K += c.lambda * (u * u.adjoint());
    }
    r.epsilon = n == 0 ? 1.0 : eig_hermitian(HermitianOperator::trusted(K)).eigenvalues(0);

    double scale_T = 1e-12 * (1.0 + max_abs(model.T.matrix()));
    r.b6_ok = max_abs(model.J.conjugate_map(model.T.matrix()) - model.T.matrix()) <= scale_T;
    for (const auto& c : model.couplings) {
        double scale_g = 1e-12 * (1.0 + (c.g.size() ? c.g.cwiseAbs().maxCoeff() : 0.0));
        if ((model.J.apply(c.g) - c.g).cwiseAbs().maxCoeff() > scale_g) r.b6_ok = false;
    }

    r.kato_small = r.D1 < 1.0;
    r.pass = r.eigmin_T > 0.0 && r.epsilon > 0.0 && r.b6_ok;
    return r;
}

// W = sum_n lambda_n |T^{1/2}g_n><T^{1/2}g_n|, the dressed interaction entering S^2 = T^2 + W.
inline HermitianOperator build_W(const PairModel& model) {
    check_coupling_dims(model);
    const auto n = model.T.dim();
    auto T_half = matrix_sqrt(model.T, 0.0);
    Matrix w = Matrix::Zero(n, n);
    for (const auto& c : model.couplings) {
        Vector v = T_half.matrix() * c.g;
        w += c.lambda * (v * v.adjoint());
    }
    return HermitianOperator::trusted(w);
}

// W0 = sum_n lambda_n |g_n><g_n| (undressed version, used by the intertwining relations).
inline HermitianOperator build_W0(const PairModel& model) {
    check_coupling_dims(model);
    const auto n = model.T.dim();
    Matrix w = Matrix::Zero(n, n);
    for (const auto& c : model.couplings) w += c.lambda * (c.g * c.g.adjoint());
    return HermitianOperator::trusted(w);
}

} // namespace bogodiag
