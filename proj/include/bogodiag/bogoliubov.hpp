#pragma once

#include <algorithm>
#include <cmath>

#include "pair_model.hpp"

namespace bogodiag {

// One-particle block of a Bogoliubov transformation. X and Y satisfy the
// symplectic relations; the residuals record how well, in max-abs entry norm:
//   r1: X^H X - Y^H Y - 1          r2: X^H (JYJ) - Y^H (JXJ)
//   r3: X X^H - J Y Y^H J - 1      r4: -X Y^H + J Y X^H J
// With the canonical conjugation on a real model these reduce to the J-free
// forms X^H X - Y^H Y = 1, X^H Y - Y^H X = 0 and their adjoint-side twins.
struct SymplecticPair {
    Matrix X, Y;
    double r1, r2, r3, r4;
    double hs_norm_Y;
};

// X = (T^{-1/2}S^{1/2} + T^{1/2}S^{-1/2})/2, Y = (T^{-1/2}S^{1/2} - T^{1/2}S^{-1/2})/2.
inline SymplecticPair build_xy(const HermitianOperator& S, const HermitianOperator& T,
                               const Conjugation& J, double tol = 1e-9) {
    if (S.dim() != T.dim()) throw DimensionMismatch("build_xy", T.dim(), S.dim());
    if (J.dim() != T.dim()) throw DimensionMismatch("conjugation", T.dim(), J.dim());
    const auto n = T.dim();

    Matrix s_half = matrix_sqrt(S, 0.0).matrix();
    Matrix s_inv_half = matrix_inv_sqrt(S, 0.0).matrix();
    Matrix t_half = matrix_sqrt(T, 0.0).matrix();
    Matrix t_inv_half = matrix_inv_sqrt(T, 0.0).matrix();

    SymplecticPair p;
    p.X = 0.5 * (t_inv_half * s_half + t_half * s_inv_half);
    p.Y = 0.5 * (t_inv_half * s_half - t_half * s_inv_half);

    Matrix id = Matrix::Identity(n, n);
    Matrix jyj = J.conjugate_map(p.Y);
    Matrix jxj = J.conjugate_map(p.X);
    p.r1 = max_abs(p.X.adjoint() * p.X - p.Y.adjoint() * p.Y - id);
    p.r2 = max_abs(p.X.adjoint() * jyj - p.Y.adjoint() * jxj);
    p.r3 = max_abs(p.X * p.X.adjoint() - J.conjugate_map(p.Y * p.Y.adjoint()) - id);
    p.r4 = max_abs(-p.X * p.Y.adjoint() + J.conjugate_map(p.Y * p.X.adjoint()));
    p.hs_norm_Y = p.Y.norm();

    double worst = std::max({p.r1, p.r2, p.r3, p.r4});
    double bound = tol * static_cast<double>(std::max<Eigen::Index>(n, 1));
    if (worst > bound) throw SymplecticResidualExceeded(worst, bound);
    return p;
}

inline SymplecticPair build_xy(const HermitianOperator& S, const HermitianOperator& T,
                               double tol = 1e-9) {
    return build_xy(S, T, Conjugation::canonical(T.dim()), tol);
}

struct HeinzCheck {
    double p;
    double norm_TpSmp; // operator norm of T^p S^{-p}
    double lower, upper;
    bool within;
};

// Two-sided bound c1^p <= ||T^p S^{-p}|| <= c2^p for 0 < p <= 1, the fractional
// power interpolation of the sandwich c1^2 S^2 <= T^2 <= c2^2 S^2.
inline HeinzCheck heinz_bound_check(const HermitianOperator& S, const HermitianOperator& T,
                                    double c1, double c2, double p, double tol = 1e-9) {
    HeinzCheck h;
    h.p = p;
    Matrix tp = matrix_pow(T, p, 0.0).matrix();
    Matrix smp = matrix_pow(S, -p, 0.0).matrix();
    h.norm_TpSmp = op_norm_general(tp * smp);
    h.lower = std::pow(c1, p);
    h.upper = std::pow(c2, p);
    double slack = tol * (1.0 + h.upper);
    h.within = h.norm_TpSmp >= h.lower - slack && h.norm_TpSmp <= h.upper + slack;
    return h;
}

struct IntertwiningResidual {
    double rX, rY;
};

// TX = XS - W0(X - Y)/2 and TY = -YS + W0(X - Y)/2, which is how the
// one-particle transformation talks to the full Hamiltonian.
inline IntertwiningResidual intertwining_residual(const PairModel& model,
                                                  const HermitianOperator& S,
                                                  const SymplecticPair& pair) {
    Matrix w0 = build_W0(model).matrix();
    Matrix half_w0_xmy = 0.5 * w0 * (pair.X - pair.Y);
    IntertwiningResidual r;
    r.rX = max_abs(model.T.matrix() * pair.X - pair.X * S.matrix() + half_w0_xmy);
    r.rY = max_abs(model.T.matrix() * pair.Y + pair.Y * S.matrix() - half_w0_xmy);
    return r;
}

struct FactorizationCheck {
    double residual;
    double det_one_plus_A; // |det(1 + A)|
};

// S^{3/2} = T^{3/2} (1 + A^H) (T^{1/2} S^{-1/2}) with A = sum_n lambda_n |g_n><T^{-1}g_n|.
// Verifies that the 3/2 power of S factors through the same power of T, and
// that 1 + A is invertible, which is what makes the factorization usable.
inline FactorizationCheck three_halves_factorization(const PairModel& model,
                                                     const HermitianOperator& S) {
    check_coupling_dims(model);
    if (S.dim() != model.T.dim())
        throw DimensionMismatch("three_halves_factorization", model.T.dim(), S.dim());
    const auto n = model.T.dim();

    Matrix t_inv = matrix_pow(model.T, -1.0, 0.0).matrix();
    Matrix a = Matrix::Zero(n, n);
    for (const auto& c : model.couplings) {
        Vector tg = t_inv * c.g;
        a += c.lambda * (c.g * tg.adjoint());
    }

    FactorizationCheck f;
    f.det_one_plus_A = std::abs((Matrix::Identity(n, n) + a).determinant());
    if (f.det_one_plus_A < 1e-12) throw SingularOnePlusA(f.det_one_plus_A);

    Matrix s_32 = matrix_pow(S, 1.5, 0.0).matrix();
    Matrix t_32 = matrix_pow(model.T, 1.5, 0.0).matrix();
    Matrix t_half = matrix_sqrt(model.T, 0.0).matrix();
    Matrix s_inv_half = matrix_inv_sqrt(S, 0.0).matrix();
    f.residual = max_abs(s_32 - t_32 * (Matrix::Identity(n, n) + a.adjoint()) * (t_half * s_inv_half));
    return f;
}

} // namespace bogodiag
