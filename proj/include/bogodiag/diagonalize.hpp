#pragma once

#include <algorithm>
#include <cmath>

#include "bogoliubov.hpp"

namespace bogodiag {

struct DiagonalizationResult {
    HermitianOperator S; // sqrt(T^2 + W), the diagonalized one-particle energy
    double E;            // ground state energy, tr(S - T)/2
    double E_crosscheck; // same number via sum lambda_n ||g_n||^2 / 4 - tr(Y S Y^H)
    double c1, c2;       // sandwich constants, c1^2 S^2 <= T^2 <= c2^2 S^2
    double sandwich_margin; // min over both sides of the smallest eigenvalue
};

inline DiagonalizationResult diagonalize(const PairModel& model) {
    auto report = validate_conditions(model);
    if (!report.pass) throw ConditionsNotMet(report.epsilon);

    Matrix t2 = model.T.matrix() * model.T.matrix();
    Matrix hp = t2 + build_W(model).matrix();

    DiagonalizationResult r;
    r.S = matrix_sqrt(HermitianOperator::trusted(hp), 0.0);
    r.E = 0.5 * (r.S.matrix().trace().real() - model.T.matrix().trace().real());

    auto pair = build_xy(r.S, model.T, model.J);
    double vacuum_energy = 0.0;
    for (const auto& c : model.couplings) vacuum_energy += 0.25 * c.lambda * c.g.squaredNorm();
    r.E_crosscheck =
        vacuum_energy - (pair.Y * r.S.matrix() * pair.Y.adjoint()).trace().real();

    r.c1 = 1.0 / std::sqrt(1.0 + report.D1);
    r.c2 = 1.0 / std::sqrt(report.epsilon);

    Matrix s2 = r.S.matrix() * r.S.matrix();
    double lower = eig_hermitian(HermitianOperator::trusted(t2 - r.c1 * r.c1 * s2)).eigenvalues(0);
    double upper = eig_hermitian(HermitianOperator::trusted(r.c2 * r.c2 * s2 - t2)).eigenvalues(0);
    r.sandwich_margin = std::min(lower, upper);
    return r;
}

} // namespace bogodiag
