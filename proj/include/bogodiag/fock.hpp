#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "bogoliubov.hpp"
#include "diagonalize.hpp"
#include "numeric.hpp"

namespace bogodiag {

// Bosonic Fock space over C^modes truncated by total quanta <= nmax. States
// are occupation vectors ordered by total quanta first, then by filling the
// leading modes first, so index 0 is the vacuum and the states with total
// quanta <= q form a contiguous prefix of the basis.
class FockSpace {
public:
    static constexpr long default_capacity = 20000;

    FockSpace(int modes, int nmax, long capacity = default_capacity)
        : modes_(modes), nmax_(nmax) {
        if (modes < 1) throw Error("need at least one mode");
        if (nmax < 0) throw Error("quanta cutoff must be nonnegative");
        long expect = basis_count(nmax, modes, capacity);
        if (expect > capacity) throw CapacityExceeded(expect, capacity);

        std::vector<int> occ(modes, 0);
        for (int level = 0; level <= nmax; ++level) enumerate(occ, 0, level, level);
        for (long i = 0; i < dim(); ++i) index_.emplace(key(occs_[i]), i);
    }

    int modes() const { return modes_; }
    int nmax() const { return nmax_; }
    long dim() const { return static_cast<long>(occs_.size()); }

    const std::vector<int>& occupation(long idx) const { return occs_[idx]; }
    int total_quanta(long idx) const { return totals_[idx]; }

    long index_of(const std::vector<int>& occ) const {
        auto it = index_.find(key(occ));
        return it == index_.end() ? -1 : it->second;
    }

    // number of basis states with total quanta <= q (a prefix of the basis)
    long sector_dim(int q) const {
        if (q < 0) return 0;
        if (q > nmax_) q = nmax_;
        return basis_count(q, modes_, dim());
    }

private:
    void enumerate(std::vector<int>& occ, int mode, int remaining, int level) {
        if (mode == modes_ - 1) {
            occ[mode] = remaining;
            occs_.push_back(occ);
            totals_.push_back(level);
            occ[mode] = 0;
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            occ[mode] = k;
            enumerate(occ, mode + 1, remaining - k, level);
        }
        occ[mode] = 0;
    }

    static std::string key(const std::vector<int>& occ) {
        std::string s(occ.size(), '\0');
        for (size_t i = 0; i < occ.size(); ++i) s[i] = static_cast<char>(occ[i]);
        return s;
    }

    int modes_, nmax_;
    std::vector<std::vector<int>> occs_;
    std::vector<int> totals_;
    std::unordered_map<std::string, long> index_;
};

// Matrix of an operator on the truncated space together with the largest
// change in total quanta it can cause. Identities involving a raise of k
// quanta are only exact on states with quanta <= nmax - k.
struct FockOperator {
    Matrix mat;
    int quanta_degree;
};

namespace detail {

inline void check_mode(const FockSpace& space, int mode) {
    if (mode < 0 || mode >= space.modes()) throw ModeOutOfRange(mode, space.modes());
}

} // namespace detail

inline FockOperator creation_op(const FockSpace& space, int mode) {
    detail::check_mode(space, mode);
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    std::vector<int> occ;
    for (long idx = 0; idx < space.dim(); ++idx) {
        if (space.total_quanta(idx) >= space.nmax()) continue; // raised state truncated away
        occ = space.occupation(idx);
        occ[mode] += 1;
        m(space.index_of(occ), idx) = std::sqrt(static_cast<double>(occ[mode]));
    }
    return {std::move(m), 1};
}

inline FockOperator annihilation_op(const FockSpace& space, int mode) {
    detail::check_mode(space, mode);
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    std::vector<int> occ;
    for (long idx = 0; idx < space.dim(); ++idx) {
        occ = space.occupation(idx);
        if (occ[mode] == 0) continue;
        double amp = std::sqrt(static_cast<double>(occ[mode]));
        occ[mode] -= 1;
        m(space.index_of(occ), idx) = amp;
    }
    return {std::move(m), 1};
}

// dGamma(A) = sum_ij A_ij a_i^dag a_j. Preserves total quanta, so the
// truncated matrix is exact on the whole space.
inline FockOperator second_quantize(const FockSpace& space, const HermitianOperator& a) {
    if (a.dim() != space.modes()) throw DimensionMismatch("second_quantize", space.modes(), a.dim());
    const Matrix& one_body = a.matrix();
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    std::vector<int> target;
    for (long idx = 0; idx < space.dim(); ++idx) {
        const auto& occ = space.occupation(idx);
        for (int j = 0; j < space.modes(); ++j) {
            if (occ[j] == 0) continue;
            for (int i = 0; i < space.modes(); ++i) {
                if (one_body(i, j) == Complex(0, 0)) continue;
                target = occ;
                target[j] -= 1;
                target[i] += 1;
                double amp = std::sqrt(static_cast<double>(occ[j]) * static_cast<double>(target[i]));
                m(space.index_of(target), idx) += one_body(i, j) * amp;
            }
        }
    }
    return {std::move(m), 0};
}

// Segal field Phi(f) = (A(f) + A*(f)) / sqrt 2 with A(f) = sum_i conj(f_i) a_i,
// antilinear in f.
inline FockOperator segal_field(const FockSpace& space, const Vector& f) {
    if (f.size() != space.modes()) throw DimensionMismatch("segal_field", space.modes(), f.size());
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    std::vector<int> occ;
    for (long idx = 0; idx < space.dim(); ++idx) {
        bool can_raise = space.total_quanta(idx) < space.nmax();
        for (int i = 0; i < space.modes(); ++i) {
            if (f(i) == Complex(0, 0)) continue;
            occ = space.occupation(idx);
            if (occ[i] > 0) {
                double amp = std::sqrt(static_cast<double>(occ[i]));
                occ[i] -= 1;
                m(space.index_of(occ), idx) += std::conj(f(i)) * amp * inv_sqrt2;
                occ[i] += 1;
            }
            if (can_raise) {
                occ[i] += 1;
                m(space.index_of(occ), idx) += f(i) * std::sqrt(static_cast<double>(occ[i])) * inv_sqrt2;
                occ[i] -= 1;
            }
        }
    }
    return {std::move(m), 1};
}

// Annihilation part A(f) alone; lowering only, exact on the whole space.
inline FockOperator annihilator(const FockSpace& space, const Vector& f) {
    if (f.size() != space.modes()) throw DimensionMismatch("annihilator", space.modes(), f.size());
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    std::vector<int> occ;
    for (long idx = 0; idx < space.dim(); ++idx) {
        for (int i = 0; i < space.modes(); ++i) {
            if (f(i) == Complex(0, 0)) continue;
            occ = space.occupation(idx);
            if (occ[i] == 0) continue;
            double amp = std::sqrt(static_cast<double>(occ[i]));
            occ[i] -= 1;
            m(space.index_of(occ), idx) += std::conj(f(i)) * amp;
        }
    }
    return {std::move(m), 1};
}

// H = dGamma(T) + (1/2) sum_n lambda_n Phi(g_n)^2 on the truncated space.
inline FockOperator assemble_hamiltonian(const FockSpace& space, const PairModel& model) {
    check_coupling_dims(model);
    if (model.T.dim() != space.modes())
        throw DimensionMismatch("assemble_hamiltonian", space.modes(), model.T.dim());
    Matrix h = second_quantize(space, model.T).mat;
    for (const auto& c : model.couplings) {
        Matrix phi = segal_field(space, c.g).mat;
        h += (0.5 * c.lambda) * (phi * phi);
    }
    return {std::move(h), 2};
}

inline RealVector lowest_eigenvalues(const Matrix& m, int k) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
    int take = std::min<int>(k, static_cast<int>(solver.eigenvalues().size()));
    return solver.eigenvalues().head(take);
}

struct SpectrumComparison {
    RealVector eigs_H;    // lowest k of the assembled Hamiltonian
    RealVector eigs_pred; // lowest k of dGamma(S) + E
    double max_dev;
};

inline SpectrumComparison spectrum_compare(const FockSpace& space, const PairModel& model,
                                           const DiagonalizationResult& diag, int k) {
    SpectrumComparison cmp;
    cmp.eigs_H = lowest_eigenvalues(assemble_hamiltonian(space, model).mat, k);
    Matrix pred = second_quantize(space, diag.S).mat;
    pred += diag.E * Matrix::Identity(space.dim(), space.dim());
    cmp.eigs_pred = lowest_eigenvalues(pred, k);
    cmp.max_dev = (cmp.eigs_H - cmp.eigs_pred).cwiseAbs().maxCoeff();
    return cmp;
}

inline SpectrumComparison spectrum_compare(const FockSpace& space, const PairModel& model, int k) {
    return spectrum_compare(space, model, diagonalize(model), k);
}

// B(f) = A(Xf) + A*(J Y f), the annihilation operator of the transformed
// Hamiltonian expressed in the original modes.
inline FockOperator b_operator(const FockSpace& space, const Vector& f,
                               const SymplecticPair& pair, const Conjugation& j) {
    if (f.size() != space.modes()) throw DimensionMismatch("b_operator", space.modes(), f.size());
    Vector lower = pair.X * f;
    Vector raise = j.apply(pair.Y * f);
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    std::vector<int> occ;
    for (long idx = 0; idx < space.dim(); ++idx) {
        bool can_raise = space.total_quanta(idx) < space.nmax();
        for (int i = 0; i < space.modes(); ++i) {
            occ = space.occupation(idx);
            if (occ[i] > 0 && lower(i) != Complex(0, 0)) {
                double amp = std::sqrt(static_cast<double>(occ[i]));
                occ[i] -= 1;
                m(space.index_of(occ), idx) += std::conj(lower(i)) * amp;
                occ[i] += 1;
            }
            if (can_raise && raise(i) != Complex(0, 0)) {
                occ[i] += 1;
                m(space.index_of(occ), idx) += raise(i) * std::sqrt(static_cast<double>(occ[i]));
                occ[i] -= 1;
            }
        }
    }
    return {std::move(m), 1};
}

struct CommutatorCheck {
    double res_annih; // [H, B(f)] + B(Sf), max entry over the safe sector
    double res_creat; // [H, B*(f)] - B*(Sf)
};

// The products change total quanta by at most 3, so both identities are exact
// matrix identities on states with quanta <= nmax - 3.
inline CommutatorCheck commutator_check(const FockSpace& space, const PairModel& model,
                                        const DiagonalizationResult& diag,
                                        const SymplecticPair& pair, const Vector& f) {
    if (space.nmax() < 3) throw SectorTooSmall(space.nmax(), 3);
    Matrix h = assemble_hamiltonian(space, model).mat;
    Matrix b = b_operator(space, f, pair, model.J).mat;
    Vector sf = diag.S.matrix() * f;
    Matrix bs = b_operator(space, sf, pair, model.J).mat;

    long safe = space.sector_dim(space.nmax() - 3);
    Matrix annih = h * b - b * h + bs;
    Matrix creat = h * b.adjoint() - b.adjoint() * h - bs.adjoint();
    CommutatorCheck c;
    c.res_annih = max_abs(annih.topLeftCorner(safe, safe));
    c.res_creat = max_abs(creat.topLeftCorner(safe, safe));
    return c;
}

struct FamilyStats {
    std::string family;
    long checked = 0;
    long violations = 0;
    // inequalities: worst (lhs - rhs)/(1 + |rhs|) seen; identity: worst |residual|
    double worst_margin = 0.0;
};

struct InequalityReport {
    std::vector<FamilyStats> families;
    long total_violations = 0;
};

// Randomized check of the operator bounds that control the interaction term.
// States are complex Gaussian vectors supported on quanta <= nmax - 2 so that
// every quadratic expression below is evaluated without truncation error.
inline InequalityReport inequality_suite(const FockSpace& space, const PairModel& model,
                                         long samples, std::uint64_t seed,
                                         double rel_slack = 1e-10, double identity_tol = 1e-9) {
    check_coupling_dims(model);
    if (model.T.dim() != space.modes())
        throw DimensionMismatch("inequality_suite", space.modes(), model.T.dim());
    if (space.nmax() < 2) throw SectorTooSmall(space.nmax(), 2);

    std::vector<Vector> fs;
    for (const auto& c : model.couplings) fs.push_back(c.g);
    if (fs.empty()) // free field: still exercise the bounds on basis vectors
        for (int i = 0; i < std::min(space.modes(), 2); ++i)
            fs.push_back(Vector::Unit(space.modes(), i));

    Matrix t_inv_half = matrix_inv_sqrt(model.T, 0.0).matrix();
    Matrix t_half = matrix_sqrt(model.T, 0.0).matrix();
    Matrix dgamma_T = second_quantize(space, model.T).mat;
    Matrix dgamma_T2 =
        second_quantize(space, HermitianOperator::trusted(model.T.matrix() * model.T.matrix())).mat;

    std::vector<Matrix> phis, phi_sqs, lowers;
    std::vector<double> f_sq, tmf_norm, tpf_sq;
    for (const auto& f : fs) {
        Matrix phi = segal_field(space, f).mat;
        phi_sqs.push_back(phi * phi);
        phis.push_back(std::move(phi));
        lowers.push_back(annihilator(space, f).mat);
        f_sq.push_back(f.squaredNorm());
        tmf_norm.push_back((t_inv_half * f).norm());
        tpf_sq.push_back((t_half * f).squaredNorm());
    }
    Matrix interaction;
    double sum_tpf = 0.0;
    if (!model.couplings.empty()) {
        interaction = Matrix::Zero(space.dim(), space.dim());
        for (const auto& sq : phi_sqs) interaction += sq;
        for (const auto& c : model.couplings) sum_tpf += (t_half * c.g).squaredNorm();
    }

    InequalityReport report;
    auto family = [&](const std::string& name) -> FamilyStats& {
        for (auto& f : report.families)
            if (f.family == name) return f;
        report.families.push_back({name, 0, 0, 0.0});
        return report.families.back();
    };
    auto record_bound = [&](const std::string& name, double lhs, double rhs) {
        auto& st = family(name);
        double margin = (lhs - rhs) / (1.0 + std::abs(rhs));
        if (st.checked == 0 || margin > st.worst_margin) st.worst_margin = margin;
        st.checked += 1;
        if (margin > rel_slack) st.violations += 1;
    };
    auto record_identity = [&](const std::string& name, double residual) {
        auto& st = family(name);
        st.checked += 1;
        residual = std::abs(residual);
        if (residual > st.worst_margin) st.worst_margin = residual;
        if (residual > identity_tol) st.violations += 1;
    };

    long sector = space.sector_dim(space.nmax() - 2);
    Rng rng(seed);
    for (long s = 0; s < samples; ++s) {
        Vector psi = Vector::Zero(space.dim());
        for (long i = 0; i < sector; ++i) psi(i) = rng.complex_gaussian();
        psi /= psi.norm();

        Vector dT_psi = dgamma_T * psi;
        double n_dT = dT_psi.norm();
        double q_dT2 = std::max(0.0, (psi.adjoint() * (dgamma_T2 * psi))(0).real());

        for (size_t k = 0; k < fs.size(); ++k) {
            Vector phi2_psi = phi_sqs[k] * psi;
            record_bound("field_square_relative_bound", 0.5 * phi2_psi.norm(),
                         tmf_norm[k] * tmf_norm[k] * n_dT + f_sq[k]);

            // exact identity: -2 Re<dG(T)psi, Phi^2 psi>
            //                 = -2 ||dG(T)^{1/2} Phi psi||^2 + ||T^{1/2}f||^2 ||psi||^2
            Vector phi_psi = phis[k] * psi;
            double quad = (phi_psi.adjoint() * (dgamma_T * phi_psi))(0).real();
            double residual =
                -2.0 * (dT_psi.adjoint() * phi2_psi)(0).real() + 2.0 * quad - tpf_sq[k];
            record_identity("field_square_cross_identity", residual);
        }

        double gap = std::sqrt(std::max(0.0, n_dT * n_dT - q_dT2));
        for (size_t k1 = 0; k1 < fs.size(); ++k1)
            for (size_t k2 = 0; k2 < fs.size(); ++k2) {
                double lhs = (lowers[k1] * (lowers[k2] * psi)).norm();
                record_bound("double_lowering_bound", lhs, tmf_norm[k1] * tmf_norm[k2] * gap);
            }

        if (!model.couplings.empty()) {
            Vector w = interaction * psi;
            for (double c : {0.5, 1.0, 2.0}) {
                Vector v = c * w;
                double lhs = n_dT * n_dT + v.squaredNorm();
                double rhs = (dT_psi + v).squaredNorm() + c * sum_tpf;
                record_bound("sum_square_lower_bound", lhs, rhs);
            }
        }
    }

    for (const auto& f : report.families) report.total_violations += f.violations;
    return report;
}

} // namespace bogodiag
