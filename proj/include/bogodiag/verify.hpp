#pragma once

#include <chrono>
#include <map>

#include "report.hpp"

namespace bogodiag {

struct VerifyOptions {
    std::vector<int> nmax_list{8, 16};
    long samples = 200;
    std::uint64_t seed = 42;
    int k_low = 5; // eigenvalues compared per truncation

    // every bound the pipeline applies, overridable by name from the CLI
    std::map<std::string, double> tol{
        {"symplectic", 1e-9},        // x dim, on r1..r4
        {"energy_crosscheck", 1e-9}, // x (1 + |E|)
        {"sandwich", 1e-9},          // sandwich_margin >= -tol
        {"heinz", 1e-9},             // interpolation bound slack
        {"intertwining", 1e-9},
        {"factorization", 1e-9},
        {"spectrum", 1e-5},          // max_dev at the largest nmax
        {"spectrum_monotone", 1e-12}, // allowed increase between nmax steps
        {"commutator", 1e-9},
        {"inequality_slack", 1e-10}, // relative slack before a bound counts as violated
        {"identity", 1e-9},          // cross term identity residual
        {"oracle", 1e-5},            // untransformed assembly vs closed form
        {"fiber_ons", 1e-10},        // E_P vs the orthogonal-family shortcut
        {"free_field", 1e-12},       // S = T, E = 0, Y = 0 when there is no coupling
    };

    void override_tol(const std::string& name, double value) {
        auto it = tol.find(name);
        if (it == tol.end()) throw ConfigParseError("(cli)", name, "unknown tolerance");
        it->second = value;
    }
};

struct VerifyOutcome {
    RunReport report;
    std::optional<DiagonalizationResult> diag;
};

namespace pipeline {

class Stopwatch {
public:
    explicit Stopwatch(RunReport& r) : report_(r), last_(clock::now()) {}
    void lap(const std::string& phase) {
        auto now = clock::now();
        double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        report_.timings.push_back({phase, ms});
        last_ = now;
    }

private:
    using clock = std::chrono::steady_clock;
    RunReport& report_;
    clock::time_point last_;
};

inline void add_residual(RunReport& r, const std::string& name, double value, double bound) {
    bool ok = value <= bound;
    r.residuals.push_back({name, value, bound, ok});
    if (!ok) r.pass = false;
}

// for quantities that must stay above a threshold (margins, determinants)
inline void add_floor(RunReport& r, const std::string& name, double value, double floor) {
    bool ok = value >= floor;
    r.residuals.push_back({name, value, floor, ok});
    if (!ok) r.pass = false;
}

inline RunReport start(const LoadedModel& loaded, const char* command,
                       const VerifyOptions& opts) {
    RunReport r;
    r.model_id = loaded.model_id;
    r.kind = loaded.kind;
    r.command = command;
    r.seed = opts.seed;
    r.samples = opts.samples;
    r.nmax_list = opts.nmax_list;
    return r;
}

// conditions, diagonalization, and the analytic identity residuals; fills
// outcome.diag when the model passes the stability conditions
inline bool analytic_phase(const LoadedModel& loaded, const VerifyOptions& opts, RunReport& r,
                           std::optional<DiagonalizationResult>& diag_out, bool with_residuals) {
    Stopwatch watch(r);
    const PairModel& model = loaded.model;

    auto cond = validate_conditions(model);
    r.conditions = cond;
    watch.lap("validate");
    if (!cond.pass) {
        r.pass = false;
        return false;
    }

    auto diag = diagonalize(model);
    watch.lap("diagonalize");
    std::optional<SymplecticPair> pair_opt;
    try {
        pair_opt = build_xy(diag.S, model.T, model.J);
    } catch (const SymplecticResidualExceeded& e) {
        // conditioning breakdown: report what is known and fail the run
        add_residual(r, "symplectic_gate", e.worst, e.bound);
        r.scalars.push_back({"E", diag.E});
        r.scalars.push_back({"E_crosscheck", diag.E_crosscheck});
        return false;
    }
    const SymplecticPair& pair = *pair_opt;
    watch.lap("symplectic");

    DiagSummary d;
    d.E = diag.E;
    d.E_crosscheck = diag.E_crosscheck;
    d.c1 = diag.c1;
    d.c2 = diag.c2;
    d.eigmin_S = operator_metrics(diag.S).eigmin;
    d.sandwich_margin = diag.sandwich_margin;
    d.hs_norm_Y = pair.hs_norm_Y;
    r.diag = d;
    if (loaded.energy_offset != 0.0) r.scalars.push_back({"energy_offset", loaded.energy_offset});

    add_residual(r, "energy_crosscheck", std::abs(diag.E - diag.E_crosscheck),
                 opts.tol.at("energy_crosscheck") * (1.0 + std::abs(diag.E)));
    add_floor(r, "sandwich_margin", diag.sandwich_margin, -opts.tol.at("sandwich"));

    if (with_residuals) {
        double dim = static_cast<double>(model.T.dim());
        double sym_bound = opts.tol.at("symplectic") * dim;
        add_residual(r, "symplectic_r1", pair.r1, sym_bound);
        add_residual(r, "symplectic_r2", pair.r2, sym_bound);
        add_residual(r, "symplectic_r3", pair.r3, sym_bound);
        add_residual(r, "symplectic_r4", pair.r4, sym_bound);

        for (double p : {0.25, 0.5, 1.0}) {
            auto h = heinz_bound_check(diag.S, model.T, diag.c1, diag.c2, p,
                                       opts.tol.at("heinz"));
            std::string name = "heinz_p" + format_double(p);
            r.residuals.push_back({name, h.norm_TpSmp, h.upper, h.within});
            if (!h.within) r.pass = false;
        }

        auto inter = intertwining_residual(model, diag.S, pair);
        add_residual(r, "intertwining_X", inter.rX, opts.tol.at("intertwining"));
        add_residual(r, "intertwining_Y", inter.rY, opts.tol.at("intertwining"));

        auto fact = three_halves_factorization(model, diag.S);
        add_residual(r, "factorization", fact.residual, opts.tol.at("factorization"));
        r.scalars.push_back({"det_one_plus_A", fact.det_one_plus_A});

        if (model.couplings.empty()) {
            double ff = opts.tol.at("free_field");
            add_residual(r, "free_field_S_minus_T",
                         max_abs(diag.S.matrix() - model.T.matrix()), ff);
            add_residual(r, "free_field_energy", std::abs(diag.E), ff);
            add_residual(r, "free_field_Y_norm", pair.hs_norm_Y, ff);
        }
        watch.lap("analytic_residuals");
    }

    diag_out = std::move(diag);
    return true;
}

inline void spectrum_phase(const LoadedModel& loaded, const VerifyOptions& opts, RunReport& r,
                           const DiagonalizationResult& diag) {
    if (opts.nmax_list.empty()) return;
    Stopwatch watch(r);
    const PairModel& model = loaded.model;
    int modes = static_cast<int>(model.T.dim());

    std::vector<double> devs;
    for (size_t i = 0; i < opts.nmax_list.size(); ++i) {
        int nmax = opts.nmax_list[i];
        FockSpace space(modes, nmax);
        auto cmp = spectrum_compare(space, model, diag, opts.k_low);
        r.spectra.push_back({nmax, cmp.eigs_H, cmp.eigs_pred, cmp.max_dev});
        devs.push_back(cmp.max_dev);
        bool last = i + 1 == opts.nmax_list.size();
        if (last)
            add_residual(r, "spectrum_dev_nmax" + std::to_string(nmax), cmp.max_dev,
                         opts.tol.at("spectrum"));
        else
            r.scalars.push_back({"spectrum_dev_nmax" + std::to_string(nmax), cmp.max_dev});
        watch.lap("spectrum_nmax" + std::to_string(nmax));
    }
    if (devs.size() >= 2) {
        double worst_increase = 0.0;
        for (size_t i = 1; i < devs.size(); ++i)
            worst_increase = std::max(worst_increase, devs[i] - devs[i - 1]);
        add_residual(r, "spectrum_monotone", worst_increase, opts.tol.at("spectrum_monotone"));
    }
}

inline void fock_identity_phase(const LoadedModel& loaded, const VerifyOptions& opts,
                                RunReport& r, const DiagonalizationResult& diag) {
    if (opts.nmax_list.empty()) return;
    Stopwatch watch(r);
    const PairModel& model = loaded.model;
    int modes = static_cast<int>(model.T.dim());
    int nmax = opts.nmax_list.back();

    if (nmax >= 3) {
        FockSpace space(modes, nmax);
        auto pair = build_xy(diag.S, model.T, model.J);
        Vector f = model.couplings.empty() ? Vector(Vector::Unit(modes, 0))
                                           : model.couplings.front().g;
        auto c = commutator_check(space, model, diag, pair, f);
        add_residual(r, "commutator_annihilator", c.res_annih, opts.tol.at("commutator"));
        add_residual(r, "commutator_creator", c.res_creat, opts.tol.at("commutator"));
        watch.lap("commutators");
    }

    if (nmax >= 2 && opts.samples > 0) {
        FockSpace space(modes, nmax);
        auto rep = inequality_suite(space, model, opts.samples, opts.seed,
                                    opts.tol.at("inequality_slack"), opts.tol.at("identity"));
        for (const auto& fam : rep.families) {
            r.inequality_counts.push_back({fam.family, fam.checked, fam.violations,
                                           fam.worst_margin});
            if (fam.family == "field_square_cross_identity")
                add_residual(r, "identity_worst", fam.worst_margin, opts.tol.at("identity"));
        }
        add_residual(r, "inequality_violations", static_cast<double>(rep.total_violations), 0.0);
        watch.lap("inequalities");
    }
}

inline void oracle_phase(const LoadedModel& loaded, const VerifyOptions& opts, RunReport& r,
                         const DiagonalizationResult& diag) {
    if (opts.nmax_list.empty()) return;
    Stopwatch watch(r);
    int nmax = opts.nmax_list.back();
    double tol = opts.tol.at("oracle");
    int modes = static_cast<int>(loaded.model.T.dim());

    if (loaded.oscillator || loaded.pauli_fierz) {
        double total = diag.E + loaded.energy_offset;
        r.scalars.push_back({"ground_energy_total", total});
        FockSpace space(modes, nmax);
        Matrix direct = loaded.oscillator
                            ? oscillator_field_oracle(space, loaded.oscillator->omega,
                                                      loaded.oscillator->lambda,
                                                      loaded.oscillator->T, loaded.oscillator->g)
                                  .mat
                            : pauli_fierz_oracle(space, loaded.pauli_fierz->omegas,
                                                 loaded.pauli_fierz->T, loaded.pauli_fierz->gs)
                                  .mat;
        add_residual(r, "oracle_direct", std::abs(lowest_eigenvalues(direct, 1)(0) - total), tol);

        Matrix trans = assemble_hamiltonian(space, loaded.model).mat;
        trans += loaded.energy_offset * Matrix::Identity(space.dim(), space.dim());
        add_residual(r, "oracle_transformed", std::abs(lowest_eigenvalues(trans, 1)(0) - total),
                     tol);
        watch.lap("oracle");
    }

    if (loaded.fiber) {
        const auto& p = *loaded.fiber;
        auto fr = ti_fiber(p.T, p.gs, p.P);
        r.scalars.push_back({"E_P", fr.E_P});
        r.scalars.push_back({"ons_defect", fr.ons_defect});
        r.scalars.push_back({"ir_diagnostic", fr.ir_diagnostic});
        if (fr.E_P_ons) {
            r.scalars.push_back({"E_P_ons", *fr.E_P_ons});
            add_residual(r, "fiber_ons_agreement", std::abs(fr.E_P - *fr.E_P_ons),
                         opts.tol.at("fiber_ons"));
        }
        FockSpace space(modes, nmax);
        auto h = fiber_hamiltonian(space, p.T, p.gs, p.P);
        add_residual(r, "fiber_oracle", std::abs(lowest_eigenvalues(h.mat, 1)(0) - fr.E_P), tol);
        watch.lap("fiber");
    }
}

} // namespace pipeline

inline VerifyOutcome run_validate(const LoadedModel& loaded, const VerifyOptions& opts) {
    VerifyOutcome out;
    out.report = pipeline::start(loaded, "validate", opts);
    auto cond = validate_conditions(loaded.model);
    out.report.conditions = cond;
    out.report.pass = cond.pass;
    return out;
}

inline VerifyOutcome run_diagonalize(const LoadedModel& loaded, const VerifyOptions& opts) {
    VerifyOutcome out;
    out.report = pipeline::start(loaded, "diagonalize", opts);
    pipeline::analytic_phase(loaded, opts, out.report, out.diag, false);
    return out;
}

inline VerifyOutcome run_verify(const LoadedModel& loaded, const VerifyOptions& opts) {
    VerifyOutcome out;
    out.report = pipeline::start(loaded, "verify", opts);
    if (!pipeline::analytic_phase(loaded, opts, out.report, out.diag, true)) return out;
    pipeline::spectrum_phase(loaded, opts, out.report, *out.diag);
    pipeline::fock_identity_phase(loaded, opts, out.report, *out.diag);
    pipeline::oracle_phase(loaded, opts, out.report, *out.diag);
    return out;
}

inline VerifyOutcome run_spectrum(const LoadedModel& loaded, const VerifyOptions& opts) {
    VerifyOutcome out;
    out.report = pipeline::start(loaded, "spectrum", opts);
    if (!pipeline::analytic_phase(loaded, opts, out.report, out.diag, false)) return out;
    pipeline::spectrum_phase(loaded, opts, out.report, *out.diag);
    return out;
}

// E(P) and the infrared diagnostic along scale * P for the fiber model
inline VerifyOutcome run_sweep(const LoadedModel& loaded, const VerifyOptions& opts) {
    if (!loaded.fiber)
        throw ConfigParseError("(cli)", "sweep", "requires a ti_fiber model");
    VerifyOutcome out;
    out.report = pipeline::start(loaded, "sweep", opts);
    if (!pipeline::analytic_phase(loaded, opts, out.report, out.diag, false)) return out;

    const auto& p = *loaded.fiber;
    double worst_ons = 0.0;
    bool have_ons = true;
    for (int i = 0; i <= 8; ++i) {
        double scale = 0.25 * i;
        std::vector<double> scaled(p.P.size());
        for (size_t k = 0; k < p.P.size(); ++k) scaled[k] = scale * p.P[k];
        auto fr = ti_fiber(p.T, p.gs, scaled);
        out.report.sweep.push_back({scale, fr.E_P, fr.ir_diagnostic});
        if (fr.E_P_ons)
            worst_ons = std::max(worst_ons, std::abs(fr.E_P - *fr.E_P_ons));
        else
            have_ons = false;
    }
    if (have_ons)
        pipeline::add_residual(out.report, "sweep_ons_agreement", worst_ons,
                               opts.tol.at("fiber_ons"));
    return out;
}

} // namespace bogodiag
