// Release gate: one line per criterion, exit status = number of failures.
// Random suites are seeded, so reruns print identical numbers. Criteria 8
// and 9 read the bundled configs; pass the config directory as argv[1]
// (default "configs").

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <bogodiag/config.hpp>
#include <bogodiag/models.hpp>
#include <bogodiag/verify.hpp>

#include "support/test_helpers.hpp"

using namespace bogodiag;

namespace {

int failures = 0;

void line(const char* name, bool ok, const std::string& detail) {
    std::printf("%s %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class F>
void guarded(const char* name, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        line(name, false, std::string("exception: ") + e.what());
    }
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

HermitianOperator diag_op(std::vector<double> entries) {
    auto n = static_cast<Eigen::Index>(entries.size());
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<size_t>(i)];
    return HermitianOperator::trusted(m);
}

Vector rvec(std::vector<double> entries) {
    auto n = static_cast<Eigen::Index>(entries.size());
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = entries[static_cast<size_t>(i)];
    return v;
}

// Criteria 1, 2, 3 and 7 all run over the same seeded population of valid
// models: dimensions up to 32, up to 8 couplings, epsilon kept >= 0.1.
struct SuiteResult {
    double worst_sym = 0.0;      // max residual / dim
    double min_margin = 0.0;     // most negative sandwich margin
    double worst_energy = 0.0;   // max |E - E_crosscheck| / (1 + |E|)
    double worst_inter = 0.0;
    double worst_fact = 0.0;
    double min_det = 1e300;
    double elapsed = 0.0;
    int count = 0;
};

SuiteResult run_random_suite() {
    Timer t;
    Rng rng(42);
    SuiteResult s;
    for (int i = 0; i < 200; ++i) {
        int dim = rng.integer(1, 32);
        int nc = rng.integer(1, 8);
        auto model = testsupport::random_valid_model(rng, dim, nc);
        auto diag = diagonalize(model);
        auto pair = build_xy(diag.S, model.T, model.J, 1.0); // gated below, not here
        double worst = std::max({pair.r1, pair.r2, pair.r3, pair.r4});
        s.worst_sym = std::max(s.worst_sym, worst / static_cast<double>(dim));
        s.min_margin = std::min(s.min_margin, diag.sandwich_margin);
        s.worst_energy = std::max(
            s.worst_energy, std::abs(diag.E - diag.E_crosscheck) / (1.0 + std::abs(diag.E)));
        auto inter = intertwining_residual(model, diag.S, pair);
        s.worst_inter = std::max({s.worst_inter, inter.rX, inter.rY});
        auto fact = three_halves_factorization(model, diag.S);
        s.worst_fact = std::max(s.worst_fact, fact.residual);
        s.min_det = std::min(s.min_det, fact.det_one_plus_A);
        ++s.count;
    }
    s.elapsed = t.seconds();
    return s;
}

void criterion4() {
    struct Case {
        double lambda, expected;
    };
    const Case cases[] = {{1.0, 0.5 * (std::sqrt(2.0) - 1.0)},
                          {-0.5, 0.5 * (std::sqrt(0.5) - 1.0)}};
    double worst = 0.0, slowest = 0.0;
    for (const auto& c : cases) {
        Timer t;
        auto model = single_pair(diag_op({1.0}), c.lambda, rvec({1.0}));
        FockSpace space(1, 40);
        double e0 = lowest_eigenvalues(assemble_hamiltonian(space, model).mat, 1)(0);
        slowest = std::max(slowest, t.seconds());
        worst = std::max(worst, std::abs(e0 - c.expected));
    }
    line("04_single_mode_ground_energy", worst <= 1e-6 && slowest <= 1.0,
         "max dev " + format_double(worst) + ", slowest " + format_double(slowest) + " s");
}

void criterion5() {
    const int nmaxes[] = {8, 16, 24, 32};
    struct Case {
        PairModel model;
        const char* tag;
    };
    std::vector<Case> cases;
    cases.push_back({single_pair(diag_op({1.0}), 1.0, rvec({1.0})), "1-mode"});
    cases.push_back({single_pair(diag_op({1.0, 2.0}), 0.3, rvec({1.0, 1.0})), "2-mode"});

    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        auto diag = diagonalize(c.model);
        std::vector<double> devs;
        for (int nmax : nmaxes) {
            FockSpace space(static_cast<int>(c.model.T.dim()), nmax);
            devs.push_back(spectrum_compare(space, c.model, diag, 5).max_dev);
        }
        for (size_t i = 1; i < devs.size(); ++i)
            if (devs[i] > devs[i - 1] + 1e-12) ok = false;
        if (devs.back() > 1e-5) ok = false;
        if (!detail.empty()) detail += "; ";
        detail += std::string(c.tag) + " devs";
        for (double d : devs) detail += " " + format_double(d);
    }
    line("05_spectrum_convergence", ok, detail);
}

void criterion6() {
    Rng rng(42);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        int dim = rng.integer(1, 3);
        int nc = rng.integer(1, 3);
        auto model = testsupport::random_valid_model(rng, dim, nc);
        auto diag = diagonalize(model);
        auto pair = build_xy(diag.S, model.T, model.J);
        FockSpace space(dim, 8);
        auto c = commutator_check(space, model, diag, pair, model.couplings[0].g);
        worst = std::max({worst, c.res_annih, c.res_creat});
    }
    line("06_weak_commutators", worst <= 1e-9, "50 models at nmax 8, worst residual " + format_double(worst));
}

void criterion8(const std::string& configs) {
    const char* names[] = {"single_mode", "single_mode_attractive", "free_field",
                           "two_mode",    "oscillator",             "pauli_fierz",
                           "ti_fiber_ons"};
    long total_violations = 0;
    long total_samples = 0;
    double worst_identity = 0.0;
    for (const char* name : names) {
        auto loaded = load_model(configs + "/" + name + ".json");
        int modes = static_cast<int>(loaded.model.T.dim());
        int nmax = modes == 1 ? 12 : (modes == 2 ? 10 : 8);
        FockSpace space(modes, nmax);
        auto rep = inequality_suite(space, loaded.model, 1000, 42, 1e-10, 1e-9);
        total_violations += rep.total_violations;
        for (const auto& f : rep.families) {
            total_samples += f.checked;
            if (f.family == "field_square_cross_identity")
                worst_identity = std::max(worst_identity, f.worst_margin);
        }
    }
    line("08_inequality_samples", total_violations == 0 && worst_identity <= 1e-9,
         "7 models x 1000 draws (" + std::to_string(total_samples) + " checks), " +
             std::to_string(total_violations) + " violations, identity worst " +
             format_double(worst_identity));
}

void criterion9(const std::string& configs) {
    auto loaded = load_model(configs + "/oscillator.json");
    if (!loaded.oscillator) {
        line("09_oscillator_field_end_to_end", false, "bundled config is not an oscillator_field model");
        return;
    }
    const auto& p = *loaded.oscillator;
    auto diag = diagonalize(loaded.model);
    double total = diag.E + loaded.energy_offset;
    double block_dev = std::abs(total - 0.4659258262890682);

    FockSpace space(static_cast<int>(loaded.model.T.dim()), 16);
    double direct =
        lowest_eigenvalues(oscillator_field_oracle(space, p.omega, p.lambda, p.T, p.g).mat, 1)(0);
    Matrix trans = assemble_hamiltonian(space, loaded.model).mat;
    trans += loaded.energy_offset * Matrix::Identity(space.dim(), space.dim());
    double transformed = lowest_eigenvalues(trans, 1)(0);
    double oracle_dev = std::max(std::abs(direct - total), std::abs(transformed - total));

    line("09_oscillator_field_end_to_end", block_dev <= 1e-9 && oracle_dev <= 1e-5,
         "E_total " + format_double(total) + ", block formula dev " + format_double(block_dev) +
             ", oracle dev " + format_double(oracle_dev));
}

void criterion10() {
    Rng rng(42);
    int passed = 0;
    double min_eps = 1e300;
    for (int i = 0; i < 50; ++i) {
        int d = rng.integer(1, 3);
        int fdim = rng.integer(1, 4);
        std::vector<double> omegas;
        for (int j = 0; j < d; ++j) omegas.push_back(rng.uniform(0.3, 2.5));
        auto T = testsupport::random_real_spd(rng, fdim, 0.4, 2.5);
        std::vector<Vector> gs;
        for (int j = 0; j < d; ++j) gs.push_back(testsupport::random_real_vector(rng, fdim, 1.0));
        if (i % 2 == 1) // every other construction gets its couplings scaled up
            for (auto& g : gs) g *= 5.0;
        auto ext = pauli_fierz_dipole(omegas, T, gs);
        auto cond = validate_conditions(ext.model);
        if (cond.pass) ++passed;
        min_eps = std::min(min_eps, cond.epsilon);
    }
    line("10_pauli_fierz_conditions", passed == 50,
         std::to_string(passed) + "/50 pass (25 with couplings x5), min epsilon " +
             format_double(min_eps));
}

void criterion11() {
    struct Case {
        HermitianOperator T;
        std::vector<Vector> gs;
        std::vector<double> P;
    };
    std::vector<Case> cases;
    cases.push_back({diag_op({1.0}), {rvec({1.0})}, {1.0}});
    cases.push_back({diag_op({1.0, 2.0}),
                     {rvec({0.6, 0.0}), rvec({0.0, 0.8485281374238571})},
                     {0.3, -0.4}});

    double worst_ons = 0.0, worst_oracle = 0.0;
    bool have_ons = true;
    for (const auto& c : cases) {
        auto fr = ti_fiber(c.T, c.gs, c.P);
        if (!fr.E_P_ons) {
            have_ons = false;
            continue;
        }
        worst_ons = std::max(worst_ons, std::abs(fr.E_P - *fr.E_P_ons));
        FockSpace space(static_cast<int>(c.T.dim()), 16);
        auto h = fiber_hamiltonian(space, c.T, c.gs, c.P);
        worst_oracle = std::max(worst_oracle, std::abs(lowest_eigenvalues(h.mat, 1)(0) - fr.E_P));
    }

    double prev = -1.0;
    bool increasing = true;
    std::string ir_detail = "ir";
    for (double t : {1.0, 0.1, 0.01}) {
        auto fr = ti_fiber(diag_op({t, 1.0}), {rvec({1.0, 0.0})}, {1.0});
        if (fr.ir_diagnostic <= prev) increasing = false;
        prev = fr.ir_diagnostic;
        ir_detail += " " + format_double(fr.ir_diagnostic);
    }

    line("11_fiber_momentum",
         have_ons && worst_ons <= 1e-10 && worst_oracle <= 1e-5 && increasing,
         "ons gap " + format_double(worst_ons) + ", oracle dev " + format_double(worst_oracle) +
             ", " + ir_detail);
}

void criterion12() {
    auto free_model = PairModel::make(diag_op({1.0, 2.0}), {});
    auto diag = diagonalize(free_model);
    double s_dev = max_abs(diag.S.matrix() - free_model.T.matrix());
    auto pair = build_xy(diag.S, free_model.T, free_model.J);
    double y_norm = pair.hs_norm_Y;
    double e_abs = std::abs(diag.E);

    auto boundary = single_pair(diag_op({1.0}), -1.0, rvec({1.0}));
    auto cond = validate_conditions(boundary);

    line("12_degenerate_and_boundary",
         s_dev <= 1e-12 && y_norm <= 1e-12 && e_abs <= 1e-12 && !cond.pass &&
             std::abs(cond.epsilon) <= 1e-12,
         "free field |S-T| " + format_double(s_dev) + ", |E| " + format_double(e_abs) +
             ", ||Y|| " + format_double(y_norm) + ", boundary epsilon " +
             format_double(cond.epsilon) + " rejected");
}

} // namespace

int main(int argc, char** argv) {
    std::string configs = argc > 1 ? argv[1] : "configs";

    SuiteResult sr;
    bool suite_ok = false;
    try {
        sr = run_random_suite();
        suite_ok = true;
    } catch (const std::exception& e) {
        std::string why = std::string("exception: ") + e.what();
        line("01_symplectic_residuals", false, why);
        line("02_sandwich_bounds", false, why);
        line("03_energy_crosscheck", false, why);
    }
    if (suite_ok) {
        line("01_symplectic_residuals", sr.worst_sym <= 1e-9 && sr.elapsed <= 30.0,
             std::to_string(sr.count) + " models, worst residual/dim " +
                 format_double(sr.worst_sym) + ", " + format_double(sr.elapsed) + " s");
        line("02_sandwich_bounds", sr.min_margin >= -1e-9,
             "worst margin " + format_double(sr.min_margin));
        line("03_energy_crosscheck", sr.worst_energy <= 1e-9,
             "worst relative gap " + format_double(sr.worst_energy));
    }

    guarded("04_single_mode_ground_energy", criterion4);
    guarded("05_spectrum_convergence", criterion5);
    guarded("06_weak_commutators", criterion6);

    if (suite_ok)
        line("07_intertwining_factorization",
             sr.worst_inter <= 1e-9 && sr.worst_fact <= 1e-9 && sr.min_det >= 1e-8,
             "intertwining " + format_double(sr.worst_inter) + ", factorization " +
                 format_double(sr.worst_fact) + ", min |det(1+A)| " + format_double(sr.min_det));
    else
        line("07_intertwining_factorization", false, "random suite failed");

    guarded("08_inequality_samples", [&] { criterion8(configs); });
    guarded("09_oscillator_field_end_to_end", [&] { criterion9(configs); });
    guarded("10_pauli_fierz_conditions", criterion10);
    guarded("11_fiber_momentum", criterion11);
    guarded("12_degenerate_and_boundary", criterion12);

    return failures;
}
