#include <catch2/catch_amalgamated.hpp>

#include "bogodiag/fock.hpp"
#include "support/test_helpers.hpp"

using namespace bogodiag;
using Catch::Matchers::WithinAbs;

namespace {

PairModel scalar_model(double t, double lambda, double g) {
    RealVector d(1);
    d << t;
    Vector v(1);
    v << Complex(g, 0.0);
    return PairModel::make(HermitianOperator::diagonal(d), {{lambda, v}});
}

PairModel two_mode_model() {
    RealVector d(2);
    d << 1.0, 2.0;
    Vector g(2);
    g << 1.0, 1.0;
    return PairModel::make(HermitianOperator::diagonal(d), {{0.3, g}});
}

} // namespace

TEST_CASE("basis is graded with leading modes filled first", "[fock]") {
    FockSpace space(2, 2);
    REQUIRE(space.dim() == 6);

    std::vector<std::vector<int>> expected = {
        {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    for (long i = 0; i < 6; ++i) {
        CHECK(space.occupation(i) == expected[i]);
        CHECK(space.index_of(expected[i]) == i);
    }
    CHECK(space.total_quanta(0) == 0);
    CHECK(space.total_quanta(2) == 1);
    CHECK(space.total_quanta(5) == 2);

    CHECK(space.sector_dim(0) == 1);
    CHECK(space.sector_dim(1) == 3);
    CHECK(space.sector_dim(2) == 6);
    CHECK(space.sector_dim(7) == 6); // clamps at nmax
    CHECK(space.index_of({3, 0}) == -1);

    FockSpace three(3, 1);
    REQUIRE(three.dim() == 4);
    CHECK(three.occupation(1) == std::vector<int>({1, 0, 0}));
    CHECK(three.occupation(3) == std::vector<int>({0, 0, 1}));
}

TEST_CASE("capacity guard rejects oversized spaces", "[fock]") {
    try {
        FockSpace space(8, 10); // C(18,8) = 43758
        FAIL("expected CapacityExceeded");
    } catch (const CapacityExceeded& e) {
        CHECK(e.cap == 20000);
        CHECK(e.requested > e.cap);
    }
    CHECK(basis_count(10, 8, 50000) == 43758);
    CHECK(basis_count(2, 2, 100) == 6);
}

TEST_CASE("ladder operators have the right amplitudes and commutators", "[fock]") {
    FockSpace space(2, 6);
    auto a0 = annihilation_op(space, 0);
    auto c0 = creation_op(space, 0);
    auto a1 = annihilation_op(space, 1);
    auto c1 = creation_op(space, 1);

    CHECK(c0.mat == a0.mat.adjoint());
    CHECK(std::abs(c0.mat(space.index_of({1, 0}), 0) - 1.0) < 1e-15);
    CHECK(std::abs(c0.mat(space.index_of({2, 0}), space.index_of({1, 0})) -
                   std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(c1.mat(space.index_of({1, 2}), space.index_of({1, 1})) -
                   std::sqrt(2.0)) < 1e-15);

    // the raise-then-lower products only see the truncation above quanta
    // nmax - 1, so the canonical commutators are exact on that prefix
    long safe = space.sector_dim(space.nmax() - 1);
    Matrix id = Matrix::Identity(safe, safe);
    CHECK(max_abs((a0.mat * c0.mat - c0.mat * a0.mat).topLeftCorner(safe, safe) - id) < 1e-14);
    CHECK(max_abs((a1.mat * c1.mat - c1.mat * a1.mat).topLeftCorner(safe, safe) - id) < 1e-14);
    CHECK(max_abs((a0.mat * c1.mat - c1.mat * a0.mat).topLeftCorner(safe, safe)) < 1e-14);
    CHECK(max_abs(a0.mat * a1.mat - a1.mat * a0.mat) < 1e-14);

    CHECK_THROWS_AS(creation_op(space, 2), ModeOutOfRange);
    CHECK_THROWS_AS(annihilation_op(space, -1), ModeOutOfRange);
}

TEST_CASE("second quantization of a diagonal operator counts quanta", "[fock]") {
    FockSpace space(2, 2);
    RealVector d(2);
    d << 1.0, 2.0;
    auto n_op = second_quantize(space, HermitianOperator::diagonal(d));

    RealVector expected(6);
    expected << 0, 1, 2, 2, 3, 4; // basis order (0,0),(1,0),(0,1),(2,0),(1,1),(0,2)
    for (long i = 0; i < 6; ++i)
        CHECK_THAT(n_op.mat(i, i).real(), WithinAbs(expected(i), 1e-14));
    CHECK(max_abs(n_op.mat - Matrix(n_op.mat.diagonal().asDiagonal())) < 1e-15);

    Matrix t(2, 2);
    t << 1.0, 0.5, 0.5, 1.0;
    auto hop = second_quantize(space, HermitianOperator::validated(t));
    CHECK_THAT(hop.mat(space.index_of({0, 1}), space.index_of({1, 0})).real(),
               WithinAbs(0.5, 1e-14));
    CHECK_THAT(hop.mat(space.index_of({1, 1}), space.index_of({2, 0})).real(),
               WithinAbs(0.5 * std::sqrt(2.0), 1e-14));
    CHECK(max_abs(hop.mat - hop.mat.adjoint()) < 1e-14);
}

TEST_CASE("field operator vacuum moments", "[fock]") {
    FockSpace space(2, 4);
    Vector f(2);
    f << Complex(0.6, 0.0), Complex(0.0, 0.8); // unit norm
    Matrix phi = segal_field(space, f).mat;
    CHECK(max_abs(phi - phi.adjoint()) < 1e-14);

    Vector vac = Vector::Zero(space.dim());
    vac(0) = 1.0;
    Vector phi2 = phi * (phi * vac);
    CHECK_THAT((vac.dot(phi2)).real(), WithinAbs(0.5, 1e-14));
    CHECK_THAT(phi2.norm(), WithinAbs(0.8660254037844386, 1e-14));

    // annihilation part is antilinear in f
    Complex c(0.7, -0.4);
    Matrix lhs = annihilator(space, c * f).mat;
    Matrix rhs = std::conj(c) * annihilator(space, f).mat;
    CHECK(max_abs(lhs - rhs) < 1e-14);
}

TEST_CASE("exponentiated fields satisfy the Weyl relation", "[fock]") {
    FockSpace space(1, 20);
    Vector f(1), h(1);
    f << Complex(0.3, 0.0);
    h << Complex(0.0, 0.4);

    auto wf = unitary_exp(HermitianOperator::trusted(segal_field(space, f).mat), 1.0);
    auto wh = unitary_exp(HermitianOperator::trusted(segal_field(space, h).mat), 1.0);
    auto wfh = unitary_exp(HermitianOperator::trusted(segal_field(space, Vector(f + h)).mat), 1.0);

    // W(f) W(h) = exp(-i Im<f,h> / 2) W(f+h); Im<f,h> = 0.12. Exact only far
    // from the cutoff, so compare on the quanta <= 8 prefix.
    Complex phase = std::exp(Complex(0.0, -0.06));
    long safe = space.sector_dim(8);
    Matrix dev = (wf * wh - phase * wfh).topLeftCorner(safe, safe);
    CHECK(max_abs(dev) < 1e-12);
}

TEST_CASE("assembled Hamiltonian reproduces the predicted ground energy", "[fock]") {
    FockSpace space(1, 40);

    auto repulsive = scalar_model(1.0, 1.0, 1.0);
    auto h1 = assemble_hamiltonian(space, repulsive);
    CHECK_THAT(lowest_eigenvalues(h1.mat, 1)(0), WithinAbs(0.2071067811865476, 1e-9));

    auto attractive = scalar_model(1.0, -0.5, 1.0);
    auto h2 = assemble_hamiltonian(space, attractive);
    CHECK_THAT(lowest_eigenvalues(h2.mat, 1)(0), WithinAbs(-0.1464466094067262, 1e-9));
}

TEST_CASE("low spectrum matches the diagonalized form", "[fock]") {
    auto single = scalar_model(1.0, 1.0, 1.0);
    auto cmp1 = spectrum_compare(FockSpace(1, 24), single, 5);
    CHECK(cmp1.max_dev < 1e-9);
    CHECK(cmp1.eigs_H.size() == 5);
    // lowest excitation sits at E + sqrt(2)
    CHECK_THAT(cmp1.eigs_pred(1) - cmp1.eigs_pred(0), WithinAbs(1.4142135623730951, 1e-12));

    auto cmp2 = spectrum_compare(FockSpace(2, 16), two_mode_model(), 5);
    CHECK(cmp2.max_dev < 1e-9);
}

TEST_CASE("transformed ladder operators shift by the diagonal form", "[fock]") {
    auto model = scalar_model(1.0, 1.0, 1.0);
    auto diag = diagonalize(model);
    auto pair = build_xy(diag.S, model.T, model.J);

    FockSpace space(1, 16);
    Vector f(1);
    f << 1.0;
    auto c = commutator_check(space, model, diag, pair, f);
    CHECK(c.res_annih < 1e-12);
    CHECK(c.res_creat < 1e-12);

    auto model2 = two_mode_model();
    auto diag2 = diagonalize(model2);
    auto pair2 = build_xy(diag2.S, model2.T, model2.J);
    FockSpace space2(2, 10);
    Vector f2(2);
    f2 << Complex(0.5, 0.3), Complex(-0.2, 0.9);
    auto c2 = commutator_check(space2, model2, diag2, pair2, f2);
    CHECK(c2.res_annih < 1e-12);
    CHECK(c2.res_creat < 1e-12);

    CHECK_THROWS_AS(commutator_check(FockSpace(1, 2), model, diag, pair, f), SectorTooSmall);
}

TEST_CASE("transformed annihilator kills the interacting ground state", "[fock]") {
    auto model = scalar_model(1.0, 1.0, 1.0);
    auto diag = diagonalize(model);
    auto pair = build_xy(diag.S, model.T, model.J);

    FockSpace space(1, 24);
    auto h = assemble_hamiltonian(space, model);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat);
    REQUIRE(solver.info() == Eigen::Success);
    Vector ground = solver.eigenvectors().col(0);

    Vector f(1);
    f << 1.0;
    auto b = b_operator(space, f, pair, model.J);
    CHECK(Vector(b.mat * ground).norm() < 1e-8);
}

TEST_CASE("interaction bounds hold on random states", "[fock]") {
    auto report = inequality_suite(FockSpace(2, 8), two_mode_model(), 50, 7);
    CHECK(report.total_violations == 0);
    REQUIRE(report.families.size() == 4);
    for (const auto& fam : report.families) {
        CHECK(fam.checked > 0);
        CHECK(fam.violations == 0);
    }
    // the last family is an exact identity, not just a bound
    CHECK(report.families.back().worst_margin < 1e-12);

    // without couplings the suite falls back to unit-vector test functions
    RealVector d(2);
    d << 1.0, 2.0;
    auto free = PairModel::make(HermitianOperator::diagonal(d), {});
    auto free_report = inequality_suite(FockSpace(2, 6), free, 20, 3);
    CHECK(free_report.total_violations == 0);

    CHECK_THROWS_AS(inequality_suite(FockSpace(2, 1), two_mode_model(), 5, 1), SectorTooSmall);
}

TEST_CASE("field square cross term identity at the vacuum", "[fock]") {
    // -2 Re<dG(R) psi, Phi(f)^2 psi> + 2 ||dG(R)^{1/2} Phi(f) psi||^2
    //   = ||R^{1/2} f||^2 ||psi||^2 exactly; at the vacuum both halves of the
    // left side vanish against each other term by term.
    FockSpace space(2, 4);
    RealVector r(2);
    r << 0.5, 1.5;
    auto R = HermitianOperator::diagonal(r);
    Vector f(2);
    f << Complex(0.6, 0.0), Complex(0.0, 0.8);

    Matrix dg = second_quantize(space, R).mat;
    Matrix phi = segal_field(space, f).mat;
    Vector vac = Vector::Zero(space.dim());
    vac(0) = 1.0;

    double lhs = -2.0 * (Vector(dg * vac).dot(Vector(phi * (phi * vac)))).real();
    Vector phiv = phi * vac;
    double quad = (phiv.dot(Vector(dg * phiv))).real(); // ||dG(R)^{1/2} Phi(f) vac||^2
    double fr = (f.dot(Vector(R.matrix() * f))).real();
    CHECK_THAT(lhs + 2.0 * quad, WithinAbs(fr, 1e-13));
    CHECK_THAT(lhs, WithinAbs(0.0, 1e-13));
}
