#include <catch2/catch_amalgamated.hpp>

#include "starmod/extreme_states.hpp"
#include "starmod/rng.hpp"
#include "starmod/state.hpp"

using namespace starmod;

namespace {

ComplexMatrix unit_mat(std::size_t n, std::size_t i, std::size_t j) {
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
}

AlgebraPtr diagonal_algebra(std::size_t n) {
    std::vector<ComplexMatrix> gens;
    for (std::size_t k = 0; k < n; ++k) gens.push_back(unit_mat(n, k, k));
    return share(generated_subalgebra(n, gens));
}

AlgebraPtr full_algebra(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return share(generated_subalgebra(n, {rng.hermitian(n), rng.hermitian(n)}));
}

} // namespace

TEST_CASE("make_state validates and optionally normalizes") {
    const AlgebraPtr m2 = full_algebra(2, 21);
    const StateFunctional tracial = make_state(m2, ComplexMatrix::identity(2) * cplx{0.5, 0.0});
    CHECK(std::abs(tracial.norm_value() - 1.0) < 1e-12);
    CHECK(std::abs(tracial.real_at(ComplexMatrix::identity(2)) - 1.0) < 1e-12);

    const StateFunctional scaled = make_state(m2, ComplexMatrix::identity(2), true);
    CHECK(distance_fro(scaled.witness(), tracial.witness()) < 1e-12);

    try {
        make_state(m2, ComplexMatrix::identity(2));
        FAIL("expected NotNormalized");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotNormalized);
    }
}

TEST_CASE("vector states evaluate as quadratic forms") {
    Rng rng(22);
    const AlgebraPtr m3 = full_algebra(3, 23);
    const ComplexMatrix xi = rng.unit_vector(3);
    const StateFunctional phi = vector_state(m3, xi);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = rng.gaussian(3, 3);
        const cplx expect = trace_pair(xi, a * xi);
        CHECK(std::abs(phi(a) - expect) < 1e-12);
    }
    CHECK(phi.min_gram_eigenvalue() > -1e-10);
}

TEST_CASE("states on a nonunital corner normalize against the corner unit") {
    const AlgebraPtr corner = share(generated_subalgebra(2, {unit_mat(2, 0, 0)}));
    const StateFunctional phi = make_state(corner, unit_mat(2, 0, 0));
    CHECK(std::abs(phi.norm_value() - 1.0) < 1e-12);
    CHECK(std::abs(phi.real_at(unit_mat(2, 0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("classical state inequalities hold on random draws") {
    Rng rng(24);
    const AlgebraPtr m3 = full_algebra(3, 25);
    const AlgebraPtr d4 = diagonal_algebra(4);
    for (int trial = 0; trial < 100; ++trial) {
        const bool diag = trial % 2 == 0;
        const AlgebraPtr& alg = diag ? d4 : m3;
        const std::size_t n = alg->ambient_dim();
        const StateFunctional phi = make_state(alg, rng.density(n), true);
        ComplexMatrix a = ComplexMatrix::zeros(n, n), b = ComplexMatrix::zeros(n, n);
        for (const auto& e : alg->basis()) {
            a += rng.cnormal() * e;
            b += rng.cnormal() * e;
        }
        const StateInequalityReport r = check_state_inequalities(phi, a, b);
        CHECK(r.min_slack() >= -1e-9 * std::max(1.0, a.frobenius_norm() * b.frobenius_norm()));
    }
}

TEST_CASE("characters are definite and multiplicative") {
    const AlgebraPtr d3 = diagonal_algebra(3);
    const ExtremeStateSet chars = extreme_states(d3, 8, 42);
    REQUIRE(chars.exact);
    Rng rng(26);
    for (const auto& phi : chars.states) {
        ComplexMatrix a = ComplexMatrix::zeros(3, 3), b = ComplexMatrix::zeros(3, 3);
        for (const auto& e : d3->basis()) {
            a += rng.cnormal() * e;
            b += rng.cnormal() * e;
        }
        CHECK(is_definite_at(phi, a));
        CHECK(std::abs(phi(a * b) - phi(a) * phi(b)) < 1e-10);
        const StateInequalityReport r = check_state_inequalities(phi, a, a);
        CHECK(std::abs(r.kadison) < 1e-9 * std::max(1.0, a.frobenius_norm()));
    }
}

TEST_CASE("mixed states are not definite at generic elements") {
    const AlgebraPtr d2 = diagonal_algebra(2);
    const StateFunctional mix = make_state(d2, ComplexMatrix::identity(2) * cplx{0.5, 0.0});
    const ComplexMatrix split = unit_mat(2, 0, 0) - unit_mat(2, 1, 1);
    CHECK_FALSE(is_definite_at(mix, split));
}

TEST_CASE("norming state attains the norm of a positive element") {
    Rng rng(27);
    const AlgebraPtr m3 = full_algebra(3, 28);
    const ComplexMatrix g = rng.gaussian(3, 3);
    const ComplexMatrix a = (g * g.adjoint()).hermitized();
    const StateFunctional phi = norming_state(m3, a);
    CHECK(std::abs(phi.real_at(a) - operator_norm(a)) < 1e-8);
}

TEST_CASE("norming state respects a proper corner unit") {
    const AlgebraPtr corner = share(generated_subalgebra(3, {unit_mat(3, 0, 0)}));
    const StateFunctional phi = norming_state(corner, unit_mat(3, 0, 0));
    CHECK(std::abs(phi.norm_value() - 1.0) < 1e-10);
    CHECK(std::abs(phi.real_at(unit_mat(3, 0, 0)) - 1.0) < 1e-10);
}

TEST_CASE("left kernel of a vector state on the full algebra") {
    const AlgebraPtr m2 = full_algebra(2, 29);
    ComplexMatrix e1(2, 1);
    e1(0, 0) = 1.0;
    const StateFunctional phi = vector_state(m2, e1);
    // {a : a e1 = 0} is the right column span, complex dimension 2.
    const MatrixSpan ker = left_kernel(phi);
    CHECK(ker.dim() == 2);
    for (const auto& k : ker.basis()) CHECK((k * e1).frobenius_norm() < 1e-8);
}
