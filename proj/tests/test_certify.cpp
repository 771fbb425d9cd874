#include <cmath>
#include <numbers>

#include <catch2/catch_amalgamated.hpp>

#include "starmod/certify.hpp"
#include "starmod/serialize.hpp"

#include "matchers.hpp"

using namespace starmod;

namespace {

ComplexMatrix unit_matrix(std::size_t n, std::size_t r, std::size_t c) {
    ComplexMatrix m = ComplexMatrix::zeros(n, n);
    m(r, c) = 1.0;
    return m;
}

// Opposite corner lines of M2, as algebras, modules, and their characters.
struct CornerPair {
    ComplexMatrix p1 = unit_matrix(2, 0, 0);
    ComplexMatrix p2 = unit_matrix(2, 1, 1);
    AlgebraPtr a1 = share(generated_subalgebra(2, {unit_matrix(2, 0, 0)}));
    AlgebraPtr a2 = share(generated_subalgebra(2, {unit_matrix(2, 1, 1)}));
    StateFunctional phi1 = make_state(a1, unit_matrix(2, 0, 0));
    StateFunctional phi2 = make_state(a2, unit_matrix(2, 1, 1));
    TernarySubspace e1 = ternary_closure(2, 2, {unit_matrix(2, 0, 0)});
    TernarySubspace e2 = ternary_closure(2, 2, {unit_matrix(2, 1, 1)});
};

// Rank-two projection path: pins e1, rotates the second support direction
// from e2 into e3 as t runs over [0, 1].
ComplexMatrix rotated_projection(double t) {
    const double c = std::cos(std::numbers::pi * t / 2.0);
    const double s = std::sin(std::numbers::pi * t / 2.0);
    ComplexMatrix p = ComplexMatrix::zeros(4, 4);
    p(0, 0) = 1.0;
    p(1, 1) = c * c;
    p(1, 2) = p(2, 1) = s * c;
    p(2, 2) = s * s;
    return p;
}

} // namespace

TEST_CASE("opposite corners admit no joint extension but do admit half scalars") {
    CornerPair cp;

    FeasibilityCertificate joint = cstar_extension_check(cp.phi1, cp.phi2);
    CHECK(joint.status == FeasStatus::Infeasible);
    CHECK(joint.exact_contradiction);
    CHECK(joint.method == "joint-extension");

    FeasibilityCertificate half = scalar_restriction_check(cp.phi1, cp.phi2, 0.5);
    REQUIRE(half.status == FeasStatus::Feasible);
    CHECK(half.method == "thm-2.2(4)");
    CHECK(distance_fro(half.witness, 0.5 * ComplexMatrix::identity(2)) < 1e-6);
    REQUIRE(half.scales.size() == 2);
    CHECK(std::abs(half.scales[0] - 0.5) < 1e-8);
    CHECK(std::abs(half.scales[1] - 0.5) < 1e-8);

    KernelMatchReport km = kernel_match_check(cp.phi1, cp.phi2, 0.5, {half});
    CHECK(km.all_matched);
}

TEST_CASE("joint extension exists when both sides are the same state") {
    AlgebraPtr d = share(generated_subalgebra(2, {unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)}));
    StateFunctional tracial = make_state(d, 0.5 * ComplexMatrix::identity(2));
    FeasibilityCertificate cert = cstar_extension_check(tracial, tracial);
    REQUIRE(cert.status == FeasStatus::Feasible);
    // Witness restricts to the tracial state on the diagonal.
    CHECK(std::abs(trace_pair(unit_matrix(2, 0, 0), cert.witness).real() - 0.5) < 1e-7);
    CHECK(std::abs(trace_pair(unit_matrix(2, 1, 1), cert.witness).real() - 0.5) < 1e-7);
}

TEST_CASE("scalar restriction rejects slopes outside the unit interval") {
    CornerPair cp;
    CHECK_THROWS_MATCHES(scalar_restriction_check(cp.phi1, cp.phi2, 0.0), Error,
                         ErrorKindIs(ErrorKind::BadProblem));
    CHECK_THROWS_MATCHES(scalar_restriction_check(cp.phi1, cp.phi2, 1.5), Error,
                         ErrorKindIs(ErrorKind::BadProblem));
    CHECK_THROWS_MATCHES(scalar_restriction_check(cp.phi1, cp.phi2, -0.25), Error,
                         ErrorKindIs(ErrorKind::BadProblem));
}

TEST_CASE("feasible scalar witnesses satisfy the four-link sandwich chain") {
    // For x in the module, with c the solved slope and phi the witness state:
    //   m phi_i(|x|) <= c phi_i(|x|) = phi(|x|) <= phi_i(|x|) <= phi_i(|x|^2)^(1/2).
    auto check_chain = [](const TernarySubspace& e, const StateFunctional& base,
                          const ComplexMatrix& witness, double c, double m,
                          std::uint64_t seed) {
        Rng rng(seed);
        for (int trial = 0; trial < 100; ++trial) {
            ComplexMatrix x(e.rows(), e.cols());
            for (std::size_t k = 0; k < e.dim(); ++k) x += rng.cnormal() * e.basis()[k];
            const ComplexMatrix gram = inner(x, x);
            const ComplexMatrix ax = psd_sqrt(gram);
            const double base_abs = base(ax).real();
            const double base_sq = base(gram).real();
            const double ambient_abs = trace_pair(witness, ax).real();

            CHECK(c * base_abs - m * base_abs >= -1e-8);
            CHECK(std::abs(ambient_abs - c * base_abs) <= 1e-8 * (1.0 + base_abs));
            CHECK(base_abs - ambient_abs >= -1e-8);
            CHECK(std::sqrt(std::max(0.0, base_sq)) - base_abs >= -1e-8);
        }
    };

    SECTION("corner pair at m = 1/2") {
        CornerPair cp;
        FeasibilityCertificate cert = scalar_restriction_check(cp.phi1, cp.phi2, 0.5);
        REQUIRE(cert.status == FeasStatus::Feasible);
        check_chain(cp.e1, cp.phi1, cert.witness, cert.scales[0], 0.5, 7);
        check_chain(cp.e2, cp.phi2, cert.witness, cert.scales[1], 0.5, 8);
    }

    SECTION("self-paired corner line settles at slope 5/8") {
        CornerPair cp;
        FeasibilityCertificate cert = scalar_restriction_check(cp.phi1, cp.phi1, 0.5);
        REQUIRE(cert.status == FeasStatus::Feasible);
        CHECK(distance_fro(cert.witness, ComplexMatrix::diag({0.625, 0.375})) < 1e-6);
        CHECK(std::abs(cert.scales[0] - 0.625) < 1e-7);
        CHECK(std::abs(cert.scales[1] - 0.625) < 1e-7);
        check_chain(cp.e1, cp.phi1, cert.witness, cert.scales[0], 0.5, 9);
    }
}

TEST_CASE("at slope one the scalar restriction matches the joint extension verdict") {
    AlgebraPtr d = share(generated_subalgebra(2, {unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)}));

    SECTION("both feasible: tracial state against itself") {
        StateFunctional tracial = make_state(d, 0.5 * ComplexMatrix::identity(2));
        FeasibilityCertificate ext = cstar_extension_check(tracial, tracial);
        FeasibilityCertificate scl = scalar_restriction_check(tracial, tracial, 1.0);
        CHECK(ext.status == FeasStatus::Feasible);
        CHECK(scl.status == ext.status);
    }

    SECTION("both infeasible: opposed characters of the diagonal") {
        StateFunctional chi1 = make_state(d, unit_matrix(2, 0, 0));
        StateFunctional chi2 = make_state(d, unit_matrix(2, 1, 1));
        FeasibilityCertificate ext = cstar_extension_check(chi1, chi2);
        FeasibilityCertificate scl = scalar_restriction_check(chi1, chi2, 1.0);
        CHECK(ext.status == FeasStatus::Infeasible);
        CHECK(scl.status == ext.status);
        CHECK(ext.exact_contradiction);
        CHECK(scl.exact_contradiction);
    }
}

TEST_CASE("certifier grants the corner pair a half-to-one window") {
    CornerPair cp;
    CertifyOptions opt;
    opt.probes = 25;
    IndependenceVerdict v = module_independence_certify(cp.e1, cp.e2, 0.5, 1.0, opt);

    CHECK(v.kind == VerdictKind::ModuleIndependent);
    CHECK(verdict_kind_name(v.kind) == std::string("module-independent"));
    CHECK(v.exact);
    CHECK(v.enumeration_exact);
    CHECK(v.method == "thm-2.2(4)");
    CHECK(std::abs(v.window_m - 0.5) < 1e-8);
    CHECK(v.window_M == 1.0);
    CHECK(v.state_pairs == 1);
    CHECK(v.screen_applicable); // empty intersection is vacuously ternary: screen passes
    CHECK(v.min_probe_slack >= -1e-7);
    REQUIRE(v.certificates.size() == 1);
    CHECK(v.certificates[0].status == FeasStatus::Feasible);
}

TEST_CASE("certifier rejects malformed windows and mismatched carriers") {
    CornerPair cp;
    CHECK_THROWS_MATCHES(module_independence_certify(cp.e1, cp.e2, 0.0, 1.0), Error,
                         ErrorKindIs(ErrorKind::BadProblem));
    CHECK_THROWS_MATCHES(module_independence_certify(cp.e1, cp.e2, 0.8, 0.5), Error,
                         ErrorKindIs(ErrorKind::BadProblem));
    ComplexMatrix rect(2, 3);
    rect(0, 0) = 1.0;
    TernarySubspace wide = ternary_closure(2, 3, {rect});
    CHECK_THROWS_MATCHES(module_independence_certify(cp.e1, wide, 0.5, 1.0), Error,
                         ErrorKindIs(ErrorKind::DomainMismatch));
}

TEST_CASE("diagonal self-module is screened out by its intersection inner span") {
    std::vector<ComplexMatrix> gens = {unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)};
    TernarySubspace d = ternary_closure(2, 2, gens);
    IndependenceVerdict v = module_independence_certify(d, d, 0.5, 1.0);

    CHECK(v.kind == VerdictKind::NotIndependent);
    CHECK(v.exact);
    CHECK(v.method == "prop-2.11");
    CHECK(v.screen_applicable);
    CHECK(v.screen.intersection_dim == 2);
    CHECK(v.screen.inner_dim == 2);
    CHECK_FALSE(v.screen.scalar());
    CHECK(v.state_pairs == 0); // short-circuited before any solve
}

TEST_CASE("weighted diagonal witness passes the sandwich probes") {
    const std::size_t n = 16;
    std::vector<ComplexMatrix> gens;
    for (std::size_t k = 0; k < n; ++k) gens.push_back(unit_matrix(n, k, k));
    TernarySubspace e = ternary_closure(n, n, gens);

    std::vector<double> g(n, 0.9);
    g[3] = 2.5;
    ComplexMatrix bump = ComplexMatrix::diag(g);
    bump *= cplx{1.0 / static_cast<double>(n), 0.0};

    StateFunctional tracial =
        make_state(e.inner_algebra_ptr(), (1.0 / static_cast<double>(n)) * ComplexMatrix::identity(n));

    WindowProbeReport r =
        window_probe(e, e, tracial, tracial, bump, 0.5, std::sqrt(1.15), 10, 11);
    CHECK(r.pass);
    CHECK(r.min_lower_slack >= -1e-10);
    CHECK(r.min_upper_slack >= -1e-10);
    CHECK(r.probes_checked > 2 * n);
    CHECK_FALSE(r.states_equal);
    CHECK(r.state_distance > 1e-3);
}

TEST_CASE("anchored route needs the anchor in both modules") {
    CornerPair cp;
    CHECK_THROWS_MATCHES(ffss_criterion(cp.e1, cp.e2, cp.p1, 8, 42), Error,
                         ErrorKindIs(ErrorKind::AnchorNotShared));
}

TEST_CASE("anchored route refutes a rotated projection pair and accepts the aligned one") {
    const ComplexMatrix id4 = ComplexMatrix::identity(4);
    TernarySubspace e0 = ternary_closure(4, 4, {id4, rotated_projection(0.0)});

    SECTION("half-rotated images violate norm multiplicativity") {
        TernarySubspace et = ternary_closure(4, 4, {id4, rotated_projection(0.5)});
        IndependenceVerdict v = ffss_criterion(e0, et, id4, 16, 42);
        CHECK(v.kind == VerdictKind::NotIndependent);
        CHECK(v.exact);
        CHECK(v.method == "cor-4.2");
        REQUIRE(v.norm_report.has_value());
        // sin(pi/4) is attained by a minimal-projection start; descent may
        // only improve on it.
        CHECK(v.norm_report->min_value <= std::sin(std::numbers::pi / 4.0) + 1e-9);
        CHECK(v.norm_report->min_value > 1e-3);
        // The reported pair is a concrete violation, re-checkable from scratch.
        const double a_norm = operator_norm(v.norm_report->witness_a);
        const double b_norm = operator_norm(v.norm_report->witness_b);
        const double ab = operator_norm(v.norm_report->witness_a * v.norm_report->witness_b);
        CHECK(std::abs(a_norm - 1.0) < 1e-8);
        CHECK(std::abs(b_norm - 1.0) < 1e-8);
        CHECK(std::abs(ab - v.norm_report->min_value) < 1e-8);
    }

    SECTION("fully rotated pair is simultaneously diagonal and multiplicative") {
        TernarySubspace e1 = ternary_closure(4, 4, {id4, rotated_projection(1.0)});
        IndependenceVerdict v = ffss_criterion(e0, e1, id4, 16, 42);
        CHECK(v.kind == VerdictKind::ModuleIndependent);
        CHECK(v.exact);
        CHECK(v.window_m == 1.0);
        CHECK(v.window_M == 1.0);
        REQUIRE(v.norm_report.has_value());
        CHECK(v.norm_report->method == "diagonal-supports");
        CHECK(v.norm_report->min_value == 1.0);
    }
}

TEST_CASE("annihilation probe separates full and corner algebras") {
    SECTION("full matrix algebra contains its unit, so nothing annihilates it") {
        StarSubalgebra full = generated_subalgebra(2, {unit_matrix(2, 0, 0), [] {
                                                       ComplexMatrix m(2, 2);
                                                       m(0, 1) = 1.0;
                                                       return m;
                                                   }()});
        REQUIRE(full.is_full());
        QepReport q = qep_check(full, 8, 42);
        CHECK(q.holds);
        CHECK(q.exact);
        CHECK(q.method == "contains-identity");
        CHECK(q.min_value == 1.0);
    }

    SECTION("corner line is annihilated by the opposite coordinate vector") {
        StarSubalgebra corner = generated_subalgebra(2, {unit_matrix(2, 0, 0)});
        QepReport q = qep_check(corner, 8, 42);
        CHECK_FALSE(q.holds);
        CHECK(q.exact);
        REQUIRE_FALSE(q.witness.empty());
        const cplx val = trace_pair(q.witness, unit_matrix(2, 0, 0) * q.witness);
        CHECK(std::abs(val) < 1e-10);
    }

    SECTION("relative check insists on a full ambient") {
        StarSubalgebra corner = generated_subalgebra(2, {unit_matrix(2, 0, 0)});
        StarSubalgebra diag = generated_subalgebra(2, {unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)});
        CHECK_THROWS_MATCHES(qep_check(corner, 8, 42, &diag), Error,
                             ErrorKindIs(ErrorKind::AmbientNotFull));
    }
}

TEST_CASE("zero-divisor probe finds the orthogonal corner pair") {
    CornerPair cp;
    SIndependenceReport r = s_independence_probe(*cp.a1, *cp.a2, 8, 42);
    CHECK(r.violation_found);
    CHECK(r.exact);
    CHECK(r.min_value < 1e-12);
    CHECK(operator_norm(r.witness_a * r.witness_b) < 1e-10);
}

TEST_CASE("one-state criterion accepts orthogonal rank-one modules") {
    TernarySubspace e1 = ternary_closure(4, 4, {unit_matrix(4, 0, 0)});
    TernarySubspace e2 = ternary_closure(4, 4, {unit_matrix(4, 1, 1)});
    SingleStateReport r = single_state_criterion(e1, e2, unit_matrix(4, 0, 0),
                                                 unit_matrix(4, 1, 1), 0.5, 1.0, 2, 42);
    CHECK(r.all_feasible);
    CHECK(r.joint.status == FeasStatus::Feasible);
    CHECK(r.refuting_entry == -1);

    // The joint witness must weight both anchor supports inside [m, M].
    const double w1 = trace_pair(unit_matrix(4, 0, 0), r.joint.witness).real();
    const double w2 = trace_pair(unit_matrix(4, 1, 1), r.joint.witness).real();
    CHECK(w1 >= 0.5 - 1e-6);
    CHECK(w2 >= 0.5 - 1e-6);
}

TEST_CASE("two-state criterion accepts orthogonal column modules") {
    ComplexMatrix col1(4, 1), col2(4, 1), col3(4, 1), col4(4, 1);
    col1(0, 0) = 1.0;
    col2(1, 0) = 1.0;
    col3(2, 0) = 1.0;
    col4(3, 0) = 1.0;
    TernarySubspace k = ternary_closure(4, 1, {col1, col2});
    TernarySubspace kperp = ternary_closure(4, 1, {col3, col4});

    TwoStateReport r = two_state_criterion(k, kperp, col1, col3, 1.0, 1.0, 3, 42);
    CHECK(r.satisfied);
    CHECK(r.search1.status == FeasStatus::Feasible);
    CHECK(r.search2.status == FeasStatus::Feasible);
    CHECK(r.combined.pass);
}

TEST_CASE("definiteness verifier demands a definite state and a closed chain") {
    TernarySubspace e = ternary_closure(2, 2, {unit_matrix(2, 0, 0)});
    ComplexMatrix xi(2, 1);
    xi(0, 0) = 1.0;
    AlgebraPtr ambient = share(generated_subalgebra(2, {unit_matrix(2, 0, 0), [] {
                                                        ComplexMatrix m(2, 2);
                                                        m(0, 1) = 1.0;
                                                        return m;
                                                    }()}));
    REQUIRE(ambient->is_full());

    SECTION("vector state on the support direction is definite and passes") {
        StateFunctional phi = vector_state(ambient, xi);
        DefiniteVerifyReport r = definite_criterion_verify(e, e, unit_matrix(2, 0, 0),
                                                           unit_matrix(2, 0, 0), unit_matrix(2, 0, 0),
                                                           unit_matrix(2, 0, 0), phi, 0.5, 1.0);
        CHECK(r.pass);
        CHECK(r.definite[0]);
        CHECK(r.definite[1]);
        CHECK(r.chain_holds);
        CHECK(std::abs(r.value1 - 1.0) < 1e-9);
        CHECK(std::abs(r.value12 - 1.0) < 1e-9);
        CHECK(std::abs(r.value2 - 1.0) < 1e-9);
    }

    SECTION("the tracial state is not definite at a rank-deficient diagonal element") {
        // Over the diagonal module with unit anchor, |x| = e00 has spectrum
        // {1, 0}; the trace mixes both eigenvalues, so phi(|x|^2) = 1/2 while
        // phi(|x|)^2 = 1/4.
        TernarySubspace ediag =
            ternary_closure(2, 2, {unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)});
        const ComplexMatrix id2 = ComplexMatrix::identity(2);
        StateFunctional tracial = make_state(ambient, 0.5 * id2);
        DefiniteVerifyReport r =
            definite_criterion_verify(ediag, ediag, id2, id2, unit_matrix(2, 0, 0),
                                      unit_matrix(2, 0, 0), tracial, 0.5, 1.0);
        CHECK_FALSE(r.pass);
        CHECK_FALSE(r.definite[0]);
        CHECK(std::abs(r.definiteness_gap[0] - 0.25) < 1e-9);
    }
}

TEST_CASE("verdicts serialize deterministically") {
    CornerPair cp;
    CertifyOptions opt;
    opt.probes = 10;
    const nlohmann::json a = to_json(module_independence_certify(cp.e1, cp.e2, 0.5, 1.0, opt));
    const nlohmann::json b = to_json(module_independence_certify(cp.e1, cp.e2, 0.5, 1.0, opt));
    CHECK(a.dump() == b.dump());
    CHECK(a["verdict"] == "module-independent");
}
