#pragma once

#include <optional>
#include <vector>

#include "starmod/extreme_states.hpp"
#include "starmod/rng.hpp"
#include "starmod/star_algebra.hpp"

namespace starmod {

/// Outcome of minimizing ||a b|| over unit-norm a in A1, b in A2. When the
/// pair of algebras is simultaneously diagonalizable the minimum is evaluated
/// in closed form over minimal-projection supports (and is then 0 or 1);
/// otherwise a projected subgradient descent with seeded restarts produces an
/// upper bound and, when small enough, a concrete violating pair.
struct NormProductReport {
    double min_value = 1.0;
    bool exact = false;
    ComplexMatrix witness_a;
    ComplexMatrix witness_b;
    std::string method;
    std::size_t restarts_used = 0;
};

namespace detail {

/// One descent run for min ||ab||; alternates subgradient steps in a and b,
/// renormalizing in operator norm after each step.
inline double descend_norm_product(const MatrixSpan& s1, const MatrixSpan& s2, ComplexMatrix& a,
                                   ComplexMatrix& b, int steps) {
    auto renorm = [](ComplexMatrix& m) {
        const double nm = operator_norm(m);
        if (nm > 1e-14) m *= cplx{1.0 / nm, 0.0};
        return nm;
    };
    renorm(a);
    renorm(b);

    double best = operator_norm(a * b);
    double step = 0.3;
    for (int it = 0; it < steps; ++it) {
        const ComplexMatrix m = a * b;
        // Top singular triple via the Gram route.
        HermitianEig e = herm_eig((m.adjoint() * m).hermitized());
        const std::size_t n = e.values.size();
        const double sigma2 = std::max(0.0, e.values[n - 1]);
        const double sigma = std::sqrt(sigma2);
        if (sigma < 1e-14) return 0.0;
        ComplexMatrix v = e.vectors.column(n - 1);
        ComplexMatrix u = (1.0 / sigma) * (m * v);

        // d sigma = Re<u (b v)*, da> = Re<(a* u) v*, db>.
        const ComplexMatrix grad_a = s1.project(u * (b * v).adjoint());
        const ComplexMatrix grad_b = s2.project((a.adjoint() * u) * v.adjoint());

        ComplexMatrix a_try = a - cplx{step, 0.0} * grad_a;
        ComplexMatrix b_try = b - cplx{step, 0.0} * grad_b;
        renorm(a_try);
        renorm(b_try);
        const double val = operator_norm(a_try * b_try);
        if (val < best) {
            best = val;
            a = a_try;
            b = b_try;
            step *= 1.15;
        } else {
            step *= 0.5;
            if (step < 1e-10) break;
        }
    }
    return best;
}

inline std::vector<ComplexMatrix> start_candidates(const StarSubalgebra& alg, std::uint64_t seed) {
    std::vector<ComplexMatrix> out;
    if (pairwise_commuting(alg.basis())) {
        auto proj = minimal_projections(alg, seed);
        for (auto& p : proj) out.push_back(std::move(p));
    }
    for (const auto& b : alg.basis()) out.push_back(b);
    return out;
}

} // namespace detail

/// min ||ab|| over unit-norm pairs. See NormProductReport.
inline NormProductReport norm_product_minimize(const StarSubalgebra& a1, const StarSubalgebra& a2,
                                               std::size_t restarts, std::uint64_t seed) {
    if (a1.ambient_dim() != a2.ambient_dim())
        raise(ErrorKind::DomainMismatch, "norm product: ambient dimensions differ");
    NormProductReport rep;
    if (a1.dim() == 0 || a2.dim() == 0)
        raise(ErrorKind::BadProblem, "norm product: empty algebra");

    // Exact route: a simultaneously diagonalizable pair. Every element pair
    // attains ||ab|| on a common eigenbasis, and the minimum over unit norms
    // is 1 exactly when every minimal support of A1 meets every minimal
    // support of A2, else 0 with the disjoint projection pair as witness.
    std::vector<ComplexMatrix> all;
    for (const auto& b : a1.basis()) all.push_back(b);
    for (const auto& b : a2.basis()) all.push_back(b);
    if (detail::pairwise_commuting(all)) {
        const auto proj1 = detail::minimal_projections(a1, seed);
        const auto proj2 = detail::minimal_projections(a2, seed + 1);
        if (proj1.size() == a1.dim() && proj2.size() == a2.dim()) {
            rep.exact = true;
            rep.method = "diagonal-supports";
            rep.min_value = 1.0;
            for (const auto& p : proj1) {
                for (const auto& q : proj2) {
                    if (operator_norm(p * q) < 0.5) {
                        rep.min_value = 0.0;
                        rep.witness_a = p;
                        rep.witness_b = q;
                        return rep;
                    }
                }
            }
            rep.witness_a = proj1.front();
            rep.witness_b = proj2.front();
            return rep;
        }
    }

    // Heuristic route: seeded restarts of projected descent. Structured
    // starts (minimal projections, basis elements) are tried first.
    rep.method = "projected-descent";
    Rng rng(seed);
    const auto starts1 = detail::start_candidates(a1, seed + 2);
    const auto starts2 = detail::start_candidates(a2, seed + 3);

    auto consider = [&](ComplexMatrix a, ComplexMatrix b) {
        const double v = detail::descend_norm_product(a1.span(), a2.span(), a, b, 150);
        ++rep.restarts_used;
        if (v < rep.min_value || rep.witness_a.empty()) {
            rep.min_value = v;
            rep.witness_a = a;
            rep.witness_b = b;
        }
    };

    std::size_t budget = restarts;
    for (const auto& sa : starts1) {
        for (const auto& sb : starts2) {
            if (budget == 0) break;
            consider(sa, sb);
            --budget;
        }
        if (budget == 0) break;
    }
    auto random_element = [&](const StarSubalgebra& alg) {
        ComplexMatrix m = ComplexMatrix::zeros(alg.ambient_dim(), alg.ambient_dim());
        for (const auto& b : alg.basis()) m += rng.cnormal() * b;
        return m;
    };
    for (std::size_t k = 0; k < budget; ++k) consider(random_element(a1), random_element(a2));
    return rep;
}

/// Annihilation search: does some ambient vector state vanish on the whole
/// algebra? In finite dimensions this is governed by the algebra's unit: a
/// full-support unit leaves nothing to annihilate, a deficient one is
/// annihilated by any kernel vector. The search keeps the descent route for
/// independent confirmation and for spans without a resolved unit.
struct AnnihilationReport {
    bool annihilator_found = false;
    bool exact = false;
    double min_value = 0.0; // min over tried unit vectors of sum |<x, b_j x>|^2
    ComplexMatrix witness;  // annihilating unit vector, when found
    std::string method;
};

inline AnnihilationReport annihilation_search(const StarSubalgebra& alg, std::size_t restarts,
                                              std::uint64_t seed) {
    AnnihilationReport rep;
    const std::size_t n = alg.ambient_dim();
    if (alg.dim() == 0) raise(ErrorKind::BadProblem, "annihilation search: empty algebra");

    if (alg.contains_ambient_identity()) {
        rep.annihilator_found = false;
        rep.exact = true;
        rep.method = "contains-identity";
        rep.min_value = 1.0; // any state evaluates to 1 at the identity
        return rep;
    }

    auto objective = [&](const ComplexMatrix& x) {
        double s = 0.0;
        for (const auto& b : alg.basis()) s += std::norm(trace_pair(x, b * x));
        return s;
    };

    auto descend = [&](ComplexMatrix x) {
        double val = objective(x);
        double step = 0.5;
        for (int it = 0; it < 200 && val > 1e-24; ++it) {
            ComplexMatrix grad(n, 1);
            for (const auto& b : alg.basis()) {
                const cplx q = trace_pair(x, b * x);
                grad += std::conj(q) * (b * x) + q * (b.adjoint() * x);
            }
            ComplexMatrix x_try = x - cplx{step, 0.0} * grad;
            const double nx = x_try.frobenius_norm();
            if (nx < 1e-14) break;
            x_try *= cplx{1.0 / nx, 0.0};
            const double vt = objective(x_try);
            if (vt < val) {
                val = vt;
                x = x_try;
                step *= 1.2;
            } else {
                step *= 0.5;
                if (step < 1e-12) break;
            }
        }
        return std::make_pair(val, x);
    };

    rep.method = "projected-descent";
    rep.min_value = 1e300;

    // Structured starts: kernel directions of the support element sum b*b.
    ComplexMatrix t = ComplexMatrix::zeros(n, n);
    for (const auto& b : alg.basis()) t += b.adjoint() * b;
    HermitianEig e = herm_eig(t.hermitized());
    std::vector<ComplexMatrix> starts;
    for (std::size_t k = 0; k < n && starts.size() < 4; ++k) starts.push_back(e.vectors.column(k));
    Rng rng(seed);
    while (starts.size() < restarts + 4) starts.push_back(rng.unit_vector(n));

    for (const auto& s : starts) {
        auto [val, x] = descend(s);
        if (val < rep.min_value) {
            rep.min_value = val;
            rep.witness = x;
        }
        if (rep.min_value < 1e-24) break;
    }
    rep.annihilator_found = rep.min_value < 1e-16;
    // A found annihilator is self-certifying; its residuals are re-checkable.
    rep.exact = rep.annihilator_found;
    return rep;
}

} // namespace starmod
