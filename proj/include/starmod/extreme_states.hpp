#pragma once

#include <string>
#include <vector>

#include "starmod/rng.hpp"
#include "starmod/state.hpp"

namespace starmod {

/// Result of extreme-state enumeration. `exact` is true only when the list
/// is provably the complete set of extreme points of the state space
/// (characters of a commutative algebra, or vector states of a full matrix
/// algebra); otherwise the list is a seeded heuristic sample.
struct ExtremeStateSet {
    std::vector<StateFunctional> states;
    bool exact = false;
    std::string method;
};

namespace detail {

inline bool pairwise_commuting(const std::vector<ComplexMatrix>& basis, double tol = 1e-9) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            if (commutator(basis[i], basis[j]).frobenius_norm() > tol) return false;
    return true;
}

/// Minimal projections of a commutative algebra: spectral projections of a
/// generic Hermitian element. Distinct minimal blocks receive distinct
/// generic eigenvalues almost surely; a failed draw is retried reseeded.
inline std::vector<ComplexMatrix> minimal_projections(const StarSubalgebra& alg,
                                                      std::uint64_t seed) {
    const std::size_t n = alg.ambient_dim();
    const std::size_t d = alg.dim();
    for (int attempt = 0; attempt < 8; ++attempt) {
        Rng rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(attempt + 1));
        ComplexMatrix h = ComplexMatrix::zeros(n, n);
        for (const auto& b : alg.basis()) {
            const cplx c = rng.cnormal();
            h += c * b + std::conj(c) * b.adjoint();
        }
        h = h.hermitized();

        HermitianEig e = herm_eig(h);
        const double scale = std::max(1.0, std::abs(e.values.front()) + std::abs(e.values.back()));
        std::vector<ComplexMatrix> projections;
        std::size_t lo = 0;
        while (lo < n) {
            std::size_t hi = lo + 1;
            while (hi < n && e.values[hi] - e.values[hi - 1] <= 1e-7 * scale) ++hi;
            ComplexMatrix p = ComplexMatrix::zeros(n, n);
            for (std::size_t k = lo; k < hi; ++k) {
                const ComplexMatrix v = e.vectors.column(k);
                p += v * v.adjoint();
            }
            p = p.hermitized();
            // The zero-eigenvalue block is the complement of the algebra's
            // carrier and does not belong to the span; membership filters it.
            if (alg.contains(p, 1e-7)) projections.push_back(p);
            lo = hi;
        }
        if (projections.size() == d) return projections;
    }
    return {};
}

} // namespace detail

/// Extreme points of the state space.
///   - Commutative algebra: the characters, one per minimal projection
///     (evaluation against the normalized block trace). Exact.
///   - Full matrix algebra: standard-basis vector states plus `budget`
///     seeded random vector states. Exact as a description (all extreme
///     states are vector states), sampled as a list.
///   - Anything else: `budget` heuristic extreme-point candidates, each
///     maximizing a random Hermitian functional over the state space.
inline ExtremeStateSet extreme_states(const AlgebraPtr& algebra, std::size_t budget,
                                      std::uint64_t seed) {
    ExtremeStateSet out;
    const StarSubalgebra& alg = *algebra;
    const std::size_t n = alg.ambient_dim();

    if (alg.dim() == 0) {
        out.exact = true;
        out.method = "empty";
        return out;
    }

    if (detail::pairwise_commuting(alg.basis())) {
        const auto projections = detail::minimal_projections(alg, seed);
        if (projections.size() == alg.dim()) {
            for (const auto& p : projections) {
                const double r = p.trace().real();
                out.states.push_back(make_state(algebra, (1.0 / r) * p));
            }
            out.exact = true;
            out.method = "characters";
            return out;
        }
        // Fall through to the heuristic if the generic-element draw failed.
    }

    Rng rng(seed);
    if (alg.is_full()) {
        for (std::size_t i = 0; i < n; ++i) {
            ComplexMatrix e(n, 1);
            e(i, 0) = 1.0;
            out.states.push_back(vector_state(algebra, e));
        }
        for (std::size_t k = 0; k < budget; ++k)
            out.states.push_back(vector_state(algebra, rng.unit_vector(n)));
        out.exact = true;
        out.method = "vector-states";
        return out;
    }

    // Heuristic: maximize tr(rho G) for random Hermitian G in the algebra.
    // The maximizer over states supported on the algebra's carrier is the
    // top-eigenvector state of G within that carrier.
    const ComplexMatrix carrier =
        alg.has_unit() ? alg.unit() : ComplexMatrix::identity(n);
    for (std::size_t k = 0; k < budget; ++k) {
        ComplexMatrix g = ComplexMatrix::zeros(n, n);
        for (const auto& b : alg.basis()) {
            const cplx c = rng.cnormal();
            g += c * b + std::conj(c) * b.adjoint();
        }
        // Push the carrier complement far below the working spectrum.
        g = (g.hermitized() +
             (-1e6) * (ComplexMatrix::identity(n) - carrier))
                .hermitized();
        HermitianEig e = herm_eig(g);
        ComplexMatrix v = e.vectors.column(n - 1);
        const ComplexMatrix w = carrier * v;
        const double nw = w.frobenius_norm();
        if (nw < 1e-9) continue;
        out.states.push_back(vector_state(algebra, (1.0 / nw) * w));
    }
    out.exact = false;
    out.method = "heuristic-support-maximizers";
    return out;
}

} // namespace starmod
