#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "starmod/span.hpp"

namespace starmod {

/// Finite-dimensional *-closed, product-closed subspace of the n x n complex
/// matrices, with an orthonormal basis and (always, in exact arithmetic) a
/// multiplicative unit. The unit need not be the ambient identity.
class StarSubalgebra {
public:
    StarSubalgebra() = default;

    StarSubalgebra(std::size_t ambient_dim, MatrixSpan span, std::optional<ComplexMatrix> unit)
        : n_(ambient_dim), span_(std::move(span)), unit_(std::move(unit)) {}

    std::size_t ambient_dim() const noexcept { return n_; }
    std::size_t dim() const noexcept { return span_.dim(); }
    const MatrixSpan& span() const noexcept { return span_; }
    const std::vector<ComplexMatrix>& basis() const noexcept { return span_.basis(); }

    bool has_unit() const noexcept { return unit_.has_value(); }
    const ComplexMatrix& unit() const {
        if (!unit_) raise(ErrorKind::BadProblem, "algebra has no resolved unit");
        return *unit_;
    }

    bool contains(const ComplexMatrix& m, double tol = defaults::span_tol) const {
        return span_.contains(m, tol);
    }

    bool contains_ambient_identity(double tol = defaults::span_tol) const {
        return span_.contains(ComplexMatrix::identity(n_), tol);
    }

    bool is_full(double tol = defaults::span_tol) const {
        (void)tol;
        return dim() == n_ * n_;
    }

    /// Worst-case defects of the algebra axioms over the basis; used by
    /// validation and tests rather than hot paths.
    double product_closure_defect() const {
        double worst = 0.0;
        for (const auto& a : span_.basis())
            for (const auto& b : span_.basis())
                worst = std::max(worst, span_.residual(a * b));
        return worst;
    }

    double adjoint_closure_defect() const {
        double worst = 0.0;
        for (const auto& a : span_.basis()) worst = std::max(worst, span_.residual(a.adjoint()));
        return worst;
    }

    double unit_defect() const {
        if (!unit_) return 0.0;
        double worst = 0.0;
        for (const auto& b : span_.basis()) {
            worst = std::max(worst, (*unit_ * b - b).frobenius_norm());
            worst = std::max(worst, (b * *unit_ - b).frobenius_norm());
        }
        return worst;
    }

private:
    std::size_t n_ = 0;
    MatrixSpan span_;
    std::optional<ComplexMatrix> unit_;
};

namespace detail {

/// Unit of a *-closed, product-closed matrix span: the support projection of
/// T = sum_k b_k* b_k. T and the algebra share a kernel, so the spectral
/// projection of T onto its positive part acts as the identity on the span.
inline std::optional<ComplexMatrix> resolve_unit(const MatrixSpan& span, double tol) {
    if (span.dim() == 0) return std::nullopt;
    const std::size_t n = span.rows();
    ComplexMatrix t = ComplexMatrix::zeros(n, n);
    for (const auto& b : span.basis()) t += b.adjoint() * b;
    t = t.hermitized();

    HermitianEig e = herm_eig(t);
    const double top = e.values.empty() ? 0.0 : std::max(1.0, e.values.back());
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        if (e.values[i] > defaults::kernel_cutoff * top) d(i, i) = 1.0;
    ComplexMatrix unit = (e.vectors * d * e.vectors.adjoint()).hermitized();

    if (!span.contains(unit, 10.0 * tol)) return std::nullopt;
    for (const auto& b : span.basis()) {
        if ((unit * b - b).frobenius_norm() > 1e-8 * (1.0 + b.frobenius_norm())) return std::nullopt;
        if ((b * unit - b).frobenius_norm() > 1e-8 * (1.0 + b.frobenius_norm())) return std::nullopt;
    }
    return unit;
}

} // namespace detail

/// Smallest *-closed, product-closed span containing the generators
/// (optionally together with the ambient identity). Iterates products into
/// the span until the dimension stabilizes; the dimension bound n^2
/// guarantees termination.
inline StarSubalgebra generated_subalgebra(std::size_t ambient_dim,
                                           const std::vector<ComplexMatrix>& generators,
                                           bool adjoin_ambient_unit = false,
                                           double tol = defaults::span_tol) {
    const std::size_t n = ambient_dim;
    for (const auto& g : generators)
        if (g.rows() != n || g.cols() != n)
            raise(ErrorKind::ShapeMismatch, "generator has wrong ambient shape");

    MatrixSpan span(n, n);
    if (adjoin_ambient_unit) span.try_add(ComplexMatrix::identity(n), tol);
    for (const auto& g : generators) {
        span.try_add(g, tol);
        span.try_add(g.adjoint(), tol);
    }

    bool grew = true;
    while (grew && span.dim() < n * n) {
        grew = false;
        const std::vector<ComplexMatrix> snapshot = span.basis();
        for (const auto& a : snapshot) {
            for (const auto& b : snapshot) {
                const ComplexMatrix ab = a * b;
                if (span.try_add(ab, tol)) grew = true;
                if (span.try_add(ab.adjoint(), tol)) grew = true;
            }
        }
    }

    return {n, span, detail::resolve_unit(span, tol)};
}

/// Wraps an existing orthonormal span as an algebra after validating the
/// axioms numerically.
inline StarSubalgebra algebra_from_span(std::size_t ambient_dim, const MatrixSpan& span,
                                        double tol = defaults::span_tol) {
    StarSubalgebra probe(ambient_dim, span, std::nullopt);
    if (probe.adjoint_closure_defect() > 1e-8)
        raise(ErrorKind::ValidationError, "span is not closed under adjoints");
    if (probe.product_closure_defect() > 1e-8)
        raise(ErrorKind::ValidationError, "span is not closed under products");
    return {ambient_dim, span, detail::resolve_unit(span, tol)};
}

using AlgebraPtr = std::shared_ptr<const StarSubalgebra>;

inline AlgebraPtr share(StarSubalgebra a) {
    return std::make_shared<const StarSubalgebra>(std::move(a));
}

} // namespace starmod
