#pragma once

#include <optional>

#include "starmod/star_algebra.hpp"

namespace starmod {

/// Matrix-valued inner product <x, y> = x* y, conjugate-linear in the first
/// argument. Both arguments must be k x n with matching shapes.
inline ComplexMatrix inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (!x.same_shape(y)) raise(ErrorKind::ShapeMismatch, "inner: shapes differ");
    return x.adjoint() * y;
}

/// |x| = (<x, x>)^{1/2}, an n x n PSD matrix.
inline ComplexMatrix abs_of(const ComplexMatrix& x) { return psd_sqrt(inner(x, x).hermitized()); }

/// Module norm ||x|| = ||<x, x>||^{1/2}, i.e. the largest singular value of x.
inline double module_norm(const ComplexMatrix& x) {
    return std::sqrt(std::max(0.0, operator_norm(inner(x, x).hermitized())));
}

/// Subspace F of k x n matrices closed under the ternary product
/// x <y, z> (equivalently F F* F subset F), together with the C*-algebra
/// generated by its inner products. Right multiplication by that algebra
/// stays inside F.
class TernarySubspace {
public:
    TernarySubspace() = default;

    TernarySubspace(MatrixSpan span, StarSubalgebra inner_algebra)
        : span_(std::move(span)), inner_algebra_(share(std::move(inner_algebra))) {}

    std::size_t rows() const noexcept { return span_.rows(); }
    std::size_t cols() const noexcept { return span_.cols(); }
    std::size_t dim() const noexcept { return span_.dim(); }
    const MatrixSpan& span() const noexcept { return span_; }
    const std::vector<ComplexMatrix>& basis() const noexcept { return span_.basis(); }
    const AlgebraPtr& inner_algebra_ptr() const noexcept { return inner_algebra_; }
    const StarSubalgebra& inner_algebra() const { return *inner_algebra_; }

    bool contains(const ComplexMatrix& x, double tol = defaults::span_tol) const {
        return span_.contains(x, tol);
    }

    /// Worst ternary-closure residual over basis triples.
    double ternary_defect() const {
        double worst = 0.0;
        for (const auto& x : span_.basis())
            for (const auto& y : span_.basis())
                for (const auto& z : span_.basis())
                    worst = std::max(worst, span_.residual(x * inner(y, z)));
        return worst;
    }

private:
    MatrixSpan span_;
    AlgebraPtr inner_algebra_;
};

/// Smallest ternary subspace containing the generators: alternately adjoins
/// right products with current inner products until the dimension
/// stabilizes, then builds the inner algebra from the final span.
inline TernarySubspace ternary_closure(std::size_t rows, std::size_t cols,
                                       const std::vector<ComplexMatrix>& generators,
                                       double tol = defaults::span_tol) {
    for (const auto& g : generators)
        if (g.rows() != rows || g.cols() != cols)
            raise(ErrorKind::ShapeMismatch, "module generator has wrong carrier shape");

    MatrixSpan span = MatrixSpan::of(rows, cols, generators, tol);
    bool grew = true;
    while (grew && span.dim() < rows * cols) {
        grew = false;
        const std::vector<ComplexMatrix> snapshot = span.basis();
        for (const auto& x : snapshot)
            for (const auto& y : snapshot)
                for (const auto& z : snapshot)
                    if (span.try_add(x * inner(y, z), tol)) grew = true;
    }

    std::vector<ComplexMatrix> products;
    products.reserve(span.dim() * span.dim());
    for (const auto& x : span.basis())
        for (const auto& y : span.basis()) products.push_back(inner(x, y));
    StarSubalgebra inner_alg = generated_subalgebra(cols, products, false, tol);

    TernarySubspace f(span, std::move(inner_alg));
    if (f.ternary_defect() > 1e-8)
        raise(ErrorKind::NotTernary, "closure failed to stabilize ternarily");
    return f;
}

/// Intersection of two ternary subspaces. The intersection of ternary spaces
/// is again ternary in exact arithmetic; `ternary` records the numerical
/// verdict, and `module` is populated only when it holds.
struct ModuleIntersection {
    MatrixSpan space;
    bool ternary = false;
    std::optional<TernarySubspace> module;
};

inline ModuleIntersection intersect(const TernarySubspace& f1, const TernarySubspace& f2,
                                    double tol = defaults::span_tol) {
    if (f1.rows() != f2.rows() || f1.cols() != f2.cols())
        raise(ErrorKind::ShapeMismatch, "module intersection: carrier shapes differ");
    ModuleIntersection out;
    out.space = MatrixSpan::intersection(f1.span(), f2.span(), tol);
    if (out.space.dim() == 0) {
        out.ternary = true;
        return out;
    }
    TernarySubspace closure = ternary_closure(f1.rows(), f1.cols(), out.space.basis(), tol);
    out.ternary = closure.dim() == out.space.dim();
    if (out.ternary) out.module = std::move(closure);
    return out;
}

/// Screen on the inner-product span of an intersection: when the span of
/// <z, w> over the intersection is one-dimensional it is spanned by |z| for
/// any norm-one z, and that z is reported.
struct IntersectionScalarReport {
    std::size_t intersection_dim = 0;
    bool intersection_ternary = false;
    std::size_t inner_dim = 0;
    std::optional<ComplexMatrix> z;
    bool scalar() const { return intersection_ternary && inner_dim == 1; }
};

inline IntersectionScalarReport intersection_scalar_check(const TernarySubspace& f1,
                                                          const TernarySubspace& f2,
                                                          double tol = defaults::span_tol) {
    ModuleIntersection meet = intersect(f1, f2, tol);
    IntersectionScalarReport r;
    r.intersection_dim = meet.space.dim();
    r.intersection_ternary = meet.ternary;
    if (!meet.module) return r;
    r.inner_dim = meet.module->inner_algebra().dim();
    if (r.inner_dim == 1 && meet.space.dim() > 0) {
        ComplexMatrix z = meet.space.basis(0);
        const double nz = module_norm(z);
        if (nz > 1e-12) {
            z *= cplx{1.0 / nz, 0.0};
            r.z = z;
        }
    }
    return r;
}

/// Two-level anchor check: (a) <z, z> equals the identity of the inner
/// ambient; (b) optionally, |z| acts as a left unit on a given algebra.
struct UnitInnerReport {
    bool inner_is_identity = false;
    double identity_residual = 0.0;
    std::optional<bool> abs_acts_as_unit;
    double unit_action_residual = 0.0;
};

inline UnitInnerReport verify_unit_inner(const ComplexMatrix& z, double tol = 1e-9,
                                         const StarSubalgebra* algebra = nullptr) {
    UnitInnerReport r;
    const ComplexMatrix g = inner(z, z);
    r.identity_residual = (g - ComplexMatrix::identity(z.cols())).frobenius_norm();
    r.inner_is_identity = r.identity_residual <= tol;
    if (algebra != nullptr) {
        if (algebra->ambient_dim() != z.cols())
            raise(ErrorKind::ShapeMismatch, "verify_unit_inner: algebra ambient mismatch");
        const ComplexMatrix az = psd_sqrt(g.hermitized());
        double worst = 0.0;
        for (const auto& b : algebra->basis())
            worst = std::max(worst, (az * b - b).frobenius_norm());
        r.unit_action_residual = worst;
        r.abs_acts_as_unit = worst <= tol;
    }
    return r;
}

} // namespace starmod
