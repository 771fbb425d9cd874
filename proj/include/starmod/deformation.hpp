#pragma once

#include <memory>

#include "starmod/hilbert_module.hpp"
#include "starmod/state.hpp"

namespace starmod {

/// Quotient-style algebra structure a ternary subspace acquires from an
/// anchor z0 with <z0, z0> = 1: elements are represented by <z0, x>, the
/// product of representatives is the representative of the deformed product,
/// and the involution is the ordinary adjoint of representatives. The anchor
/// itself represents the unit.
class DeformedAlgebra : public std::enable_shared_from_this<DeformedAlgebra> {
public:
    static std::shared_ptr<const DeformedAlgebra> build(TernarySubspace carrier, ComplexMatrix z0,
                                                        double tol = 1e-9) {
        if (z0.rows() != carrier.rows() || z0.cols() != carrier.cols())
            raise(ErrorKind::ShapeMismatch, "anchor has wrong carrier shape");
        if (!carrier.contains(z0)) raise(ErrorKind::AnchorNotInModule, "anchor outside module span");
        UnitInnerReport u = verify_unit_inner(z0, tol);
        if (!u.inner_is_identity)
            raise(ErrorKind::AnchorNotUnit,
                  "<z0, z0> differs from identity by " + std::to_string(u.identity_residual));

        auto d = std::shared_ptr<DeformedAlgebra>(new DeformedAlgebra());
        d->carrier_ = std::move(carrier);
        d->z0_ = std::move(z0);

        // Representative image {<z0, x> : x in module}. It is *-closed and
        // product-closed in exact arithmetic; both are verified numerically.
        const std::size_t n = d->carrier_.cols();
        MatrixSpan image(n, n);
        for (const auto& b : d->carrier_.basis()) image.try_add(inner(d->z0_, b));
        for (std::size_t i = 0; i < image.dim(); ++i) {
            const ComplexMatrix& a = image.basis(i);
            if (!image.contains(a.adjoint(), 1e-7))
                raise(ErrorKind::ImageNotClosed, "image not adjoint-closed at basis " + std::to_string(i));
            for (std::size_t j = 0; j < image.dim(); ++j) {
                if (!image.contains(image.basis(i) * image.basis(j), 1e-7))
                    raise(ErrorKind::ImageNotClosed, "image not product-closed at basis pair " +
                                                         std::to_string(i) + "," + std::to_string(j));
            }
        }
        d->image_ = share(algebra_from_span(n, image));
        return d;
    }

    const TernarySubspace& carrier() const noexcept { return carrier_; }
    const ComplexMatrix& anchor() const noexcept { return z0_; }
    const AlgebraPtr& image_algebra() const noexcept { return image_; }

    ComplexMatrix representative(const ComplexMatrix& x) const {
        if (!carrier_.contains(x))
            raise(ErrorKind::DomainMismatch, "element outside the deformed carrier");
        return inner(z0_, x);
    }

    /// Module element z0 * a representing the same class as representative a.
    ComplexMatrix section(const ComplexMatrix& a) const { return z0_ * a; }

private:
    DeformedAlgebra() = default;

    TernarySubspace carrier_;
    ComplexMatrix z0_;
    AlgebraPtr image_;
};

using DeformedPtr = std::shared_ptr<const DeformedAlgebra>;

inline DeformedPtr build_deformed(TernarySubspace carrier, ComplexMatrix z0, double tol = 1e-9) {
    return DeformedAlgebra::build(std::move(carrier), std::move(z0), tol);
}

/// Element of a deformed algebra, held by its representative matrix.
class DeformedElement {
public:
    DeformedElement(DeformedPtr owner, ComplexMatrix rep)
        : owner_(std::move(owner)), rep_(std::move(rep)) {}

    static DeformedElement from_module(const DeformedPtr& owner, const ComplexMatrix& x) {
        return {owner, owner->representative(x)};
    }

    static DeformedElement unit(const DeformedPtr& owner) {
        return {owner, ComplexMatrix::identity(owner->carrier().cols())};
    }

    const DeformedPtr& owner() const noexcept { return owner_; }
    const ComplexMatrix& rep() const noexcept { return rep_; }

private:
    DeformedPtr owner_;
    ComplexMatrix rep_;
};

namespace detail {
inline void require_same_owner(const DeformedElement& a, const DeformedElement& b) {
    if (a.owner() != b.owner())
        raise(ErrorKind::MixedAlgebras, "elements belong to different deformed algebras");
}
} // namespace detail

/// Deformed product [x] o [y].
inline DeformedElement circ(const DeformedElement& a, const DeformedElement& b) {
    detail::require_same_owner(a, b);
    return {a.owner(), a.rep() * b.rep()};
}

/// Deformed involution [x]^#.
inline DeformedElement sharp(const DeformedElement& a) { return {a.owner(), a.rep().adjoint()}; }

/// Quotient norm ||[x]||.
inline double q_norm(const DeformedElement& a) { return operator_norm(a.rep()); }

/// State on the image algebra pulled to the inner-product algebra of the
/// carrier. With the representative realization the two algebras coincide as
/// matrix spans, so the witness carries over unchanged; the rebind still
/// revalidates positivity and normalization on the target.
inline StateFunctional transport_state_to_algebra(const DeformedPtr& d, const StateFunctional& phi) {
    if (phi.algebra_ptr() != d->image_algebra())
        raise(ErrorKind::DomainMismatch, "state is not on this deformed algebra");
    return make_state(d->carrier().inner_algebra_ptr(), phi.witness());
}

/// State on the inner-product algebra pushed to the image algebra.
inline StateFunctional transport_state_to_deformed(const DeformedPtr& d, const StateFunctional& psi) {
    if (psi.algebra_ptr() != d->carrier().inner_algebra_ptr())
        raise(ErrorKind::DomainMismatch, "state is not on the carrier's inner algebra");
    return make_state(d->image_algebra(), psi.witness());
}

} // namespace starmod
