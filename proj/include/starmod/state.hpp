#pragma once

#include <cmath>
#include <utility>

#include "starmod/hermitian_eig.hpp"
#include "starmod/star_algebra.hpp"

namespace starmod {

namespace defaults {
inline constexpr double state_tol = 1e-9;
} // namespace defaults

/// Positive normalized linear functional on a StarSubalgebra, represented by
/// a Hermitian witness under the trace pairing: phi(a) = tr(rho a).
/// The witness lives in the ambient matrix space, so restricting a state to a
/// smaller algebra is just a rebind.
class StateFunctional {
public:
    StateFunctional() = default;

    StateFunctional(AlgebraPtr algebra, ComplexMatrix witness, double norm_value)
        : algebra_(std::move(algebra)), witness_(std::move(witness)), norm_value_(norm_value) {}

    const AlgebraPtr& algebra_ptr() const noexcept { return algebra_; }
    const StarSubalgebra& algebra() const { return *algebra_; }
    const ComplexMatrix& witness() const noexcept { return witness_; }
    double norm_value() const noexcept { return norm_value_; }

    cplx operator()(const ComplexMatrix& a) const { return trace_pair(witness_, a); }

    double real_at(const ComplexMatrix& a) const { return (*this)(a).real(); }

    /// Gram matrix Q[i][j] = phi(b_i* b_j) over the algebra basis; its
    /// positive semidefiniteness is exactly positivity of the functional.
    ComplexMatrix gram() const {
        const auto& basis = algebra_->basis();
        const std::size_t d = basis.size();
        ComplexMatrix q(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                q(i, j) = trace_pair(witness_, basis[i].adjoint() * basis[j]);
        return q.hermitized();
    }

    double min_gram_eigenvalue() const {
        if (algebra_->dim() == 0) return 0.0;
        HermitianEig e = herm_eig(gram());
        return e.values.front();
    }

private:
    AlgebraPtr algebra_;
    ComplexMatrix witness_;
    double norm_value_ = 0.0;
};

/// Builds a state from a Hermitian witness, verifying positivity on the
/// algebra (Gram PSD) and normalization phi(unit) = 1. With `normalize` set,
/// a positive non-normalized witness is rescaled instead of rejected.
inline StateFunctional make_state(AlgebraPtr algebra, ComplexMatrix witness, bool normalize = false,
                                  double tol = defaults::state_tol) {
    if (witness.rows() != algebra->ambient_dim() || witness.cols() != algebra->ambient_dim())
        raise(ErrorKind::ShapeMismatch, "state witness has wrong ambient shape");
    if (!witness.is_hermitian(1e-9))
        raise(ErrorKind::NotHermitian, "state witness not Hermitian");
    witness = witness.hermitized();

    double nv = algebra->has_unit() ? trace_pair(witness, algebra->unit()).real()
                                    : witness.trace().real();
    if (normalize) {
        if (nv <= tol) raise(ErrorKind::DivisionByZero, "cannot normalize: phi(unit) <= 0");
        witness *= cplx{1.0 / nv, 0.0};
        nv = 1.0;
    }
    if (std::abs(nv - 1.0) > tol)
        raise(ErrorKind::NotNormalized, "phi(unit) = " + std::to_string(nv));

    StateFunctional phi(std::move(algebra), std::move(witness), nv);
    if (phi.min_gram_eigenvalue() < -tol)
        raise(ErrorKind::NotPositiveOnAlgebra,
              "Gram eigenvalue " + std::to_string(phi.min_gram_eigenvalue()));
    return phi;
}

/// Vector state a |-> <x, a x> for a unit column x.
inline StateFunctional vector_state(AlgebraPtr algebra, const ComplexMatrix& x,
                                    double tol = defaults::state_tol) {
    if (x.cols() != 1 || x.rows() != algebra->ambient_dim())
        raise(ErrorKind::ShapeMismatch, "vector state needs an ambient column vector");
    if (std::abs(x.frobenius_norm() - 1.0) > tol)
        raise(ErrorKind::NotUnitVector, "norm " + std::to_string(x.frobenius_norm()));
    return make_state(std::move(algebra), x * x.adjoint(), false, tol);
}

/// Left kernel N_phi = {x in A : phi(x* x) = 0}, returned as an orthonormal
/// span. Zero-eigenvalue directions of the Gram matrix are exactly the
/// coefficient vectors of kernel elements.
inline MatrixSpan left_kernel(const StateFunctional& phi, double cutoff = defaults::kernel_cutoff) {
    const auto& alg = phi.algebra();
    MatrixSpan out(alg.ambient_dim(), alg.ambient_dim());
    const std::size_t d = alg.dim();
    if (d == 0) return out;
    HermitianEig e = herm_eig(phi.gram());
    const double top = std::max(1.0, e.values.back());
    for (std::size_t k = 0; k < d; ++k) {
        if (e.values[k] > cutoff * top) break;
        std::vector<cplx> c(d);
        for (std::size_t i = 0; i < d; ++i) c[i] = e.vectors(i, k);
        out.try_add(alg.span().from_coefficients(c));
    }
    return out;
}

/// Whether phi is definite at a: |phi(a)|^2 = phi(a* a) up to tol.
/// (Always <= by positivity; definiteness is the equality case.)
inline bool is_definite_at(const StateFunctional& phi, const ComplexMatrix& a, double tol = 1e-9) {
    if (!phi.algebra().contains(a))
        raise(ErrorKind::NotInAlgebra, "is_definite_at: element outside algebra span");
    const double lhs = std::norm(phi(a));
    const double rhs = phi.real_at(a.adjoint() * a);
    return lhs >= rhs - tol;
}

/// State attaining phi(a) = ||a|| for Hermitian a whose norm is attained on
/// the positive side of the spectrum: the vector state of a top eigenvector.
inline StateFunctional norming_state(AlgebraPtr algebra, const ComplexMatrix& a,
                                     double tol = defaults::state_tol) {
    if (!a.is_hermitian(1e-9)) raise(ErrorKind::NotHermitian, "norming_state: element not Hermitian");
    if (!algebra->contains(a)) raise(ErrorKind::NotInAlgebra, "norming_state: element outside algebra");

    HermitianEig e = herm_eig(a.hermitized());
    const double lo = e.values.front(), hi = e.values.back();
    if (-lo > hi + tol)
        raise(ErrorKind::NormNotAttainedPositively,
              "spectrum [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

    ComplexMatrix v = e.vectors.column(e.values.size() - 1);
    // Keep the witness supported inside the algebra's carrier so that
    // phi(unit) = 1 even when the unit is a proper projection.
    if (algebra->has_unit()) {
        ComplexMatrix w = algebra->unit() * v;
        const double nw = w.frobenius_norm();
        if (nw > 1e-12) v = (1.0 / nw) * w;
    }
    return vector_state(std::move(algebra), v, tol);
}

/// Slack report for the classical state inequalities; every field is
/// nonnegative (within tolerance) for a genuine state. Kadison and the
/// norm-weighted bound are evaluated at the Hermitian part of `a`.
struct StateInequalityReport {
    double cauchy_schwarz;   // phi(a*a) phi(b*b) - |phi(b*a)|^2
    double kadison;          // phi(h^2) - phi(h)^2, h = herm(a)
    double choi;             // phi(a*a) - |phi(a)|^2
    double norm_abs_bound;   // ||h|| phi(|h|) - phi(h^2)

    double min_slack() const {
        return std::min(std::min(cauchy_schwarz, kadison), std::min(choi, norm_abs_bound));
    }
};

inline StateInequalityReport check_state_inequalities(const StateFunctional& phi,
                                                      const ComplexMatrix& a,
                                                      const ComplexMatrix& b) {
    if (!phi.algebra().contains(a) || !phi.algebra().contains(b))
        raise(ErrorKind::NotInAlgebra, "state inequalities: element outside algebra span");

    StateInequalityReport r{};
    const double paa = phi.real_at(a.adjoint() * a);
    const double pbb = phi.real_at(b.adjoint() * b);
    r.cauchy_schwarz = paa * pbb - std::norm(phi(b.adjoint() * a));
    r.choi = paa - std::norm(phi(a));

    const ComplexMatrix h = (0.5 * (a + a.adjoint())).hermitized();
    const double ph = phi.real_at(h);
    const double ph2 = phi.real_at(h * h);
    r.kadison = ph2 - ph * ph;
    r.norm_abs_bound = operator_norm(h) * phi.real_at(psd_sqrt(h * h)) - ph2;
    return r;
}

} // namespace starmod
