#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "starmod/complex_matrix.hpp"
#include "starmod/errors.hpp"

namespace starmod {

namespace defaults {
inline constexpr double hermitian_tol = 1e-10;
inline constexpr double psd_clamp = 1e-10;
inline constexpr double psd_fail = 1e-6;
inline constexpr double kernel_cutoff = 1e-8;
} // namespace defaults

/// Eigensystem of a Hermitian matrix: `values` ascending,
/// `vectors` holds the matching orthonormal eigenvectors as columns.
struct HermitianEig {
    std::vector<double> values;
    ComplexMatrix vectors;

    ComplexMatrix reconstruct() const {
        const std::size_t n = values.size();
        ComplexMatrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = values[i];
        return vectors * d * vectors.adjoint();
    }
};

namespace detail {

// One-sided complex Jacobi rotation zeroing A(p,q). The rotation angle is the
// smaller root, which keeps the diagonal ordering drift minimal.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;

    const cplx phase = apq / mag;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * mag);
    const double sign = tau >= 0.0 ? 1.0 : -1.0;
    const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const cplx se_pos = s * phase;            // s e^{+i arg}
    const cplx se_neg = s * std::conj(phase); // s e^{-i arg}

    const std::size_t n = a.rows();
    // Right-multiply by the rotation: columns p and q.
    for (std::size_t i = 0; i < n; ++i) {
        const cplx x = a(i, p), y = a(i, q);
        a(i, p) = c * x - se_neg * y;
        a(i, q) = se_pos * x + c * y;
    }
    // Left-multiply by its adjoint: rows p and q.
    for (std::size_t j = 0; j < n; ++j) {
        const cplx x = a(p, j), y = a(q, j);
        a(p, j) = c * x - se_pos * y;
        a(q, j) = se_neg * x + c * y;
    }
    // Kill roundoff dust exactly where the rotation is designed to vanish.
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cplx(a(p, p).real(), 0.0);
    a(q, q) = cplx(a(q, q).real(), 0.0);

    for (std::size_t i = 0; i < v.rows(); ++i) {
        const cplx x = v(i, p), y = v(i, q);
        v(i, p) = c * x - se_neg * y;
        v(i, q) = se_pos * x + c * y;
    }
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// First entry of visibly nonzero magnitude is made real positive; this pins
// the free global phase so equal inputs give byte-equal eigenvectors.
inline void normalize_column_phases(ComplexMatrix& v) {
    const std::size_t n = v.rows();
    for (std::size_t j = 0; j < v.cols(); ++j) {
        double colmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) colmax = std::max(colmax, std::abs(v(i, j)));
        if (colmax == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(v(i, j));
            if (m > 1e-12 * colmax) {
                const cplx ph = std::conj(v(i, j) / m);
                for (std::size_t k = 0; k < n; ++k) v(k, j) *= ph;
                v(i, j) = cplx(std::abs(v(i, j)), 0.0);
                break;
            }
        }
    }
}

} // namespace detail

/// Cyclic Jacobi eigendecomposition for Hermitian input. Deterministic sweep
/// order plus phase normalization make the output a pure function of the
/// entries, which the reproducibility contract depends on. Ties in the
/// ascending eigenvalue order fall back to lexicographic eigenvector order.
inline HermitianEig herm_eig(const ComplexMatrix& h, double tol = defaults::hermitian_tol) {
    if (!h.is_square()) raise(ErrorKind::ShapeMismatch, "herm_eig: non-square input");
    if (!h.is_hermitian(tol)) raise(ErrorKind::NotHermitian, "herm_eig: input not Hermitian");

    const std::size_t n = h.rows();
    ComplexMatrix a = h.hermitized();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(1.0, a.frobenius_norm());
    const double stop = 1e-14 * scale;
    for (int sweep = 0; sweep < 80; ++sweep) {
        if (detail::off_diagonal_norm(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > 1e-300) detail::jacobi_rotate(a, v, p, q);
    }

    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i).real();

    detail::normalize_column_phases(v);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return vals[i] < vals[j]; });

    // Resolve near-ties (clusters within tie_eps) by lexicographic vector order.
    const double tie_eps = 1e-12 * scale;
    auto lex_less = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < n; ++r) {
            const cplx x = v(r, i), y = v(r, j);
            if (std::abs(x.real() - y.real()) > 1e-12) return x.real() < y.real();
            if (std::abs(x.imag() - y.imag()) > 1e-12) return x.imag() < y.imag();
        }
        return false;
    };
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo + 1;
        while (hi < n && vals[order[hi]] - vals[order[hi - 1]] <= tie_eps) ++hi;
        if (hi - lo > 1) std::sort(order.begin() + lo, order.begin() + hi, lex_less);
        lo = hi;
    }

    HermitianEig out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = vals[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

/// Hermitian functional calculus through the eigendecomposition.
template <class F>
inline ComplexMatrix herm_apply(const ComplexMatrix& h, F&& f, double tol = defaults::hermitian_tol) {
    HermitianEig e = herm_eig(h, tol);
    const std::size_t n = e.values.size();
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = f(e.values[i]);
    return (e.vectors * d * e.vectors.adjoint()).hermitized();
}

/// PSD square root. Eigenvalue dust in (-psd_fail, 0) is clamped to zero;
/// anything at or below -psd_fail is treated as genuine indefiniteness.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h, double tol = defaults::hermitian_tol) {
    HermitianEig e = herm_eig(h, tol);
    for (double lam : e.values)
        if (lam < -defaults::psd_fail)
            raise(ErrorKind::NotPSD, "psd_sqrt: eigenvalue " + std::to_string(lam));
    const std::size_t n = e.values.size();
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = std::sqrt(std::max(0.0, e.values[i]));
    return (e.vectors * d * e.vectors.adjoint()).hermitized();
}

/// Largest singular value. Hermitian inputs take the direct spectral route;
/// everything else goes through the Gram matrix.
inline double operator_norm(const ComplexMatrix& m) {
    if (m.empty()) return 0.0;
    if (m.is_square() && m.is_hermitian(1e-12)) {
        HermitianEig e = herm_eig(m.hermitized());
        double mx = 0.0;
        for (double lam : e.values) mx = std::max(mx, std::abs(lam));
        return mx;
    }
    ComplexMatrix g = (m.adjoint() * m).hermitized();
    HermitianEig e = herm_eig(g);
    const double top = e.values.empty() ? 0.0 : e.values.back();
    return std::sqrt(std::max(0.0, top));
}

/// Euclidean projection of y onto the probability simplex {w >= 0, sum w = 1}.
inline std::vector<double> project_simplex(std::vector<double> y) {
    const std::size_t n = y.size();
    if (n == 0) raise(ErrorKind::BadProblem, "project_simplex: empty vector");
    std::vector<double> u = y;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t j = 0; j < n; ++j) {
        cum += u[j];
        const double cand = (1.0 - cum) / static_cast<double>(j + 1);
        if (u[j] + cand > 0.0) {
            rho = j + 1;
            theta = cand;
        }
    }
    (void)rho;
    for (auto& w : y) w = std::max(0.0, w + theta);
    return y;
}

/// Nearest density matrix in Frobenius distance: project the spectrum onto
/// the probability simplex in the input's own eigenbasis.
inline ComplexMatrix project_spectahedron(const ComplexMatrix& h,
                                          double tol = defaults::hermitian_tol) {
    HermitianEig e = herm_eig(h, tol);
    std::vector<double> w = project_simplex(e.values);
    const std::size_t n = w.size();
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = w[i];
    return (e.vectors * d * e.vectors.adjoint()).hermitized();
}

} // namespace starmod
