#pragma once

#include <vector>

#include "starmod/complex_matrix.hpp"
#include "starmod/hermitian_eig.hpp"

namespace starmod {

namespace defaults {
inline constexpr double span_tol = 1e-9;
} // namespace defaults

/// Linear span of k x n matrices, kept as an orthonormal basis under the
/// trace pairing. All membership and projection questions reduce to plain
/// coefficient arithmetic against that basis.
class MatrixSpan {
public:
    MatrixSpan() = default;

    MatrixSpan(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    static MatrixSpan of(std::size_t rows, std::size_t cols,
                         const std::vector<ComplexMatrix>& candidates,
                         double tol = defaults::span_tol) {
        MatrixSpan s(rows, cols);
        for (const auto& c : candidates) s.try_add(c, tol);
        return s;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const std::vector<ComplexMatrix>& basis() const noexcept { return basis_; }
    const ComplexMatrix& basis(std::size_t k) const { return basis_[k]; }

    /// Gram-Schmidt insert with one re-orthogonalization pass. Returns true
    /// when the candidate enlarged the span.
    bool try_add(const ComplexMatrix& m, double tol = defaults::span_tol) {
        if (m.rows() != rows_ || m.cols() != cols_)
            raise(ErrorKind::ShapeMismatch, "span insert: wrong member shape");
        const double scale = m.frobenius_norm();
        if (scale <= tol) return false;
        ComplexMatrix r = m;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis_) r -= trace_pair(b, r) * b;
        const double rn = r.frobenius_norm();
        if (rn <= tol * (1.0 + scale)) return false;
        basis_.push_back((1.0 / rn) * r);
        return true;
    }

    ComplexMatrix project(const ComplexMatrix& m) const {
        ComplexMatrix p = ComplexMatrix::zeros(rows_, cols_);
        for (const auto& b : basis_) p += trace_pair(b, m) * b;
        return p;
    }

    double residual(const ComplexMatrix& m) const { return (m - project(m)).frobenius_norm(); }

    bool contains(const ComplexMatrix& m, double tol = defaults::span_tol) const {
        if (m.rows() != rows_ || m.cols() != cols_) return false;
        return residual(m) <= tol * (1.0 + m.frobenius_norm());
    }

    std::vector<cplx> coefficients(const ComplexMatrix& m) const {
        std::vector<cplx> c;
        c.reserve(basis_.size());
        for (const auto& b : basis_) c.push_back(trace_pair(b, m));
        return c;
    }

    ComplexMatrix from_coefficients(const std::vector<cplx>& c) const {
        if (c.size() != basis_.size())
            raise(ErrorKind::ShapeMismatch, "coefficient count does not match span dim");
        ComplexMatrix m = ComplexMatrix::zeros(rows_, cols_);
        for (std::size_t k = 0; k < c.size(); ++k) m += c[k] * basis_[k];
        return m;
    }

    /// ||P - Q||_F between the orthogonal projectors of the two spans,
    /// computed from cross Gram coefficients without materializing them.
    double projector_distance(const MatrixSpan& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            raise(ErrorKind::ShapeMismatch, "projector_distance: ambient shapes differ");
        double cross = 0.0;
        for (const auto& a : basis_)
            for (const auto& b : o.basis_) cross += std::norm(trace_pair(a, b));
        const double d2 = static_cast<double>(dim()) + static_cast<double>(o.dim()) - 2.0 * cross;
        return std::sqrt(std::max(0.0, d2));
    }

    /// Span intersection via the kernel of the stacked coefficient Gram form.
    static MatrixSpan intersection(const MatrixSpan& a, const MatrixSpan& b,
                                   double tol = defaults::span_tol) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            raise(ErrorKind::ShapeMismatch, "intersection: ambient shapes differ");
        MatrixSpan out(a.rows_, a.cols_);
        const std::size_t da = a.dim(), db = b.dim();
        if (da == 0 || db == 0) return out;

        // Kernel vectors (u, v) of [[I, -C], [-C*, I]] encode sum u_i a_i = sum v_j b_j.
        const std::size_t d = da + db;
        ComplexMatrix g(d, d);
        for (std::size_t i = 0; i < da; ++i) g(i, i) = 1.0;
        for (std::size_t j = 0; j < db; ++j) g(da + j, da + j) = 1.0;
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < db; ++j) {
                const cplx c = trace_pair(a.basis_[i], b.basis_[j]);
                g(i, da + j) = -c;
                g(da + j, i) = -std::conj(c);
            }
        HermitianEig e = herm_eig(g.hermitized());
        for (std::size_t k = 0; k < d; ++k) {
            if (e.values[k] > defaults::kernel_cutoff) break;
            ComplexMatrix m = ComplexMatrix::zeros(a.rows_, a.cols_);
            for (std::size_t i = 0; i < da; ++i) m += e.vectors(i, k) * a.basis_[i];
            out.try_add(m, tol);
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ComplexMatrix> basis_;
};

} // namespace starmod
