#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "starmod/errors.hpp"

namespace starmod {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Everything in this library works at desk
/// scale (dimensions well under a hundred), so the representation favors
/// clarity and determinism over blocking or expression templates.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            raise(ErrorKind::ShapeMismatch, "entry count does not match rows*cols");
    }

    /// Row-of-rows construction, mainly for literals in tests and scenarios.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                raise(ErrorKind::ShapeMismatch, "ragged matrix literal");
            for (const auto& v : r) a_.push_back(v);
        }
    }

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diag(const std::vector<double>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return a_.size(); }
    bool empty() const noexcept { return a_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cplx>& data() const noexcept { return a_; }
    std::vector<cplx>& data() noexcept { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }

    ComplexMatrix& operator*=(cplx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_)
            raise(ErrorKind::ShapeMismatch, "matmul: " + shape_str(a) + " x " + shape_str(b));
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix c(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) c(j, i) = std::conj((*this)(i, j));
        return c;
    }

    cplx trace() const {
        if (!is_square()) raise(ErrorKind::ShapeMismatch, "trace of non-square matrix");
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double hermiticity_defect() const {
        if (!is_square()) raise(ErrorKind::ShapeMismatch, "hermiticity of non-square matrix");
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                s += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
        return std::sqrt(s);
    }

    bool is_hermitian(double tol = 1e-10) const {
        return is_square() && hermiticity_defect() <= tol * (1.0 + frobenius_norm());
    }

    /// Symmetrized copy, (A + A*)/2. Used to strip roundoff asymmetry before
    /// spectral routines; callers that need a hard check use is_hermitian.
    ComplexMatrix hermitized() const {
        if (!is_square()) raise(ErrorKind::ShapeMismatch, "hermitize non-square matrix");
        ComplexMatrix c(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                c(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        return c;
    }

    ComplexMatrix conj() const {
        ComplexMatrix c(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) c.a_[k] = std::conj(a_[k]);
        return c;
    }

    ComplexMatrix column(std::size_t j) const {
        ComplexMatrix c(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }

    bool same_shape(const ComplexMatrix& o) const noexcept {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }

private:
    static std::string shape_str(const ComplexMatrix& m) {
        return std::to_string(m.rows_) + "x" + std::to_string(m.cols_);
    }

    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (!same_shape(o))
            raise(ErrorKind::ShapeMismatch,
                  std::string(op) + ": " + shape_str(*this) + " vs " + shape_str(o));
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

/// Sesquilinear pairing tr(A* B), conjugate-linear in the first argument.
/// This is the inner product every span/orthonormalization routine uses.
inline cplx trace_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.same_shape(b))
        raise(ErrorKind::ShapeMismatch, "trace_pair: shapes differ");
    cplx s{0.0, 0.0};
    const auto& x = a.data();
    const auto& y = b.data();
    for (std::size_t k = 0; k < x.size(); ++k) s += std::conj(x[k]) * y[k];
    return s;
}

inline double distance_fro(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).frobenius_norm();
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

} // namespace starmod
