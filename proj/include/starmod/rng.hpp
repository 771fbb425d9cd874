#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "starmod/complex_matrix.hpp"

namespace starmod {

/// Deterministic random source. Distribution shaping is done by hand on top
/// of raw mt19937_64 output so that results are bit-reproducible across
/// standard library implementations, which certificate byte-identity relies on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller; avoids std::normal_distribution, whose output is
    /// implementation-defined.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    cplx cnormal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    ComplexMatrix gaussian(std::size_t rows, std::size_t cols) {
        ComplexMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = cnormal();
        return m;
    }

    ComplexMatrix hermitian(std::size_t n) {
        ComplexMatrix g = gaussian(n, n);
        return (0.5 * (g + g.adjoint())).hermitized();
    }

    /// Random density matrix (PSD, unit trace), full rank almost surely.
    ComplexMatrix density(std::size_t n) {
        ComplexMatrix g = gaussian(n, n);
        ComplexMatrix p = g * g.adjoint();
        const double t = p.trace().real();
        return (1.0 / t) * p;
    }

    /// Column vector of unit Euclidean norm.
    ComplexMatrix unit_vector(std::size_t n) {
        ComplexMatrix v = gaussian(n, 1);
        double nv = v.frobenius_norm();
        while (nv < 1e-12) {
            v = gaussian(n, 1);
            nv = v.frobenius_norm();
        }
        return (1.0 / nv) * v;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace starmod
