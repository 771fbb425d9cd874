#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "starmod/hermitian_eig.hpp"

namespace starmod {

namespace defaults {
inline constexpr double solve_tol = 1e-8;
inline constexpr std::size_t solve_max_iter = 50000;
inline constexpr std::uint64_t solve_seed = 42;
inline constexpr double affine_contradiction_tol = 1e-6;
} // namespace defaults

/// Bounded auxiliary real variable (scale or slack).
struct ScaleBox {
    double lo = 0.0;
    double hi = 1.0;
};

struct ConstraintTerm {
    std::size_t scale = 0; // index into FeasibilityProblem::scales
    double coeff = 0.0;
};

/// Affine constraint tr(rho G) = target + sum coeff * c_scale with G Hermitian.
struct AffineConstraint {
    ComplexMatrix g;
    double target = 0.0;
    std::vector<ConstraintTerm> terms;
    std::string label;
};

/// Search for a density matrix rho (PSD, unit trace) and boxed scale
/// variables satisfying a list of affine trace constraints.
struct FeasibilityProblem {
    std::size_t ambient_dim = 0;
    std::vector<AffineConstraint> constraints;
    std::vector<ScaleBox> scales;
    double tolerance = defaults::solve_tol;
    std::size_t max_iter = defaults::solve_max_iter;
    std::uint64_t seed = defaults::solve_seed;
};

enum class FeasStatus { Feasible, Infeasible, Inconclusive };

inline const char* feas_status_name(FeasStatus s) {
    switch (s) {
        case FeasStatus::Feasible: return "feasible";
        case FeasStatus::Infeasible: return "infeasible";
        case FeasStatus::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

struct FeasibilityCertificate {
    FeasStatus status = FeasStatus::Inconclusive;
    ComplexMatrix witness;            // density candidate (best K-point seen)
    std::vector<double> scales;       // boxed variables at that point
    std::vector<double> residuals;    // per-constraint residuals at the witness
    double max_residual = 0.0;
    double gap = 0.0;                 // stabilized inter-set distance estimate
    bool exact_contradiction = false; // affine system alone inconsistent
    std::size_t iterations = 0;
    double tolerance = defaults::solve_tol;
    std::uint64_t seed = defaults::solve_seed;
    std::string method;
};

namespace detail {

/// Pseudo-inverse application for the small real symmetric Gram system of
/// the affine projector: solve M x = b in the least-squares sense.
class GramSolver {
public:
    explicit GramSolver(const ComplexMatrix& m) : eig_(herm_eig(m.hermitized())) {
        const double top = eig_.values.empty()
                               ? 0.0
                               : std::max(std::abs(eig_.values.front()), std::abs(eig_.values.back()));
        cutoff_ = 1e-12 * std::max(1.0, top);
    }

    std::vector<double> apply(const std::vector<double>& b) const {
        const std::size_t d = b.size();
        std::vector<double> out(d, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
            if (std::abs(eig_.values[k]) <= cutoff_) continue;
            cplx proj{0.0, 0.0};
            for (std::size_t i = 0; i < d; ++i) proj += std::conj(eig_.vectors(i, k)) * b[i];
            const cplx scaled = proj / eig_.values[k];
            for (std::size_t i = 0; i < d; ++i) out[i] += (eig_.vectors(i, k) * scaled).real();
        }
        return out;
    }

    /// Residual || M x_ls - b || of the least-squares solve; nonzero residual
    /// proves b is outside the row space, i.e. the affine system has no
    /// solution at all.
    double inconsistency(const std::vector<double>& b) const {
        const std::size_t d = b.size();
        std::vector<double> proj(d, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
            if (std::abs(eig_.values[k]) <= cutoff_) continue;
            cplx c{0.0, 0.0};
            for (std::size_t i = 0; i < d; ++i) c += std::conj(eig_.vectors(i, k)) * b[i];
            for (std::size_t i = 0; i < d; ++i) proj[i] += (eig_.vectors(i, k) * c).real();
        }
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += (proj[i] - b[i]) * (proj[i] - b[i]);
        return std::sqrt(s);
    }

private:
    HermitianEig eig_;
    double cutoff_;
};

struct SplitPoint {
    ComplexMatrix rho;
    std::vector<double> c;

    SplitPoint() = default;
    SplitPoint(std::size_t n, std::size_t s) : rho(n, n), c(s, 0.0) {}

    SplitPoint& operator+=(const SplitPoint& o) {
        rho += o.rho;
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
        return *this;
    }
    SplitPoint& operator-=(const SplitPoint& o) {
        rho -= o.rho;
        for (std::size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
        return *this;
    }
    double dist(const SplitPoint& o) const {
        double s = 0.0;
        const auto& a = rho.data();
        const auto& b = o.rho.data();
        for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
        for (std::size_t k = 0; k < c.size(); ++k) s += (c[k] - o.c[k]) * (c[k] - o.c[k]);
        return std::sqrt(s);
    }
};

} // namespace detail

inline void validate_problem(const FeasibilityProblem& p) {
    if (p.ambient_dim == 0) raise(ErrorKind::BadProblem, "ambient dimension is zero");
    if (p.tolerance <= 0.0) raise(ErrorKind::BadProblem, "non-positive tolerance");
    for (const auto& box : p.scales)
        if (!(box.lo <= box.hi)) raise(ErrorKind::BadProblem, "empty scale box");
    for (const auto& con : p.constraints) {
        if (con.g.rows() != p.ambient_dim || con.g.cols() != p.ambient_dim)
            raise(ErrorKind::BadProblem, "constraint matrix has wrong shape");
        if (!con.g.is_hermitian(1e-9))
            raise(ErrorKind::BadProblem, "constraint matrix not Hermitian: " + con.label);
        if (!std::isfinite(con.target)) raise(ErrorKind::BadProblem, "non-finite target");
        for (const auto& t : con.terms)
            if (t.scale >= p.scales.size())
                raise(ErrorKind::BadProblem, "constraint references missing scale");
    }
}

/// Dykstra alternating projections between
///   K = {rho PSD, tr rho = 1} x (scale boxes)   and
///   L = the affine constraint set.
/// Feasible when a K-point satisfies every constraint within tolerance;
/// Infeasible when the affine system alone is inconsistent (exact
/// contradiction) or the inter-set distance stabilizes above 10x tolerance
/// for 50 consecutive checks. Deterministic for fixed inputs.
inline FeasibilityCertificate solve_feasibility(const FeasibilityProblem& problem) {
    validate_problem(problem);
    const std::size_t n = problem.ambient_dim;
    const std::size_t ns = problem.scales.size();
    const std::size_t nc = problem.constraints.size();

    FeasibilityCertificate cert;
    cert.tolerance = problem.tolerance;
    cert.seed = problem.seed;
    cert.method = "dykstra";

    std::vector<AffineConstraint> cons;
    cons.reserve(nc);
    for (const auto& c : problem.constraints) {
        AffineConstraint cc = c;
        cc.g = cc.g.hermitized();
        cons.push_back(std::move(cc));
    }

    auto eval_residuals = [&](const detail::SplitPoint& pt) {
        std::vector<double> r(nc, 0.0);
        for (std::size_t j = 0; j < nc; ++j) {
            double v = trace_pair(cons[j].g, pt.rho).real();
            for (const auto& t : cons[j].terms) v -= t.coeff * pt.c[t.scale];
            r[j] = v - cons[j].target;
        }
        return r;
    };

    // Gram matrix of the constraint functionals under the split inner product.
    ComplexMatrix gram(nc, nc);
    std::vector<double> targets(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        targets[i] = cons[i].target;
        for (std::size_t j = i; j < nc; ++j) {
            double v = trace_pair(cons[i].g, cons[j].g).real();
            for (const auto& ti : cons[i].terms)
                for (const auto& tj : cons[j].terms)
                    if (ti.scale == tj.scale) v += ti.coeff * tj.coeff;
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }

    detail::SplitPoint start(n, ns);
    start.rho = (1.0 / static_cast<double>(n)) * ComplexMatrix::identity(n);
    for (std::size_t k = 0; k < ns; ++k)
        start.c[k] = 0.5 * (problem.scales[k].lo + problem.scales[k].hi);

    if (nc == 0) {
        cert.status = FeasStatus::Feasible;
        cert.witness = start.rho;
        cert.scales = start.c;
        cert.method = "empty";
        return cert;
    }

    detail::GramSolver solver(gram);

    // An inconsistent affine system cannot be met by any Hermitian rho and
    // unboxed scales, let alone the convex restriction: hard infeasibility.
    const double linear_defect = solver.inconsistency(targets);
    if (linear_defect > defaults::affine_contradiction_tol) {
        cert.status = FeasStatus::Infeasible;
        cert.exact_contradiction = true;
        cert.gap = linear_defect;
        cert.witness = start.rho;
        cert.scales = start.c;
        cert.residuals = eval_residuals(start);
        for (double r : cert.residuals) cert.max_residual = std::max(cert.max_residual, std::abs(r));
        return cert;
    }

    auto project_affine = [&](detail::SplitPoint pt) {
        const std::vector<double> lambda = solver.apply(eval_residuals(pt));
        for (std::size_t j = 0; j < nc; ++j) {
            if (lambda[j] == 0.0) continue;
            pt.rho -= cplx{lambda[j], 0.0} * cons[j].g;
            for (const auto& t : cons[j].terms) pt.c[t.scale] += lambda[j] * t.coeff;
        }
        return pt;
    };

    auto project_convex = [&](detail::SplitPoint pt) {
        pt.rho = project_spectahedron(pt.rho.hermitized());
        for (std::size_t k = 0; k < ns; ++k)
            pt.c[k] = std::min(problem.scales[k].hi, std::max(problem.scales[k].lo, pt.c[k]));
        return pt;
    };

    detail::SplitPoint x = start;
    detail::SplitPoint p(n, ns), q(n, ns);
    double prev_dist = -1.0;
    int stable_streak = 0;
    const double tol = problem.tolerance;

    for (std::size_t iter = 1; iter <= problem.max_iter; ++iter) {
        detail::SplitPoint kp_in = x;
        kp_in += p;
        detail::SplitPoint y = project_convex(kp_in);
        p = kp_in;
        p -= y;

        detail::SplitPoint lp_in = y;
        lp_in += q;
        detail::SplitPoint w = project_affine(lp_in);
        q = lp_in;
        q -= w;

        cert.iterations = iter;

        const std::vector<double> r = eval_residuals(y);
        double maxres = 0.0;
        for (double v : r) maxres = std::max(maxres, std::abs(v));
        if (maxres <= tol) {
            cert.status = FeasStatus::Feasible;
            cert.witness = y.rho;
            cert.scales = y.c;
            cert.residuals = r;
            cert.max_residual = maxres;
            cert.gap = y.dist(w);
            return cert;
        }

        const double d = y.dist(w);
        if (d > 10.0 * tol && prev_dist >= 0.0 &&
            std::abs(d - prev_dist) <= std::max(1e-14, 1e-9 * d)) {
            if (++stable_streak >= 50) {
                cert.status = FeasStatus::Infeasible;
                cert.gap = d;
                cert.witness = y.rho;
                cert.scales = y.c;
                cert.residuals = r;
                cert.max_residual = maxres;
                return cert;
            }
        } else {
            stable_streak = 0;
        }
        prev_dist = d;
        x = w;
    }

    detail::SplitPoint y = project_convex(x);
    cert.status = FeasStatus::Inconclusive;
    cert.witness = y.rho;
    cert.scales = y.c;
    cert.residuals = eval_residuals(y);
    for (double r : cert.residuals) cert.max_residual = std::max(cert.max_residual, std::abs(r));
    cert.gap = prev_dist < 0.0 ? 0.0 : prev_dist;
    return cert;
}

} // namespace starmod
