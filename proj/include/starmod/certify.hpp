#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starmod/deformation.hpp"
#include "starmod/descent.hpp"
#include "starmod/extreme_states.hpp"
#include "starmod/feasibility.hpp"
#include "starmod/hilbert_module.hpp"

namespace starmod {

struct SolveOptions {
    double tolerance = defaults::solve_tol;
    std::size_t max_iter = defaults::solve_max_iter;
    std::uint64_t seed = defaults::solve_seed;
};

namespace detail {

inline void require_state(const StateFunctional& phi, const char* who) {
    if (std::abs(phi.norm_value() - 1.0) > 1e-6)
        raise(ErrorKind::NotNormalized, std::string(who) + ": functional is not a state");
}

/// Splits the complex constraint phi(b) = value (+ scale terms) into the two
/// Hermitian trace constraints the solver understands.
inline void push_value_constraints(std::vector<AffineConstraint>& out, const ComplexMatrix& b,
                                   cplx value, const std::string& label,
                                   std::optional<std::size_t> scale = std::nullopt) {
    const ComplexMatrix h = (0.5 * (b + b.adjoint())).hermitized();
    const ComplexMatrix k = (cplx{0.0, -0.5} * (b - b.adjoint())).hermitized();

    auto push_part = [&](const ComplexMatrix& g, double v, const char* suffix) {
        AffineConstraint c;
        c.g = g;
        c.label = label + suffix;
        double coeff = 0.0;
        if (scale) {
            c.target = 0.0;
            c.terms.push_back({*scale, v});
            coeff = v;
        } else {
            c.target = v;
        }
        // A constraint with zero matrix, zero target, and zero scale
        // coefficient says nothing; keep it out of the Gram system.
        if (g.frobenius_norm() > 1e-12 || std::abs(c.target) > 1e-12 || std::abs(coeff) > 1e-12)
            out.push_back(std::move(c));
    };
    push_part(h, value.real(), ":re");
    push_part(k, value.imag(), ":im");
}

inline AffineConstraint normalization_constraint(std::size_t n) {
    AffineConstraint c;
    c.g = ComplexMatrix::identity(n);
    c.target = 1.0;
    c.label = "normalization";
    return c;
}

} // namespace detail

/// Joint extension search: is there one ambient state restricting to phi1 on
/// its algebra and to phi2 on its algebra simultaneously?
inline FeasibilityCertificate cstar_extension_check(const StateFunctional& phi1,
                                                    const StateFunctional& phi2,
                                                    const SolveOptions& opt = {}) {
    detail::require_state(phi1, "cstar_extension_check/phi1");
    detail::require_state(phi2, "cstar_extension_check/phi2");
    const std::size_t n = phi1.algebra().ambient_dim();
    if (phi2.algebra().ambient_dim() != n)
        raise(ErrorKind::DomainMismatch, "states live over different ambient spaces");

    FeasibilityProblem p;
    p.ambient_dim = n;
    p.tolerance = opt.tolerance;
    p.max_iter = opt.max_iter;
    p.seed = opt.seed;
    p.constraints.push_back(detail::normalization_constraint(n));
    const StateFunctional* phis[2] = {&phi1, &phi2};
    for (int i = 0; i < 2; ++i) {
        const auto& basis = phis[i]->algebra().basis();
        for (std::size_t k = 0; k < basis.size(); ++k)
            detail::push_value_constraints(p.constraints, basis[k], (*phis[i])(basis[k]),
                                           "match[" + std::to_string(i + 1) + "][" +
                                               std::to_string(k) + "]");
    }
    FeasibilityCertificate cert = solve_feasibility(p);
    cert.method = "joint-extension";
    return cert;
}

/// Scalar-restriction search: one ambient state whose restriction to each
/// algebra is c_i phi_i with c_i in [m, 1].
inline FeasibilityCertificate scalar_restriction_check(const StateFunctional& phi1,
                                                       const StateFunctional& phi2, double m,
                                                       const SolveOptions& opt = {}) {
    detail::require_state(phi1, "scalar_restriction_check/phi1");
    detail::require_state(phi2, "scalar_restriction_check/phi2");
    if (!(m > 0.0 && m <= 1.0))
        raise(ErrorKind::BadProblem, "scalar restriction needs m in (0, 1]");
    const std::size_t n = phi1.algebra().ambient_dim();
    if (phi2.algebra().ambient_dim() != n)
        raise(ErrorKind::DomainMismatch, "states live over different ambient spaces");

    FeasibilityProblem p;
    p.ambient_dim = n;
    p.tolerance = opt.tolerance;
    p.max_iter = opt.max_iter;
    p.seed = opt.seed;
    p.scales.push_back({m, 1.0});
    p.scales.push_back({m, 1.0});
    p.constraints.push_back(detail::normalization_constraint(n));
    const StateFunctional* phis[2] = {&phi1, &phi2};
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& basis = phis[i]->algebra().basis();
        for (std::size_t k = 0; k < basis.size(); ++k)
            detail::push_value_constraints(p.constraints, basis[k], (*phis[i])(basis[k]),
                                           "scaled[" + std::to_string(i + 1) + "][" +
                                               std::to_string(k) + "]",
                                           i);
    }
    FeasibilityCertificate cert = solve_feasibility(p);
    cert.method = "thm-2.2(4)";
    return cert;
}

/// Left-kernel comparison between the scaled restriction of a candidate
/// witness and the base state, per algebra.
struct KernelMatchEntry {
    bool valid = false;       // candidate restricted to a usable state
    std::size_t dim_restricted[2] = {0, 0};
    std::size_t dim_base[2] = {0, 0};
    double distance[2] = {0.0, 0.0};
    bool matched = false;
};

struct KernelMatchReport {
    std::vector<KernelMatchEntry> entries;
    bool all_matched = false;
};

inline KernelMatchReport kernel_match_check(const StateFunctional& phi1,
                                            const StateFunctional& phi2, double m,
                                            const std::vector<FeasibilityCertificate>& candidates,
                                            double tol = 1e-6) {
    detail::require_state(phi1, "kernel_match_check/phi1");
    detail::require_state(phi2, "kernel_match_check/phi2");
    KernelMatchReport report;
    report.all_matched = true;
    const StateFunctional* base[2] = {&phi1, &phi2};

    for (const auto& cand : candidates) {
        KernelMatchEntry e;
        if (cand.status != FeasStatus::Feasible) {
            report.all_matched = false;
            report.entries.push_back(e);
            continue;
        }
        e.valid = true;
        e.matched = true;
        for (int i = 0; i < 2; ++i) {
            const double c = cand.scales.size() > static_cast<std::size_t>(i)
                                 ? cand.scales[i]
                                 : 1.0;
            if (c < m - 1e-9) {
                e.valid = false;
                e.matched = false;
                break;
            }
            StateFunctional restricted =
                make_state(base[i]->algebra_ptr(), cand.witness, /*normalize=*/true, 1e-6);
            MatrixSpan k_restricted = left_kernel(restricted);
            MatrixSpan k_base = left_kernel(*base[i]);
            e.dim_restricted[i] = k_restricted.dim();
            e.dim_base[i] = k_base.dim();
            e.distance[i] = k_restricted.projector_distance(k_base);
            if (e.dim_restricted[i] != e.dim_base[i] || e.distance[i] > tol) e.matched = false;
        }
        report.all_matched = report.all_matched && e.matched;
        report.entries.push_back(e);
    }
    return report;
}

/// Probe elements for a module: normalized basis vectors, their pairwise
/// sums, and seeded random combinations.
inline std::vector<ComplexMatrix> module_probes(const TernarySubspace& e, std::size_t extra,
                                                std::uint64_t seed) {
    std::vector<ComplexMatrix> probes;
    auto push = [&](ComplexMatrix x) {
        const double nx = module_norm(x);
        if (nx > 1e-12) probes.push_back((1.0 / nx) * x);
    };
    const auto& basis = e.basis();
    for (const auto& b : basis) push(b);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) push(basis[i] + basis[j]);
    Rng rng(seed);
    for (std::size_t k = 0; k < extra; ++k) {
        ComplexMatrix x = ComplexMatrix::zeros(e.rows(), e.cols());
        for (const auto& b : basis) x += rng.cnormal() * b;
        push(x);
    }
    return probes;
}

/// Two-sided sandwich check of a candidate state against base states over
/// module probes:  m phi_i(|x|) <= phi(|x|) <= M sqrt(phi_i(|x|^2)).
struct WindowProbeReport {
    bool pass = false;
    double min_lower_slack = 0.0; // min of phi(|x|) - m phi_i(|x|)
    double min_upper_slack = 0.0; // min of M sqrt(phi_i(|x|^2)) - phi(|x|)
    std::size_t probes_checked = 0;
    bool states_equal = true;     // candidate restriction equals base state
    double state_distance = 0.0;  // max over algebras of witness action gap
};

inline WindowProbeReport window_probe(const TernarySubspace& e1, const TernarySubspace& e2,
                                      const StateFunctional& phi1, const StateFunctional& phi2,
                                      const ComplexMatrix& candidate_witness, double m, double M,
                                      std::size_t extra_probes, std::uint64_t seed,
                                      double slack_tol = 1e-7) {
    WindowProbeReport r;
    r.min_lower_slack = 1e300;
    r.min_upper_slack = 1e300;

    const TernarySubspace* mods[2] = {&e1, &e2};
    const StateFunctional* phis[2] = {&phi1, &phi2};
    for (int i = 0; i < 2; ++i) {
        const auto probes = module_probes(*mods[i], extra_probes, seed + static_cast<std::uint64_t>(i));
        for (const auto& x : probes) {
            const ComplexMatrix ax = abs_of(x);
            const double v = trace_pair(candidate_witness, ax).real();
            const double base_abs = phis[i]->real_at(ax);
            const double base_sq = phis[i]->real_at(inner(x, x).hermitized());
            r.min_lower_slack = std::min(r.min_lower_slack, v - m * base_abs);
            r.min_upper_slack =
                std::min(r.min_upper_slack, M * std::sqrt(std::max(0.0, base_sq)) - v);
            ++r.probes_checked;
        }
        double dist = 0.0;
        for (const auto& b : phis[i]->algebra().basis())
            dist = std::max(dist,
                            std::abs(trace_pair(candidate_witness, b) - (*phis[i])(b)));
        r.state_distance = std::max(r.state_distance, dist);
    }
    r.states_equal = r.state_distance <= 1e-8;
    r.pass = r.min_lower_slack >= -slack_tol && r.min_upper_slack >= -slack_tol;
    return r;
}

enum class VerdictKind { CStarIndependent, ModuleIndependent, NotIndependent, Inconclusive };

inline const char* verdict_kind_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::CStarIndependent: return "cstar-independent";
        case VerdictKind::ModuleIndependent: return "module-independent";
        case VerdictKind::NotIndependent: return "not-independent";
        case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

/// Whether a verdict affirms independence (both flavors count).
inline bool verdict_positive(VerdictKind k) {
    return k == VerdictKind::CStarIndependent || k == VerdictKind::ModuleIndependent;
}

struct IndependenceVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    double window_m = 0.0;
    double window_M = 0.0;
    bool exact = false;
    std::string method;
    std::string detail;

    IntersectionScalarReport screen;
    bool screen_applicable = false;

    bool enumeration_exact = false;
    std::size_t state_pairs = 0;
    std::vector<FeasibilityCertificate> certificates;
    int refuting_pair = -1;
    double min_probe_slack = 0.0;

    std::optional<NormProductReport> norm_report;
};

struct CertifyOptions {
    std::size_t probes = 100;
    std::size_t state_budget = 8;
    std::uint64_t seed = defaults::solve_seed;
    SolveOptions solve;
    double slack_tol = 1e-7;
};

/// Decision procedure for module independence at a requested window (m, M):
///   1. necessary-condition screen on the intersection's inner span;
///   2. enumerate (or sample) extreme states of the two inner algebras;
///   3. scalar-restriction feasibility per state pair, plus sandwich probes
///      on every feasible witness.
/// An infeasible pair refutes the window; all-feasible with passing probes
/// certifies it, exactly when the enumeration was exact.
inline IndependenceVerdict module_independence_certify(const TernarySubspace& e1,
                                                       const TernarySubspace& e2, double m,
                                                       double M, const CertifyOptions& opt = {}) {
    if (e1.rows() != e2.rows() || e1.cols() != e2.cols())
        raise(ErrorKind::DomainMismatch, "modules live over different carriers");
    if (!(m > 0.0 && m <= 1.0) || M < m)
        raise(ErrorKind::BadProblem, "window requires 0 < m <= 1 and m <= M");

    IndependenceVerdict v;
    v.window_m = m;
    v.window_M = M;
    v.method = "thm-2.2(4)";

    v.screen = intersection_scalar_check(e1, e2);
    v.screen_applicable = v.screen.intersection_ternary;
    if (v.screen_applicable && v.screen.intersection_dim > 0 && v.screen.inner_dim > 1) {
        v.kind = VerdictKind::NotIndependent;
        v.exact = true;
        v.method = "prop-2.11";
        v.detail = "intersection inner span has dimension " + std::to_string(v.screen.inner_dim) +
                   "; necessary condition fails";
        return v;
    }

    ExtremeStateSet s1 = extreme_states(e1.inner_algebra_ptr(), opt.state_budget, opt.seed);
    ExtremeStateSet s2 = extreme_states(e2.inner_algebra_ptr(), opt.state_budget, opt.seed + 1);
    v.enumeration_exact = s1.exact && s2.exact;

    bool any_inconclusive = false;
    bool probe_failure = false;
    double min_c = 1.0;
    v.min_probe_slack = 1e300;

    for (std::size_t i = 0; i < s1.states.size(); ++i) {
        for (std::size_t j = 0; j < s2.states.size(); ++j) {
            FeasibilityCertificate cert =
                scalar_restriction_check(s1.states[i], s2.states[j], m, opt.solve);
            ++v.state_pairs;
            switch (cert.status) {
                case FeasStatus::Infeasible: {
                    v.certificates.push_back(std::move(cert));
                    v.refuting_pair = static_cast<int>(v.certificates.size()) - 1;
                    v.kind = VerdictKind::NotIndependent;
                    v.exact = v.certificates.back().exact_contradiction ||
                              v.certificates.back().gap > 1e-4;
                    v.detail = "state pair (" + std::to_string(i) + ", " + std::to_string(j) +
                               ") admits no scalar restriction at m = " + std::to_string(m);
                    return v;
                }
                case FeasStatus::Inconclusive: {
                    any_inconclusive = true;
                    v.certificates.push_back(std::move(cert));
                    break;
                }
                case FeasStatus::Feasible: {
                    WindowProbeReport probe =
                        window_probe(e1, e2, s1.states[i], s2.states[j], cert.witness, m, M,
                                     opt.probes, opt.seed + 17, opt.slack_tol);
                    v.min_probe_slack = std::min(
                        v.min_probe_slack, std::min(probe.min_lower_slack, probe.min_upper_slack));
                    if (!probe.pass) probe_failure = true;
                    for (double c : cert.scales) min_c = std::min(min_c, c);
                    v.certificates.push_back(std::move(cert));
                    break;
                }
            }
        }
    }

    if (v.state_pairs == 0) {
        v.kind = VerdictKind::Inconclusive;
        v.detail = "no state pairs available";
        return v;
    }
    if (any_inconclusive || probe_failure) {
        v.kind = VerdictKind::Inconclusive;
        v.detail = probe_failure ? "a feasible witness failed the sandwich probes"
                                 : "solver exhausted iterations on some state pair";
        return v;
    }

    v.kind = VerdictKind::ModuleIndependent;
    v.exact = v.enumeration_exact;
    v.window_m = min_c;
    v.window_M = M;
    v.detail = v.enumeration_exact ? "all extreme state pairs admit scalar restrictions"
                                   : "all sampled state pairs admit scalar restrictions";
    return v;
}

/// Norm multiplicativity over a pair of subalgebras: estimates
/// mu = min ||ab|| over unit-norm pairs. "Multiplicative" claims mu > 1 - tol;
/// "violated" claims a pair with ||ab|| < 1 - 10 tol. The band between the
/// two thresholds is deliberately neither.
struct NormMultReport {
    bool multiplicative = false;
    bool violated = false;
    bool exact = false;
    double min_value = 0.0;
    ComplexMatrix witness_a;
    ComplexMatrix witness_b;
    std::string method;
};

inline NormMultReport norm_multiplicativity_check(const StarSubalgebra& a1,
                                                  const StarSubalgebra& a2, std::size_t restarts,
                                                  std::uint64_t seed, double tol = 1e-8) {
    NormProductReport r = norm_product_minimize(a1, a2, restarts, seed);
    NormMultReport out;
    out.min_value = r.min_value;
    out.exact = r.exact;
    out.witness_a = r.witness_a;
    out.witness_b = r.witness_b;
    out.method = r.method;
    out.multiplicative = r.min_value > 1.0 - tol;
    out.violated = r.min_value < 1.0 - 10.0 * tol;
    return out;
}

/// Independence decision through the anchored quotient: build both deformed
/// images over a shared anchor and test norm multiplicativity there.
inline IndependenceVerdict ffss_criterion(const TernarySubspace& e1, const TernarySubspace& e2,
                                          const ComplexMatrix& z0, std::size_t restarts,
                                          std::uint64_t seed, double tol = 1e-8) {
    if (!e1.contains(z0) || !e2.contains(z0))
        raise(ErrorKind::AnchorNotShared, "anchor must lie in both modules");
    DeformedPtr d1 = build_deformed(e1, z0);
    DeformedPtr d2 = build_deformed(e2, z0);

    IndependenceVerdict v;
    v.method = "cor-4.2";
    NormMultReport rep =
        norm_multiplicativity_check(*d1->image_algebra(), *d2->image_algebra(), restarts, seed, tol);

    if (rep.multiplicative) {
        v.kind = VerdictKind::ModuleIndependent;
        v.exact = rep.exact;
        v.window_m = 1.0;
        v.window_M = 1.0;
        v.detail = rep.exact ? "image product norms are multiplicative (exact support route)"
                             : "no multiplicativity violation found (heuristic search)";
    } else if (rep.violated) {
        v.kind = VerdictKind::NotIndependent;
        v.exact = rep.min_value < 1.0 - 1e-6;
        v.window_m = 0.0;
        v.window_M = 0.0;
        v.detail = "image product norm drops to " + std::to_string(rep.min_value) +
                   " on a unit pair";
    } else {
        v.kind = VerdictKind::Inconclusive;
        v.detail = "norm product minimum " + std::to_string(rep.min_value) +
                   " sits between the violation and multiplicativity thresholds";
    }
    v.norm_report = NormProductReport{rep.min_value, rep.exact, rep.witness_a, rep.witness_b,
                                      rep.method, restarts};
    return v;
}

/// One-state sufficient criterion: search for an ambient state phi with
/// phi(|x_i|) = phi(|z_i|) on probes and m <= phi(|z_i|) <= M. The anchors
/// must act as units through their absolute values.
struct SingleStateEntry {
    FeasibilityCertificate cert;
    std::size_t probe1 = 0;
    std::size_t probe2 = 0;
};

struct SingleStateReport {
    std::vector<SingleStateEntry> entries;
    FeasibilityCertificate joint; // all probe constraints in one system
    bool all_feasible = false;
    int refuting_entry = -1;
};

inline SingleStateReport single_state_criterion(const TernarySubspace& e1,
                                                const TernarySubspace& e2, const ComplexMatrix& z1,
                                                const ComplexMatrix& z2, double m, double M,
                                                std::size_t probes, std::uint64_t seed,
                                                const SolveOptions& opt = {}) {
    if (!e1.contains(z1) || !e2.contains(z2))
        raise(ErrorKind::AnchorNotInModule, "anchors must lie in their modules");
    if (!(0.0 < m && m <= M)) raise(ErrorKind::BadProblem, "window requires 0 < m <= M");
    const std::size_t n = e1.cols();
    if (e2.cols() != n) raise(ErrorKind::DomainMismatch, "modules over different ambients");

    const TernarySubspace* mods[2] = {&e1, &e2};
    const ComplexMatrix* anchors[2] = {&z1, &z2};
    ComplexMatrix abs_z[2];
    for (int i = 0; i < 2; ++i) {
        UnitInnerReport u = verify_unit_inner(*anchors[i], 1e-8, &mods[i]->inner_algebra());
        if (!u.abs_acts_as_unit.value_or(false))
            raise(ErrorKind::AnchorNotUnit,
                  "|z| fails to act as the unit of its inner algebra (residual " +
                      std::to_string(u.unit_action_residual) + ")");
        abs_z[i] = abs_of(*anchors[i]);
    }

    const auto probes1 = module_probes(e1, probes, seed);
    const auto probes2 = module_probes(e2, probes, seed + 1);

    auto box_constraints = [&](FeasibilityProblem& p) {
        // m <= tr(rho |z_i|) <= M through slack variables.
        for (int i = 0; i < 2; ++i) {
            const std::size_t lo_slack = p.scales.size();
            p.scales.push_back({0.0, M - m + 1.0});
            AffineConstraint lo;
            lo.g = abs_z[i];
            lo.target = m;
            lo.terms.push_back({lo_slack, 1.0});
            lo.label = "anchor-lo[" + std::to_string(i + 1) + "]";
            p.constraints.push_back(lo);

            const std::size_t hi_slack = p.scales.size();
            p.scales.push_back({0.0, M + 1.0});
            AffineConstraint hi;
            hi.g = abs_z[i];
            hi.target = M;
            hi.terms.push_back({hi_slack, -1.0});
            hi.label = "anchor-hi[" + std::to_string(i + 1) + "]";
            p.constraints.push_back(hi);
        }
    };

    auto equality_constraint = [&](FeasibilityProblem& p, const ComplexMatrix& x, int which,
                                   const std::string& label) {
        AffineConstraint c;
        c.g = (abs_of(x) - abs_z[which]).hermitized();
        c.target = 0.0;
        c.label = label;
        if (c.g.frobenius_norm() > 1e-12) p.constraints.push_back(c);
    };

    SingleStateReport report;
    report.all_feasible = true;

    for (std::size_t i = 0; i < probes1.size(); ++i) {
        for (std::size_t j = 0; j < probes2.size(); ++j) {
            FeasibilityProblem p;
            p.ambient_dim = n;
            p.tolerance = opt.tolerance;
            p.max_iter = opt.max_iter;
            p.seed = opt.seed;
            p.constraints.push_back(detail::normalization_constraint(n));
            equality_constraint(p, probes1[i], 0, "match1");
            equality_constraint(p, probes2[j], 1, "match2");
            box_constraints(p);
            SingleStateEntry entry;
            entry.cert = solve_feasibility(p);
            entry.cert.method = "thm-3.3";
            entry.probe1 = i;
            entry.probe2 = j;
            if (entry.cert.status != FeasStatus::Feasible) {
                report.all_feasible = false;
                if (entry.cert.status == FeasStatus::Infeasible && report.refuting_entry < 0)
                    report.refuting_entry = static_cast<int>(report.entries.size());
            }
            report.entries.push_back(std::move(entry));
        }
    }

    // The joint system over every probe at once is the stronger finite
    // relaxation of the criterion; report it alongside the pairs.
    FeasibilityProblem joint;
    joint.ambient_dim = n;
    joint.tolerance = opt.tolerance;
    joint.max_iter = opt.max_iter;
    joint.seed = opt.seed;
    joint.constraints.push_back(detail::normalization_constraint(n));
    for (std::size_t i = 0; i < probes1.size(); ++i)
        equality_constraint(joint, probes1[i], 0, "joint1[" + std::to_string(i) + "]");
    for (std::size_t j = 0; j < probes2.size(); ++j)
        equality_constraint(joint, probes2[j], 1, "joint2[" + std::to_string(j) + "]");
    box_constraints(joint);
    report.joint = solve_feasibility(joint);
    report.joint.method = "thm-3.3";
    report.all_feasible = report.all_feasible && report.joint.status == FeasStatus::Feasible;
    return report;
}

/// Two-state sufficient criterion: search a dominating state per side, then
/// validate the averaged combination against the halved window.
struct TwoStateReport {
    FeasibilityCertificate search1;
    FeasibilityCertificate search2;
    WindowProbeReport combined;
    bool satisfied = false;
};

inline TwoStateReport two_state_criterion(const TernarySubspace& e1, const TernarySubspace& e2,
                                          const ComplexMatrix& z1, const ComplexMatrix& z2,
                                          double m_prime, double M_prime, std::size_t probes,
                                          std::uint64_t seed, const SolveOptions& opt = {}) {
    if (!e1.contains(z1) || !e2.contains(z2))
        raise(ErrorKind::AnchorNotInModule, "anchors must lie in their modules");
    if (!(0.0 < m_prime && m_prime <= M_prime))
        raise(ErrorKind::BadProblem, "window requires 0 < m' <= M'");
    const std::size_t n = e1.cols();
    if (e2.cols() != n) raise(ErrorKind::DomainMismatch, "modules over different ambients");

    const TernarySubspace* mods[2] = {&e1, &e2};
    const ComplexMatrix* anchors[2] = {&z1, &z2};
    for (int i = 0; i < 2; ++i) {
        const ComplexMatrix g = inner(*anchors[i], *anchors[i]).hermitized();
        double worst = 0.0;
        for (const auto& b : mods[i]->inner_algebra().basis())
            worst = std::max(worst, (g * b - b).frobenius_norm());
        if (worst > 1e-8)
            raise(ErrorKind::AnchorNotUnit,
                  "|z|^2 fails to act as the unit of its inner algebra (residual " +
                      std::to_string(worst) + ")");
    }

    StateFunctional base1 = norming_state(e1.inner_algebra_ptr(),
                                          inner(z1, z1).hermitized());
    StateFunctional base2 = norming_state(e2.inner_algebra_ptr(),
                                          inner(z2, z2).hermitized());

    const auto probes1 = module_probes(e1, probes, seed);
    const auto probes2 = module_probes(e2, probes, seed + 1);

    // Searches one dominating state: own-module sandwich plus the cross
    // upper bound against the other module's base state.
    auto search = [&](const std::vector<ComplexMatrix>& own, const StateFunctional& own_base,
                      const std::vector<ComplexMatrix>& other, const StateFunctional& other_base) {
        FeasibilityProblem p;
        p.ambient_dim = n;
        p.tolerance = opt.tolerance;
        p.max_iter = opt.max_iter;
        p.seed = opt.seed;
        p.constraints.push_back(detail::normalization_constraint(n));
        const double big = M_prime + 2.0;
        for (std::size_t k = 0; k < own.size(); ++k) {
            const ComplexMatrix ax = abs_of(own[k]);
            const double lo_t = m_prime * own_base.real_at(ax);
            const double hi_t =
                M_prime * std::sqrt(std::max(0.0, own_base.real_at(inner(own[k], own[k]).hermitized())));
            AffineConstraint lo;
            lo.g = ax;
            lo.target = lo_t;
            lo.terms.push_back({p.scales.size(), 1.0});
            lo.label = "own-lo[" + std::to_string(k) + "]";
            p.scales.push_back({0.0, big});
            p.constraints.push_back(lo);
            AffineConstraint hi;
            hi.g = ax;
            hi.target = hi_t;
            hi.terms.push_back({p.scales.size(), -1.0});
            hi.label = "own-hi[" + std::to_string(k) + "]";
            p.scales.push_back({0.0, big});
            p.constraints.push_back(hi);
        }
        for (std::size_t k = 0; k < other.size(); ++k) {
            const ComplexMatrix ax = abs_of(other[k]);
            const double hi_t = M_prime *
                std::sqrt(std::max(0.0, other_base.real_at(inner(other[k], other[k]).hermitized())));
            AffineConstraint hi;
            hi.g = ax;
            hi.target = hi_t;
            hi.terms.push_back({p.scales.size(), -1.0});
            hi.label = "cross-hi[" + std::to_string(k) + "]";
            p.scales.push_back({0.0, big});
            p.constraints.push_back(hi);
        }
        FeasibilityCertificate cert = solve_feasibility(p);
        cert.method = "thm-3.1";
        return cert;
    };

    TwoStateReport report;
    report.search1 = search(probes1, base1, probes2, base2);
    report.search2 = search(probes2, base2, probes1, base1);

    if (report.search1.status == FeasStatus::Feasible &&
        report.search2.status == FeasStatus::Feasible) {
        ComplexMatrix combined = 0.5 * (report.search1.witness + report.search2.witness);
        report.combined = window_probe(e1, e2, base1, base2, combined, 0.5 * m_prime, M_prime,
                                       probes, seed + 11);
        report.satisfied = report.combined.pass;
    }
    return report;
}

/// Verifies the definiteness-based chain at a concrete state and norm-one
/// module elements: scaled definiteness at |x_i| and
/// m <= phi(|x_1|) = phi(|x_1||x_2|) = phi(|x_2|) <= M.
struct DefiniteVerifyReport {
    bool definite[2] = {false, false};
    double definiteness_gap[2] = {0.0, 0.0};
    double value1 = 0.0;
    double value12 = 0.0;
    double value2 = 0.0;
    bool chain_holds = false;
    bool pass = false;
};

inline DefiniteVerifyReport definite_criterion_verify(const TernarySubspace& e1,
                                                      const TernarySubspace& e2,
                                                      const ComplexMatrix& z1,
                                                      const ComplexMatrix& z2,
                                                      const ComplexMatrix& x1,
                                                      const ComplexMatrix& x2,
                                                      const StateFunctional& phi, double m,
                                                      double M, double tol = 1e-8) {
    if (!e1.contains(x1) || !e2.contains(x2))
        raise(ErrorKind::DomainMismatch, "probe elements must lie in their modules");
    if (std::abs(module_norm(x1) - 1.0) > 1e-8 || std::abs(module_norm(x2) - 1.0) > 1e-8)
        raise(ErrorKind::NotUnitVector, "probe elements must have module norm one");
    detail::require_state(phi, "definite_criterion_verify/phi");

    DefiniteVerifyReport r;
    const ComplexMatrix* anchors[2] = {&z1, &z2};
    const ComplexMatrix* xs[2] = {&x1, &x2};
    for (int i = 0; i < 2; ++i) {
        const double pz = phi.real_at(abs_of(*anchors[i]));
        if (pz < 1e-12) raise(ErrorKind::DivisionByZero, "phi(|z_i|) vanishes");
        const ComplexMatrix ax = abs_of(*xs[i]);
        const double px = phi.real_at(ax);
        const double px2 = phi.real_at((ax * ax).hermitized());
        // Definiteness of phi / phi(|z_i|) at |x_i|:
        // (phi(|x|)/phi(|z|))^2 = phi(|x|^2)/phi(|z|).
        r.definiteness_gap[i] = px2 / pz - (px / pz) * (px / pz);
        r.definite[i] = std::abs(r.definiteness_gap[i]) <= tol;
    }

    r.value1 = phi.real_at(abs_of(x1));
    r.value2 = phi.real_at(abs_of(x2));
    r.value12 = phi.real_at(abs_of(x1) * abs_of(x2));
    const bool equal = std::abs(r.value1 - r.value12) <= tol && std::abs(r.value2 - r.value12) <= tol;
    r.chain_holds = equal && r.value1 >= m - tol && r.value2 <= M + tol;
    r.pass = r.definite[0] && r.definite[1] && r.chain_holds;
    return r;
}

/// Quasi-extension probe: can any ambient vector state annihilate the
/// algebra? Reports the search outcome and witness.
struct QepReport {
    bool holds = false;
    bool exact = false;
    double min_value = 0.0;
    ComplexMatrix witness;
    std::string method;
};

inline QepReport qep_check(const StarSubalgebra& b, std::size_t restarts, std::uint64_t seed,
                           const StarSubalgebra* ambient = nullptr) {
    if (ambient != nullptr && !ambient->is_full())
        raise(ErrorKind::AmbientNotFull, "annihilation search is relative to the full matrix algebra");
    AnnihilationReport r = annihilation_search(b, restarts, seed);
    QepReport out;
    out.holds = !r.annihilator_found;
    out.exact = r.exact;
    out.min_value = r.min_value;
    out.witness = r.witness;
    out.method = r.method;
    return out;
}

/// Zero-divisor probe across a pair of algebras: looks for unit-norm a, b
/// with ab = 0.
struct SIndependenceReport {
    bool violation_found = false;
    bool exact = false;
    double min_value = 0.0;
    ComplexMatrix witness_a;
    ComplexMatrix witness_b;
    std::string method;
};

inline SIndependenceReport s_independence_probe(const StarSubalgebra& a1, const StarSubalgebra& a2,
                                                std::size_t restarts, std::uint64_t seed,
                                                double tol = 1e-8) {
    NormProductReport r = norm_product_minimize(a1, a2, restarts, seed);
    SIndependenceReport out;
    out.min_value = r.min_value;
    out.exact = r.exact;
    out.witness_a = r.witness_a;
    out.witness_b = r.witness_b;
    out.method = r.method;
    out.violation_found = r.min_value < tol;
    return out;
}

} // namespace starmod
