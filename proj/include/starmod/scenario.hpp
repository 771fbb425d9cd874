#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "starmod/rng.hpp"
#include "starmod/serialize.hpp"

namespace starmod {

inline constexpr const char* tool_version = "0.1.0";

namespace defaults {
inline constexpr std::size_t solve_restarts = 64;
} // namespace defaults

struct RunOptions {
    double tolerance = defaults::solve_tol;
    std::size_t max_iter = defaults::solve_max_iter;
    std::size_t restarts = defaults::solve_restarts;
    std::uint64_t seed = defaults::solve_seed;
};

struct RunOverrides {
    std::optional<double> tolerance;
    std::optional<std::size_t> max_iter;
    std::optional<std::size_t> restarts;
    std::optional<std::uint64_t> seed;
};

struct CheckSpec {
    std::string op;
    std::string label;
    json params;
    json expect;
};

struct ScenarioData {
    std::string name;
    std::string description;
    std::map<std::string, ComplexMatrix> matrices;
    std::map<std::string, TernarySubspace> modules;
    std::map<std::string, AlgebraPtr> algebras;
    std::map<std::string, StateFunctional> states;
    std::vector<CheckSpec> checks;
    RunOptions options;
};

// ---------------------------------------------------------------------------
// Loading and validation

namespace detail {

struct ParamReq {
    const char* key;
    enum Kind { Matrix, Module, Algebra, State, Number } kind;
    bool required = true;
};

inline const std::map<std::string, std::vector<ParamReq>>& check_schema() {
    using K = ParamReq::Kind;
    static const std::map<std::string, std::vector<ParamReq>> schema = {
        {"cstar-extension", {{"state1", K::State}, {"state2", K::State}}},
        {"scalar-restriction", {{"state1", K::State}, {"state2", K::State}, {"m", K::Number}}},
        {"kernel-match", {{"state1", K::State}, {"state2", K::State}, {"m", K::Number}}},
        {"certify",
         {{"module1", K::Module}, {"module2", K::Module}, {"m", K::Number}, {"M", K::Number}}},
        {"ffss", {{"module1", K::Module}, {"module2", K::Module}, {"anchor", K::Matrix}}},
        {"single-state",
         {{"module1", K::Module},
          {"module2", K::Module},
          {"anchor1", K::Matrix},
          {"anchor2", K::Matrix},
          {"m", K::Number},
          {"M", K::Number}}},
        {"two-state",
         {{"module1", K::Module},
          {"module2", K::Module},
          {"anchor1", K::Matrix},
          {"anchor2", K::Matrix},
          {"m_prime", K::Number},
          {"M_prime", K::Number}}},
        {"definite-verify",
         {{"module1", K::Module},
          {"module2", K::Module},
          {"anchor1", K::Matrix},
          {"anchor2", K::Matrix},
          {"x1", K::Matrix},
          {"x2", K::Matrix},
          {"state", K::State},
          {"m", K::Number},
          {"M", K::Number}}},
        {"qep", {{"algebra", K::Algebra}}},
        {"s-independence", {{"algebra1", K::Algebra}, {"algebra2", K::Algebra}}},
        {"norm-multiplicativity", {{"algebra1", K::Algebra}, {"algebra2", K::Algebra}}},
        {"intersection-screen", {{"module1", K::Module}, {"module2", K::Module}}},
        {"window-probe",
         {{"module1", K::Module},
          {"module2", K::Module},
          {"state1", K::State},
          {"state2", K::State},
          {"witness", K::Matrix},
          {"m", K::Number},
          {"M", K::Number}}},
        {"unit-inner", {{"matrix", K::Matrix}, {"algebra", K::Algebra, false}}},
        {"cross-inner", {{"module1", K::Module}, {"module2", K::Module}}},
        {"module-closure", {{"module", K::Module}}},
        {"state-inequalities", {{"state", K::State}, {"a", K::Matrix}, {"b", K::Matrix}}},
    };
    return schema;
}

[[noreturn]] inline void bad_scenario(const std::string& what) {
    raise(ErrorKind::ValidationError, "scenario: " + what);
}

inline void validate_check(const ScenarioData& sc, const CheckSpec& check, std::size_t index) {
    const auto& schema = check_schema();
    auto it = schema.find(check.op);
    if (it == schema.end()) {
        std::string ops;
        for (const auto& [name, reqs] : schema) ops += (ops.empty() ? "" : ", ") + name;
        bad_scenario("check " + std::to_string(index) + ": unknown op '" + check.op +
                     "' (known: " + ops + ")");
    }
    for (const auto& req : it->second) {
        if (!check.params.contains(req.key)) {
            if (req.required)
                bad_scenario("check " + std::to_string(index) + " (" + check.op +
                             "): missing parameter '" + req.key + "'");
            continue;
        }
        const json& v = check.params.at(req.key);
        if (req.kind == ParamReq::Number) {
            if (!v.is_number())
                bad_scenario("check " + std::to_string(index) + " (" + check.op + "): '" +
                             req.key + "' must be a number");
            continue;
        }
        if (!v.is_string())
            bad_scenario("check " + std::to_string(index) + " (" + check.op + "): '" + req.key +
                         "' must name an object");
        const std::string name = v.get<std::string>();
        const bool found = (req.kind == ParamReq::Matrix && sc.matrices.count(name)) ||
                           (req.kind == ParamReq::Module && sc.modules.count(name)) ||
                           (req.kind == ParamReq::Algebra && sc.algebras.count(name)) ||
                           (req.kind == ParamReq::State && sc.states.count(name));
        if (!found)
            bad_scenario("check " + std::to_string(index) + " (" + check.op + "): '" + req.key +
                         "' references unknown object '" + name + "'");
    }
}

inline const ComplexMatrix& named_matrix(const ScenarioData& sc, const json& params,
                                         const char* key) {
    return sc.matrices.at(params.at(key).get<std::string>());
}
inline const TernarySubspace& named_module(const ScenarioData& sc, const json& params,
                                           const char* key) {
    return sc.modules.at(params.at(key).get<std::string>());
}
inline const AlgebraPtr& named_algebra(const ScenarioData& sc, const json& params,
                                       const char* key) {
    return sc.algebras.at(params.at(key).get<std::string>());
}
inline const StateFunctional& named_state(const ScenarioData& sc, const json& params,
                                          const char* key) {
    return sc.states.at(params.at(key).get<std::string>());
}

} // namespace detail

inline RunOptions effective_options(const json& doc, const RunOverrides& ov) {
    RunOptions opt;
    if (doc.contains("defaults")) {
        const json& d = doc.at("defaults");
        if (d.contains("tolerance")) opt.tolerance = d.at("tolerance").get<double>();
        if (d.contains("max_iter")) opt.max_iter = d.at("max_iter").get<std::size_t>();
        if (d.contains("restarts")) opt.restarts = d.at("restarts").get<std::size_t>();
        if (d.contains("seed")) opt.seed = d.at("seed").get<std::uint64_t>();
    }
    if (ov.tolerance) opt.tolerance = *ov.tolerance;
    if (ov.max_iter) opt.max_iter = *ov.max_iter;
    if (ov.restarts) opt.restarts = *ov.restarts;
    if (ov.seed) opt.seed = *ov.seed;
    if (opt.tolerance <= 0.0) detail::bad_scenario("tolerance must be positive");
    return opt;
}

/// Parses and validates a scenario document: every referenced object must
/// resolve, every check op must exist with well-typed parameters.
inline ScenarioData load_scenario(const json& doc, const RunOverrides& ov = {}) {
    if (!doc.is_object()) detail::bad_scenario("document must be a JSON object");
    ScenarioData sc;
    sc.name = doc.value("name", std::string{"unnamed"});
    sc.description = doc.value("description", std::string{});
    sc.options = effective_options(doc, ov);

    if (doc.contains("matrices")) {
        if (!doc.at("matrices").is_object()) detail::bad_scenario("'matrices' must be an object");
        for (const auto& [name, value] : doc.at("matrices").items()) {
            try {
                sc.matrices.emplace(name, matrix_from_json(value));
            } catch (const Error& e) {
                detail::bad_scenario("matrix '" + name + "': " + e.what());
            }
        }
    }

    auto gather = [&](const json& spec, const char* owner,
                      const std::string& name) -> std::vector<ComplexMatrix> {
        if (!spec.contains("generators") || !spec.at("generators").is_array() ||
            spec.at("generators").empty())
            detail::bad_scenario(std::string(owner) + " '" + name +
                                 "' needs a non-empty 'generators' array");
        std::vector<ComplexMatrix> gens;
        for (const auto& g : spec.at("generators")) {
            if (!g.is_string())
                detail::bad_scenario(std::string(owner) + " '" + name +
                                     "': generators must be matrix names");
            auto it = sc.matrices.find(g.get<std::string>());
            if (it == sc.matrices.end())
                detail::bad_scenario(std::string(owner) + " '" + name +
                                     "' references unknown matrix '" + g.get<std::string>() + "'");
            gens.push_back(it->second);
        }
        return gens;
    };

    if (doc.contains("algebras")) {
        for (const auto& [name, spec] : doc.at("algebras").items()) {
            auto gens = gather(spec, "algebra", name);
            if (!gens.front().is_square())
                detail::bad_scenario("algebra '" + name + "': generators must be square");
            const bool adjoin = spec.value("adjoin_unit", false);
            try {
                sc.algebras.emplace(
                    name, share(generated_subalgebra(gens.front().rows(), gens, adjoin)));
            } catch (const Error& e) {
                detail::bad_scenario("algebra '" + name + "': " + e.what());
            }
        }
    }

    if (doc.contains("modules")) {
        for (const auto& [name, spec] : doc.at("modules").items()) {
            auto gens = gather(spec, "module", name);
            try {
                sc.modules.emplace(name, ternary_closure(gens.front().rows(), gens.front().cols(),
                                                         gens));
            } catch (const Error& e) {
                detail::bad_scenario("module '" + name + "': " + e.what());
            }
        }
    }

    if (doc.contains("states")) {
        for (const auto& [name, spec] : doc.at("states").items()) {
            if (!spec.contains("algebra") || !spec.at("algebra").is_string())
                detail::bad_scenario("state '" + name + "' needs an 'algebra' name");
            auto ait = sc.algebras.find(spec.at("algebra").get<std::string>());
            if (ait == sc.algebras.end())
                detail::bad_scenario("state '" + name + "' references unknown algebra '" +
                                     spec.at("algebra").get<std::string>() + "'");
            const bool has_witness = spec.contains("witness");
            const bool has_vector = spec.contains("vector");
            if (has_witness == has_vector)
                detail::bad_scenario("state '" + name +
                                     "' needs exactly one of 'witness' or 'vector'");
            const char* key = has_witness ? "witness" : "vector";
            auto mit = sc.matrices.find(spec.at(key).get<std::string>());
            if (mit == sc.matrices.end())
                detail::bad_scenario("state '" + name + "' references unknown matrix '" +
                                     spec.at(key).get<std::string>() + "'");
            try {
                if (has_witness)
                    sc.states.emplace(name, make_state(ait->second, mit->second,
                                                       spec.value("normalize", false)));
                else
                    sc.states.emplace(name, vector_state(ait->second, mit->second));
            } catch (const Error& e) {
                detail::bad_scenario("state '" + name + "': " + e.what());
            }
        }
    }

    if (doc.contains("checks")) {
        if (!doc.at("checks").is_array()) detail::bad_scenario("'checks' must be an array");
        for (const auto& c : doc.at("checks")) {
            CheckSpec spec;
            if (!c.is_object() || !c.contains("op") || !c.at("op").is_string())
                detail::bad_scenario("each check needs an 'op' string");
            spec.op = c.at("op").get<std::string>();
            spec.label = c.value("label", spec.op);
            spec.params = c.value("params", json::object());
            spec.expect = c.value("expect", json::object());
            sc.checks.push_back(std::move(spec));
        }
    }

    // Regression expectations may also arrive as a separate indexed list.
    if (doc.contains("expectations")) {
        for (const auto& e : doc.at("expectations")) {
            if (!e.is_object() || !e.contains("check"))
                detail::bad_scenario("each expectation needs a 'check' index");
            const std::size_t idx = e.at("check").get<std::size_t>();
            if (idx >= sc.checks.size())
                detail::bad_scenario("expectation index " + std::to_string(idx) +
                                     " out of range");
            if (e.contains("expect"))
                for (const auto& [k, v] : e.at("expect").items()) sc.checks[idx].expect[k] = v;
            if (e.contains("tolerance")) sc.checks[idx].expect["expect_tol"] = e.at("tolerance");
        }
    }

    for (std::size_t i = 0; i < sc.checks.size(); ++i)
        detail::validate_check(sc, sc.checks[i], i);
    return sc;
}

// ---------------------------------------------------------------------------
// Expectation matching

namespace detail {

/// Looks up a dotted path ("joint.status") inside a JSON object.
inline const json* json_at_path(const json& j, const std::string& path) {
    const json* cur = &j;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &cur->at(key);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return cur;
}

inline bool approx_match(const json& expected, const json& actual, double tol,
                         std::string& why) {
    if (expected.is_number() && actual.is_number()) {
        const double e = expected.get<double>(), a = actual.get<double>();
        if (std::abs(e - a) <= tol) return true;
        why = "expected " + expected.dump() + ", got " + actual.dump();
        return false;
    }
    if (expected.is_array() && actual.is_array()) {
        if (expected.size() != actual.size()) {
            why = "array size " + std::to_string(actual.size()) + ", expected " +
                  std::to_string(expected.size());
            return false;
        }
        for (std::size_t i = 0; i < expected.size(); ++i)
            if (!approx_match(expected[i], actual[i], tol, why)) {
                why = "[" + std::to_string(i) + "] " + why;
                return false;
            }
        return true;
    }
    if (expected.is_object() && actual.is_object()) {
        for (const auto& [k, v] : expected.items()) {
            if (!actual.contains(k)) {
                why = "missing key '" + k + "'";
                return false;
            }
            if (!approx_match(v, actual.at(k), tol, why)) {
                why = k + ": " + why;
                return false;
            }
        }
        return true;
    }
    if (expected == actual) return true;
    why = "expected " + expected.dump() + ", got " + actual.dump();
    return false;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Check execution

struct CheckResult {
    std::string op;
    std::string label;
    bool ok = false;
    bool errored = false;
    std::vector<std::string> failures;
    json result;
    json expect;
    double wall_ms = 0.0;
};

struct RunReport {
    std::string scenario;
    std::string description;
    RunOptions options;
    std::vector<CheckResult> checks;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t errored = 0;

    bool ok() const noexcept { return failed == 0 && errored == 0; }

    json to_json(bool include_timing = false) const {
        json j;
        j["version"] = tool_version;
        j["scenario"] = scenario;
        j["description"] = description;
        j["options"] = {{"tolerance", options.tolerance},
                        {"max_iter", options.max_iter},
                        {"restarts", options.restarts},
                        {"seed", options.seed}};
        json arr = json::array();
        for (const auto& c : checks) {
            json jc;
            jc["op"] = c.op;
            jc["label"] = c.label;
            jc["ok"] = c.ok;
            jc["errored"] = c.errored;
            if (!c.failures.empty()) jc["failures"] = c.failures;
            if (!c.expect.empty()) jc["expect"] = c.expect;
            jc["result"] = c.result;
            if (include_timing) jc["wall_ms"] = c.wall_ms;
            arr.push_back(std::move(jc));
        }
        j["checks"] = std::move(arr);
        j["passed"] = passed;
        j["failed"] = failed;
        j["errored"] = errored;
        j["ok"] = ok();
        return j;
    }

    std::string text_summary() const {
        std::ostringstream out;
        out << "scenario " << scenario << " (seed " << options.seed << ", tol "
            << options.tolerance << ")\n";
        for (const auto& c : checks) {
            out << "  [" << (c.ok ? " ok " : (c.errored ? " err" : "FAIL")) << "] " << c.label;
            if (!c.failures.empty()) {
                out << ": " << c.failures.front();
                for (std::size_t i = 1; i < c.failures.size(); ++i)
                    out << "; " << c.failures[i];
            }
            out << "\n";
        }
        out << "  passed " << passed << ", failed " << failed << ", errored " << errored << "\n";
        return out.str();
    }
};

namespace detail {

inline json run_check(const ScenarioData& sc, const RunOptions& opt, const CheckSpec& check) {
    const json& p = check.params;
    SolveOptions solve{opt.tolerance, opt.max_iter, opt.seed};
    const std::size_t restarts = p.value("restarts", opt.restarts);
    const std::size_t probes = p.value("probes", std::size_t{100});

    if (check.op == "cstar-extension")
        return to_json(cstar_extension_check(named_state(sc, p, "state1"),
                                             named_state(sc, p, "state2"), solve));

    if (check.op == "scalar-restriction")
        return to_json(scalar_restriction_check(named_state(sc, p, "state1"),
                                                named_state(sc, p, "state2"),
                                                p.at("m").get<double>(), solve));

    if (check.op == "kernel-match") {
        const auto& phi1 = named_state(sc, p, "state1");
        const auto& phi2 = named_state(sc, p, "state2");
        const double m = p.at("m").get<double>();
        FeasibilityCertificate cert = scalar_restriction_check(phi1, phi2, m, solve);
        KernelMatchReport rep = kernel_match_check(phi1, phi2, m, {cert});
        json j = to_json(rep);
        j["certificate"] = to_json(cert);
        j["status"] = feas_status_name(cert.status);
        return j;
    }

    if (check.op == "certify") {
        CertifyOptions copt;
        copt.probes = probes;
        copt.state_budget = p.value("state_budget", std::size_t{8});
        copt.seed = opt.seed;
        copt.solve = solve;
        return to_json(module_independence_certify(named_module(sc, p, "module1"),
                                                   named_module(sc, p, "module2"),
                                                   p.at("m").get<double>(),
                                                   p.at("M").get<double>(), copt));
    }

    if (check.op == "ffss")
        return to_json(ffss_criterion(named_module(sc, p, "module1"),
                                      named_module(sc, p, "module2"),
                                      named_matrix(sc, p, "anchor"), restarts, opt.seed,
                                      opt.tolerance));

    if (check.op == "single-state")
        return to_json(single_state_criterion(
            named_module(sc, p, "module1"), named_module(sc, p, "module2"),
            named_matrix(sc, p, "anchor1"), named_matrix(sc, p, "anchor2"),
            p.at("m").get<double>(), p.at("M").get<double>(), probes, opt.seed, solve));

    if (check.op == "two-state")
        return to_json(two_state_criterion(
            named_module(sc, p, "module1"), named_module(sc, p, "module2"),
            named_matrix(sc, p, "anchor1"), named_matrix(sc, p, "anchor2"),
            p.at("m_prime").get<double>(), p.at("M_prime").get<double>(), probes, opt.seed,
            solve));

    if (check.op == "definite-verify")
        return to_json(definite_criterion_verify(
            named_module(sc, p, "module1"), named_module(sc, p, "module2"),
            named_matrix(sc, p, "anchor1"), named_matrix(sc, p, "anchor2"),
            named_matrix(sc, p, "x1"), named_matrix(sc, p, "x2"), named_state(sc, p, "state"),
            p.at("m").get<double>(), p.at("M").get<double>()));

    if (check.op == "qep")
        return to_json(qep_check(*named_algebra(sc, p, "algebra"), restarts, opt.seed));

    if (check.op == "s-independence")
        return to_json(s_independence_probe(*named_algebra(sc, p, "algebra1"),
                                            *named_algebra(sc, p, "algebra2"), restarts,
                                            opt.seed));

    if (check.op == "norm-multiplicativity")
        return to_json(norm_multiplicativity_check(*named_algebra(sc, p, "algebra1"),
                                                   *named_algebra(sc, p, "algebra2"), restarts,
                                                   opt.seed, opt.tolerance));

    if (check.op == "intersection-screen")
        return to_json(intersection_scalar_check(named_module(sc, p, "module1"),
                                                 named_module(sc, p, "module2")));

    if (check.op == "window-probe")
        return to_json(window_probe(named_module(sc, p, "module1"),
                                    named_module(sc, p, "module2"),
                                    named_state(sc, p, "state1"), named_state(sc, p, "state2"),
                                    named_matrix(sc, p, "witness"), p.at("m").get<double>(),
                                    p.at("M").get<double>(), probes, opt.seed));

    if (check.op == "unit-inner") {
        const StarSubalgebra* alg = nullptr;
        if (p.contains("algebra")) alg = named_algebra(sc, p, "algebra").get();
        return to_json(verify_unit_inner(named_matrix(sc, p, "matrix"), 1e-9, alg));
    }

    if (check.op == "cross-inner") {
        const auto& m1 = named_module(sc, p, "module1");
        const auto& m2 = named_module(sc, p, "module2");
        double max_cross = 0.0;
        for (const auto& a : m1.basis())
            for (const auto& b : m2.basis())
                max_cross = std::max(max_cross, inner(a, b).frobenius_norm());
        double lo = 1e300, hi = 0.0;
        for (const auto& a : m1.basis()) {
            lo = std::min(lo, module_norm(a));
            hi = std::max(hi, module_norm(a));
        }
        for (const auto& b : m2.basis()) {
            lo = std::min(lo, module_norm(b));
            hi = std::max(hi, module_norm(b));
        }
        json j;
        j["max_cross_inner"] = max_cross;
        j["min_norm"] = lo;
        j["max_norm"] = hi;
        return j;
    }

    if (check.op == "module-closure") {
        const auto& m = named_module(sc, p, "module");
        json j;
        j["rows"] = m.rows();
        j["cols"] = m.cols();
        j["dim"] = m.dim();
        j["inner_dim"] = m.inner_algebra().dim();
        j["ternary_defect"] = m.ternary_defect();
        return j;
    }

    if (check.op == "state-inequalities") {
        StateInequalityReport r = check_state_inequalities(
            named_state(sc, p, "state"), named_matrix(sc, p, "a"), named_matrix(sc, p, "b"));
        json j;
        j["cauchy_schwarz"] = r.cauchy_schwarz;
        j["kadison"] = r.kadison;
        j["choi"] = r.choi;
        j["norm_abs_bound"] = r.norm_abs_bound;
        j["min_slack"] = r.min_slack();
        return j;
    }

    raise(ErrorKind::CheckError, "unhandled op '" + check.op + "'");
}

} // namespace detail

/// Executes every check of a loaded scenario in order, comparing results
/// against embedded expectations. Check errors are recorded per check and the
/// run continues.
inline RunReport run_scenario(const ScenarioData& sc) {
    RunReport report;
    report.scenario = sc.name;
    report.description = sc.description;
    report.options = sc.options;

    for (const auto& check : sc.checks) {
        CheckResult r;
        r.op = check.op;
        r.label = check.label;
        r.expect = check.expect;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.result = detail::run_check(sc, sc.options, check);
            const double tol = check.expect.value("expect_tol", 1e-6);
            r.ok = true;
            for (const auto& [key, expected] : check.expect.items()) {
                if (key == "expect_tol") continue;
                const json* actual = detail::json_at_path(r.result, key);
                if (actual == nullptr) {
                    r.ok = false;
                    r.failures.push_back(key + ": no such result field");
                    continue;
                }
                std::string why;
                if (!detail::approx_match(expected, *actual, tol, why)) {
                    r.ok = false;
                    r.failures.push_back(key + ": " + why);
                }
            }
        } catch (const Error& e) {
            r.errored = true;
            r.ok = false;
            r.failures.push_back(std::string(error_kind_name(e.kind())) + ": " + e.what());
        } catch (const std::exception& e) {
            r.errored = true;
            r.ok = false;
            r.failures.push_back(std::string("unexpected: ") + e.what());
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0)
                        .count();
        if (r.errored)
            ++report.errored;
        else if (r.ok)
            ++report.passed;
        else
            ++report.failed;
        report.checks.push_back(std::move(r));
    }
    return report;
}

inline RunReport run_scenario(const json& doc, const RunOverrides& ov = {}) {
    return run_scenario(load_scenario(doc, ov));
}

// ---------------------------------------------------------------------------
// Built-in scenarios

namespace detail {

inline json check_entry(const char* op, const char* label, json params, json expect) {
    json c;
    c["op"] = op;
    c["label"] = label;
    c["params"] = std::move(params);
    c["expect"] = std::move(expect);
    return c;
}

inline json scenario_shell(const char* name, const std::string& description,
                           std::uint64_t seed) {
    json doc;
    doc["name"] = name;
    doc["description"] = description;
    doc["defaults"] = {{"tolerance", defaults::solve_tol},
                       {"max_iter", defaults::solve_max_iter},
                       {"restarts", defaults::solve_restarts},
                       {"seed", seed}};
    doc["matrices"] = json::object();
    doc["checks"] = json::array();
    return doc;
}

inline ComplexMatrix unit_matrix(std::size_t n, std::size_t i, std::size_t j) {
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
}

/// Rank-one projection path p_t in M4: rotates the second support direction
/// of diag(1,1,0,0) into the third coordinate as t goes 0 to 1.
inline ComplexMatrix projection_path(double t) {
    const double c = std::cos(0.5 * std::numbers::pi * t);
    const double s = std::sin(0.5 * std::numbers::pi * t);
    ComplexMatrix p(4, 4);
    p(0, 0) = 1.0;
    p(1, 1) = c * c;
    p(1, 2) = s * c;
    p(2, 1) = s * c;
    p(2, 2) = s * s;
    return p;
}

inline json builtin_ex_2_4(std::uint64_t seed) {
    json doc = scenario_shell(
        "ex-2.4-corners",
        "Orthogonal corner lines in M2: joint extension is impossible but scalar "
        "restrictions exist at m = 1/2.",
        seed);
    const std::size_t n = 2;
    doc["matrices"]["p1"] = to_json(unit_matrix(n, 0, 0));
    doc["matrices"]["p2"] = to_json(unit_matrix(n, 1, 1));
    ComplexMatrix half = ComplexMatrix::identity(n);
    half *= cplx{0.5, 0.0};
    doc["matrices"]["half_identity"] = to_json(half);
    doc["algebras"] = {{"A1", {{"generators", {"p1"}}}}, {"A2", {{"generators", {"p2"}}}}};
    doc["modules"] = {{"E1", {{"generators", {"p1"}}}}, {"E2", {{"generators", {"p2"}}}}};
    doc["states"] = {{"phi1", {{"algebra", "A1"}, {"witness", "p1"}}},
                     {"phi2", {{"algebra", "A2"}, {"witness", "p2"}}}};
    doc["checks"].push_back(check_entry(
        "cstar-extension", "joint extension is linearly contradictory",
        {{"state1", "phi1"}, {"state2", "phi2"}},
        {{"status", "infeasible"}, {"exact_contradiction", true}}));
    doc["checks"].push_back(check_entry(
        "scalar-restriction", "half-scale restriction with the balanced witness",
        {{"state1", "phi1"}, {"state2", "phi2"}, {"m", 0.5}},
        {{"status", "feasible"},
         {"scales", {0.5, 0.5}},
         {"witness", to_json(half)}}));
    doc["checks"].push_back(check_entry("kernel-match", "restricted kernels match the base states",
                                        {{"state1", "phi1"}, {"state2", "phi2"}, {"m", 0.5}},
                                        {{"status", "feasible"}, {"all_matched", true}}));
    doc["checks"].push_back(check_entry(
        "certify", "module window (1/2, 1)",
        {{"module1", "E1"}, {"module2", "E2"}, {"m", 0.5}, {"M", 1.0}, {"probes", 25}},
        {{"verdict", "module-independent"},
         {"window", {0.5, 1.0}},
         {"exact", true},
         {"method", "thm-2.2(4)"}}));
    doc["checks"].push_back(check_entry(
        "s-independence", "zero divisor across the corners",
        {{"algebra1", "A1"}, {"algebra2", "A2"}},
        {{"violation_found", true}, {"exact", true}, {"min_value", 0.0}}));
    doc["checks"].push_back(check_entry(
        "norm-multiplicativity", "norm product collapses on the corner pair",
        {{"algebra1", "A1"}, {"algebra2", "A2"}},
        {{"multiplicative", false}, {"violated", true}, {"min_value", 0.0}, {"exact", true}}));
    return doc;
}

inline json builtin_ex_2_7(std::uint64_t seed) {
    json doc = scenario_shell(
        "ex-2.7-orthogonal",
        "A two-dimensional subspace of C^4 against its orthogonal complement, both as "
        "modules over the scalars: independent with m = M = 1.",
        seed);
    for (std::size_t k = 0; k < 4; ++k) {
        ComplexMatrix e(4, 1);
        e(k, 0) = 1.0;
        doc["matrices"]["e" + std::to_string(k + 1)] = to_json(e);
    }
    doc["modules"] = {{"K", {{"generators", {"e1", "e2"}}}},
                      {"Kperp", {{"generators", {"e3", "e4"}}}}};
    doc["checks"].push_back(check_entry(
        "cross-inner", "orthogonal complements have vanishing cross inner products",
        {{"module1", "K"}, {"module2", "Kperp"}},
        {{"max_cross_inner", 0.0}, {"min_norm", 1.0}, {"max_norm", 1.0}}));
    doc["checks"].push_back(check_entry(
        "certify", "full window (1, 1)",
        {{"module1", "K"}, {"module2", "Kperp"}, {"m", 1.0}, {"M", 1.0}, {"probes", 10},
         {"state_budget", 2}},
        {{"verdict", "module-independent"}, {"window", {1.0, 1.0}}, {"exact", true}}));
    doc["checks"].push_back(check_entry(
        "two-state", "dominating-state pair at m' = M' = 1",
        {{"module1", "K"}, {"module2", "Kperp"}, {"anchor1", "e1"}, {"anchor2", "e3"},
         {"m_prime", 1.0}, {"M_prime", 1.0}, {"probes", 3}},
        {{"satisfied", true}, {"search1.status", "feasible"}, {"search2.status", "feasible"}}));
    return doc;
}

inline json builtin_ex_2_10(std::uint64_t seed) {
    const std::size_t n = 16;
    std::vector<double> g(n, 0.9);
    g[3] = 2.5;
    double mean_sq = 0.0;
    for (double w : g) mean_sq += w * w;
    mean_sq /= static_cast<double>(n);

    json doc = scenario_shell(
        "ex-2.10-weights",
        "Desk-scale analogue of a weighted function module: the diagonal algebra of M16 "
        "(n = 16 grid) as a self-module, probed against a one-bump weight state.",
        seed);
    json diag_names = json::array();
    for (std::size_t k = 0; k < n; ++k) {
        const std::string name = "d" + std::to_string(k);
        doc["matrices"][name] = to_json(unit_matrix(n, k, k));
        diag_names.push_back(name);
    }
    doc["matrices"]["unit"] = to_json(ComplexMatrix::identity(n));
    ComplexMatrix trace_witness = ComplexMatrix::identity(n);
    trace_witness *= cplx{1.0 / static_cast<double>(n), 0.0};
    doc["matrices"]["trace_witness"] = to_json(trace_witness);
    ComplexMatrix bump = ComplexMatrix::diag(g);
    bump *= cplx{1.0 / static_cast<double>(n), 0.0};
    doc["matrices"]["bump_witness"] = to_json(bump);
    doc["algebras"] = {{"D", {{"generators", diag_names}}}};
    doc["modules"] = {{"E", {{"generators", diag_names}}}};
    doc["states"] = {{"tracial", {{"algebra", "D"}, {"witness", "trace_witness"}}}};

    doc["checks"].push_back(check_entry("module-closure", "diagonal self-module closes at dim 16",
                                        {{"module", "E"}},
                                        {{"dim", 16}, {"inner_dim", 16}}));
    doc["checks"].push_back(check_entry(
        "window-probe", "bump state sits in the window (1/2, sqrt(mean g^2))",
        {{"module1", "E"}, {"module2", "E"}, {"state1", "tracial"}, {"state2", "tracial"},
         {"witness", "bump_witness"}, {"m", 0.5}, {"M", std::sqrt(mean_sq)}, {"probes", 20}},
        {{"pass", true}, {"states_equal", false}}));
    doc["checks"].push_back(check_entry(
        "certify", "self-module is screened out",
        {{"module1", "E"}, {"module2", "E"}, {"m", 0.5}, {"M", std::sqrt(mean_sq)},
         {"probes", 5}},
        {{"verdict", "not-independent"}, {"method", "prop-2.11"}, {"exact", true}}));
    doc["checks"].push_back(check_entry(
        "ffss", "anchored route agrees on the self-module",
        {{"module1", "E"}, {"module2", "E"}, {"anchor", "unit"}},
        {{"verdict", "not-independent"}, {"exact", true}}));
    return doc;
}

inline json builtin_ex_2_13(std::uint64_t seed) {
    json doc = scenario_shell(
        "ex-2.13-vector-module",
        "Coordinate lines of the vector module over M2: independent with window (1/2, 1), "
        "while the same lines over the scalars defeat any inner-product-norm criterion.",
        seed);
    ComplexMatrix r1(1, 2), r2(1, 2), c1(2, 1), c2(2, 1);
    r1(0, 0) = 1.0;
    r2(0, 1) = 1.0;
    c1(0, 0) = 1.0;
    c2(1, 0) = 1.0;
    doc["matrices"]["row1"] = to_json(r1);
    doc["matrices"]["row2"] = to_json(r2);
    doc["matrices"]["col1"] = to_json(c1);
    doc["matrices"]["col2"] = to_json(c2);
    doc["matrices"]["e11"] = to_json(unit_matrix(2, 0, 0));
    doc["matrices"]["e22"] = to_json(unit_matrix(2, 1, 1));
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= cplx{0.5, 0.0};
    doc["matrices"]["half_identity"] = to_json(half);
    doc["algebras"] = {{"A1", {{"generators", {"e11"}}}},
                       {"A2", {{"generators", {"e22"}}}},
                       {"D1", {{"generators", {"e11"}}, {"adjoin_unit", true}}},
                       {"D2", {{"generators", {"e22"}}, {"adjoin_unit", true}}}};
    doc["modules"] = {{"E1", {{"generators", {"row1"}}}},
                      {"E2", {{"generators", {"row2"}}}},
                      {"L1", {{"generators", {"col1"}}}},
                      {"L2", {{"generators", {"col2"}}}}};
    doc["states"] = {{"phi1", {{"algebra", "A1"}, {"witness", "e11"}}},
                     {"phi2", {{"algebra", "A2"}, {"witness", "e22"}}}};

    doc["checks"].push_back(check_entry("intersection-screen", "coordinate lines meet only in 0",
                                        {{"module1", "E1"}, {"module2", "E2"}},
                                        {{"intersection_dim", 0}, {"intersection_ternary", true}}));
    doc["checks"].push_back(check_entry(
        "certify", "module window (1/2, 1)",
        {{"module1", "E1"}, {"module2", "E2"}, {"m", 0.5}, {"M", 1.0}, {"probes", 25}},
        {{"verdict", "module-independent"}, {"window", {0.5, 1.0}}, {"exact", true}}));
    doc["checks"].push_back(check_entry(
        "window-probe", "equal mixture of the coordinate vector states validates the window",
        {{"module1", "E1"}, {"module2", "E2"}, {"state1", "phi1"}, {"state2", "phi2"},
         {"witness", "half_identity"}, {"m", 0.5}, {"M", 1.0}, {"probes", 25}},
        {{"pass", true}, {"states_equal", false}}));
    doc["checks"].push_back(check_entry(
        "cross-inner", "over the scalars the lines are orthogonal with unit norms",
        {{"module1", "L1"}, {"module2", "L2"}},
        {{"max_cross_inner", 0.0}, {"min_norm", 1.0}, {"max_norm", 1.0}}));
    doc["checks"].push_back(check_entry(
        "norm-multiplicativity", "unitized coordinate algebras still produce zero divisors",
        {{"algebra1", "D1"}, {"algebra2", "D2"}},
        {{"multiplicative", false}, {"violated", true}, {"min_value", 0.0}, {"exact", true}}));
    return doc;
}

inline json builtin_ex_2_15(std::uint64_t seed) {
    json doc = scenario_shell(
        "ex-2.15-qep",
        "A single corner line in M2: the screen passes with the projection itself, yet a "
        "vector state on its kernel annihilates the algebra.",
        seed);
    doc["matrices"]["p"] = to_json(unit_matrix(2, 0, 0));
    doc["algebras"] = {{"K", {{"generators", {"p"}}}}};
    doc["modules"] = {{"E", {{"generators", {"p"}}}}};
    doc["checks"].push_back(check_entry(
        "intersection-screen", "self-intersection is the scalar line spanned by p",
        {{"module1", "E"}, {"module2", "E"}},
        {{"intersection_dim", 1}, {"inner_dim", 1}, {"scalar", true},
         {"z", to_json(unit_matrix(2, 0, 0))}}));
    doc["checks"].push_back(check_entry(
        "unit-inner", "p is not an ambient unit but acts as one inside its line",
        {{"matrix", "p"}, {"algebra", "K"}},
        {{"inner_is_identity", false}, {"abs_acts_as_unit", true}}));
    doc["checks"].push_back(check_entry("qep", "kernel vector state annihilates the line",
                                        {{"algebra", "K"}},
                                        {{"holds", false}, {"exact", true}, {"min_value", 0.0}}));
    doc["checks"].push_back(check_entry(
        "certify", "the line against itself still carries a window",
        {{"module1", "E"}, {"module2", "E"}, {"m", 0.5}, {"M", 1.0}, {"probes", 25}},
        {{"verdict", "module-independent"}, {"window", {0.625, 1.0}}, {"exact", true}}));
    return doc;
}

inline json builtin_prop_5_1(std::uint64_t seed) {
    json doc = scenario_shell(
        "prop-5.1-partial-isometries",
        "Two seeded random partial isometries in M4 with orthogonal initial lines: the "
        "averaged compression state certifies the window (1/2, 1).",
        seed);
    Rng rng(seed);
    ComplexMatrix f1 = rng.unit_vector(4);
    ComplexMatrix f2 = rng.unit_vector(4);
    ComplexMatrix e1(4, 1), e2(4, 1);
    e1(0, 0) = 1.0;
    e2(1, 0) = 1.0;
    const ComplexMatrix u = f1 * e1.adjoint();
    const ComplexMatrix v = f2 * e2.adjoint();
    ComplexMatrix omega = unit_matrix(4, 0, 0) + unit_matrix(4, 1, 1);
    omega *= cplx{0.5, 0.0};
    doc["matrices"]["u"] = to_json(u);
    doc["matrices"]["v"] = to_json(v);
    doc["matrices"]["p1"] = to_json(unit_matrix(4, 0, 0));
    doc["matrices"]["p2"] = to_json(unit_matrix(4, 1, 1));
    doc["matrices"]["omega"] = to_json(omega);
    doc["algebras"] = {{"A1", {{"generators", {"p1"}}}}, {"A2", {{"generators", {"p2"}}}}};
    doc["modules"] = {{"E1", {{"generators", {"u"}}}}, {"E2", {{"generators", {"v"}}}}};
    doc["states"] = {{"phi1", {{"algebra", "A1"}, {"witness", "p1"}}},
                     {"phi2", {{"algebra", "A2"}, {"witness", "p2"}}}};
    doc["checks"].push_back(check_entry("module-closure", "first isometry line is ternary",
                                        {{"module", "E1"}}, {{"dim", 1}, {"inner_dim", 1}}));
    doc["checks"].push_back(check_entry("module-closure", "second isometry line is ternary",
                                        {{"module", "E2"}}, {{"dim", 1}, {"inner_dim", 1}}));
    doc["checks"].push_back(check_entry(
        "window-probe", "averaged compression state passes the window probes",
        {{"module1", "E1"}, {"module2", "E2"}, {"state1", "phi1"}, {"state2", "phi2"},
         {"witness", "omega"}, {"m", 0.5}, {"M", 1.0}, {"probes", 10}},
        {{"pass", true}, {"states_equal", false}}));
    doc["checks"].push_back(check_entry(
        "single-state", "anchored equalities admit a shared state",
        {{"module1", "E1"}, {"module2", "E2"}, {"anchor1", "u"}, {"anchor2", "v"},
         {"m", 0.5}, {"M", 1.0}, {"probes", 2}},
        {{"all_feasible", true}, {"joint.status", "feasible"}}));
    return doc;
}

inline json builtin_ex_5_2(std::uint64_t seed) {
    json doc = scenario_shell(
        "ex-5.2-sweep",
        "A rotating projection pair in M4 sampled at t = 0, 0.1, ..., 1: independence "
        "fails strictly inside the path and holds exactly at the diagonal endpoint.",
        seed);
    doc["matrices"]["unit"] = to_json(ComplexMatrix::identity(4));
    doc["matrices"]["p0"] = to_json(projection_path(0.0));
    doc["modules"]["E0"] = {{"generators", {"unit", "p0"}}};

    for (int k = 0; k <= 10; ++k) {
        const double t = 0.1 * k;
        char tag[8];
        std::snprintf(tag, sizeof tag, "t%02d", k);
        const std::string mt = std::string("p_") + tag;
        doc["matrices"][mt] = to_json(projection_path(t));
        doc["modules"][std::string("E_") + tag] = {{"generators", {"unit", mt}}};

        const bool independent = (k == 10);
        json cert_expect, ffss_expect;
        if (independent) {
            cert_expect = {{"verdict", "module-independent"}, {"window", {1.0, 1.0}},
                           {"exact", true}};
            ffss_expect = {{"verdict", "module-independent"}, {"window", {1.0, 1.0}},
                          {"exact", true}};
        } else {
            cert_expect = {{"verdict", "not-independent"}, {"exact", true}};
            ffss_expect = {{"verdict", "not-independent"}, {"exact", true}};
        }
        char label[64];
        std::snprintf(label, sizeof label, "state route at t = %.1f", t);
        doc["checks"].push_back(check_entry(
            "certify", label,
            {{"module1", "E0"}, {"module2", std::string("E_") + tag}, {"m", 0.5}, {"M", 1.0},
             {"probes", 10}},
            cert_expect));
        std::snprintf(label, sizeof label, "anchored route at t = %.1f", t);
        doc["checks"].push_back(check_entry(
            "ffss", label,
            {{"module1", "E0"}, {"module2", std::string("E_") + tag}, {"anchor", "unit"}},
            ffss_expect));
    }
    return doc;
}

} // namespace detail

inline std::vector<std::pair<std::string, std::string>> builtin_list() {
    return {
        {"ex-2.4-corners", "orthogonal corner lines in M2: no joint extension, window (1/2, 1)"},
        {"ex-2.7-orthogonal", "subspace of C^4 vs its complement over the scalars: window (1, 1)"},
        {"ex-2.10-weights",
         "weighted diagonal self-module, desk-scale analogue on an n = 16 grid"},
        {"ex-2.13-vector-module", "coordinate lines of the vector module over M2: window (1/2, 1)"},
        {"ex-2.15-qep", "corner line of M2: screen passes, annihilating vector state exists"},
        {"prop-5.1-partial-isometries",
         "seeded random partial isometries in M4 with the averaged compression state"},
        {"ex-5.2-sweep", "rotating projection pair in M4 over t = 0, 0.1, ..., 1"},
    };
}

inline json builtin_scenario(const std::string& name,
                             std::uint64_t seed = defaults::solve_seed) {
    if (name == "ex-2.4-corners") return detail::builtin_ex_2_4(seed);
    if (name == "ex-2.7-orthogonal") return detail::builtin_ex_2_7(seed);
    if (name == "ex-2.10-weights") return detail::builtin_ex_2_10(seed);
    if (name == "ex-2.13-vector-module") return detail::builtin_ex_2_13(seed);
    if (name == "ex-2.15-qep") return detail::builtin_ex_2_15(seed);
    if (name == "prop-5.1-partial-isometries") return detail::builtin_prop_5_1(seed);
    if (name == "ex-5.2-sweep") return detail::builtin_ex_5_2(seed);
    std::string known;
    for (const auto& [n, summary] : builtin_list()) known += (known.empty() ? "" : ", ") + n;
    raise(ErrorKind::UnknownScenario, "no built-in scenario '" + name + "' (known: " + known + ")");
}

inline RunReport run_builtin(const std::string& name, const RunOverrides& ov = {}) {
    const std::uint64_t seed = ov.seed.value_or(defaults::solve_seed);
    return run_scenario(builtin_scenario(name, seed), ov);
}

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepRow {
    double t = 0.0;
    std::string verdict;
    double window_m = 0.0;
    double window_M = 0.0;
    std::optional<double> gap;
    std::string witness;
    bool errored = false;
    std::string message;
};

struct SweepReport {
    std::string family;
    double grid_lo = 0.0;
    double grid_hi = 0.0;
    std::size_t grid_n = 0;
    std::vector<SweepRow> rows;
    bool any_error = false;

    json to_json() const {
        json j;
        j["version"] = tool_version;
        j["family"] = family;
        j["grid"] = {{"lo", grid_lo}, {"hi", grid_hi}, {"n", grid_n}};
        json arr = json::array();
        for (const auto& r : rows) {
            json row;
            row["t"] = r.t;
            if (r.errored) {
                row["error"] = r.message;
            } else {
                row["verdict"] = r.verdict;
                row["window"] = {r.window_m, r.window_M};
                if (r.gap)
                    row["gap"] = *r.gap;
                else
                    row["witness"] = r.witness;
            }
            arr.push_back(std::move(row));
        }
        j["rows"] = std::move(arr);
        j["ok"] = !any_error;
        return j;
    }

    std::string text_table() const {
        std::ostringstream out;
        out << "family " << family << "\n";
        char line[160];
        std::snprintf(line, sizeof line, "%8s  %-20s  %-18s  %s\n", "t", "verdict", "window",
                      "gap-or-witness");
        out << line;
        for (const auto& r : rows) {
            if (r.errored) {
                std::snprintf(line, sizeof line, "%8.3f  %-20s  %-18s  %s\n", r.t, "error", "-",
                              r.message.c_str());
                out << line;
                continue;
            }
            char window[40];
            std::snprintf(window, sizeof window, "(%.4f, %.4f)", r.window_m, r.window_M);
            char tail[64];
            if (r.gap)
                std::snprintf(tail, sizeof tail, "gap %.6g", *r.gap);
            else
                std::snprintf(tail, sizeof tail, "%s", r.witness.c_str());
            std::snprintf(line, sizeof line, "%8.3f  %-20s  %-18s  %s\n", r.t, r.verdict.c_str(),
                          window, tail);
            out << line;
        }
        return out.str();
    }
};

namespace detail {

inline SweepRow sweep_row_from_verdict(double t, const IndependenceVerdict& v) {
    SweepRow row;
    row.t = t;
    row.verdict = verdict_kind_name(v.kind);
    row.window_m = v.window_m;
    row.window_M = v.window_M;
    if (v.kind == VerdictKind::NotIndependent) {
        if (v.refuting_pair >= 0)
            row.gap = v.certificates[static_cast<std::size_t>(v.refuting_pair)].gap;
        else if (v.norm_report)
            row.gap = 1.0 - v.norm_report->min_value;
        else
            row.gap = 0.0;
        if (v.method == "prop-2.11") row.witness = v.detail;
    } else {
        char buf[80];
        std::snprintf(buf, sizeof buf, "window achieved at m = %.6g", v.window_m);
        row.witness = buf;
    }
    return row;
}

} // namespace detail

inline std::vector<std::pair<std::string, std::string>> sweep_families() {
    return {
        {"ex-5.2", "rotating projection pair in M4, parameter t in [0, 1]"},
        {"constant", "corner pair of M2 at every grid point (parameter ignored)"},
    };
}

/// Runs one family point; rows never throw, errors are embedded.
inline SweepRow sweep_point(const std::string& family, double t, const RunOptions& opt) {
    SweepRow row;
    row.t = t;
    try {
        CertifyOptions copt;
        copt.probes = 10;
        copt.seed = opt.seed;
        copt.solve = {opt.tolerance, opt.max_iter, opt.seed};
        if (family == "ex-5.2") {
            const ComplexMatrix unit = ComplexMatrix::identity(4);
            TernarySubspace e0 = ternary_closure(4, 4, {unit, detail::projection_path(0.0)});
            TernarySubspace et = ternary_closure(4, 4, {unit, detail::projection_path(t)});
            return detail::sweep_row_from_verdict(
                t, module_independence_certify(e0, et, 0.5, 1.0, copt));
        }
        if (family == "constant") {
            TernarySubspace e1 = ternary_closure(2, 2, {detail::unit_matrix(2, 0, 0)});
            TernarySubspace e2 = ternary_closure(2, 2, {detail::unit_matrix(2, 1, 1)});
            return detail::sweep_row_from_verdict(
                t, module_independence_certify(e1, e2, 0.5, 1.0, copt));
        }
        std::string known;
        for (const auto& [n, s] : sweep_families()) known += (known.empty() ? "" : ", ") + n;
        raise(ErrorKind::UnknownScenario, "no sweep family '" + family + "' (known: " + known + ")");
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::UnknownScenario) throw;
        row.errored = true;
        row.message = e.what();
    } catch (const std::exception& e) {
        row.errored = true;
        row.message = e.what();
    }
    return row;
}

inline SweepReport run_sweep(const std::string& family, double lo, double hi, std::size_t n,
                             const RunOptions& opt = {}) {
    if (n == 0) raise(ErrorKind::ValidationError, "sweep grid needs at least one point");
    SweepReport report;
    report.family = family;
    report.grid_lo = lo;
    report.grid_hi = hi;
    report.grid_n = n;
    for (std::size_t k = 0; k < n; ++k) {
        const double t =
            n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        SweepRow row = sweep_point(family, t, opt);
        report.any_error = report.any_error || row.errored;
        report.rows.push_back(std::move(row));
    }
    return report;
}

/// Line plot of the infeasibility gap against the sweep parameter. Rows
/// without a gap (independent or errored) are skipped in the polyline.
inline std::string sweep_svg(const SweepReport& report) {
    const double width = 640.0, height = 400.0;
    const double ml = 64.0, mr = 24.0, mt = 40.0, mb = 48.0;
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : report.rows)
        if (!r.errored && r.gap) pts.push_back({r.t, *r.gap});

    double tlo = report.grid_lo, thi = report.grid_hi;
    if (thi <= tlo) thi = tlo + 1.0;
    double glo = 0.0, ghi = 1e-12;
    for (const auto& [t, g] : pts) ghi = std::max(ghi, g);
    ghi *= 1.08;

    auto sx = [&](double t) { return ml + (t - tlo) / (thi - tlo) * (width - ml - mr); };
    auto sy = [&](double g) { return height - mb - (g - glo) / (ghi - glo) * (height - mt - mb); };

    char buf[256];
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
           "viewBox=\"0 0 640 400\">\n";
    svg << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.0f\" y=\"24\" font-family=\"monospace\" font-size=\"14\">"
                  "infeasibility gap vs t (family %s)</text>\n",
                  ml, report.family.c_str());
    svg << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  ml, height - mb, width - mr, height - mb);
    svg << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  ml, mt, ml, height - mb);
    svg << buf;
    for (int k = 0; k <= 4; ++k) {
        const double t = tlo + (thi - tlo) * k / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" font-size=\"11\" "
                      "text-anchor=\"middle\">%.2f</text>\n",
                      sx(t), height - mb + 18.0, t);
        svg << buf;
        const double g = glo + (ghi - glo) * k / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" font-size=\"11\" "
                      "text-anchor=\"end\">%.3g</text>\n",
                      ml - 6.0, sy(g) + 4.0, g);
        svg << buf;
    }
    if (!pts.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", sx(pts[i].first),
                          sy(pts[i].second));
            svg << buf;
        }
        svg << "\"/>\n";
        for (const auto& [t, g] : pts) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#1f6fb2\"/>\n", sx(t),
                          sy(g));
            svg << buf;
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace starmod
