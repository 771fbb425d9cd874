#pragma once

#include <string>

#include <json.hpp>

#include "starmod/certify.hpp"

namespace starmod {

using json = nlohmann::json;

// Wire format: a complex entry is [re, im]; a matrix is a row-major nested
// array of entries. Parsing also accepts bare numbers for real entries, but
// emission always writes the pair form.

inline json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const cplx v = m(i, j);
            row.push_back(json::array({v.real(), v.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline cplx entry_from_json(const json& j) {
    if (j.is_number()) return cplx{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx{j[0].get<double>(), j[1].get<double>()};
    raise(ErrorKind::ParseError, "matrix entry must be a number or [re, im]");
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        raise(ErrorKind::ParseError, "matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        raise(ErrorKind::ParseError, "matrix rows must be non-empty arrays");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            raise(ErrorKind::ParseError, "matrix rows must all have the same length");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = entry_from_json(j[i][k]);
    }
    return m;
}

inline constexpr const char* certificate_format_version = "1";

inline json to_json(const FeasibilityCertificate& c) {
    json j;
    j["version"] = certificate_format_version;
    j["status"] = feas_status_name(c.status);
    j["method"] = c.method;
    j["max_residual"] = c.max_residual;
    j["gap"] = c.gap;
    j["exact_contradiction"] = c.exact_contradiction;
    j["iterations"] = c.iterations;
    j["tolerance"] = c.tolerance;
    j["seed"] = c.seed;
    if (!c.witness.empty()) j["witness"] = to_json(c.witness);
    if (!c.scales.empty()) j["scales"] = c.scales;
    if (!c.residuals.empty()) j["residuals"] = c.residuals;
    return j;
}

inline json to_json(const IntersectionScalarReport& r) {
    json j;
    j["intersection_dim"] = r.intersection_dim;
    j["intersection_ternary"] = r.intersection_ternary;
    j["inner_dim"] = r.inner_dim;
    if (r.z) j["z"] = to_json(*r.z);
    j["scalar"] = r.scalar();
    return j;
}

inline json to_json(const NormProductReport& r) {
    json j;
    j["min_value"] = r.min_value;
    j["exact"] = r.exact;
    j["method"] = r.method;
    j["restarts_used"] = r.restarts_used;
    if (!r.witness_a.empty()) j["witness_a"] = to_json(r.witness_a);
    if (!r.witness_b.empty()) j["witness_b"] = to_json(r.witness_b);
    return j;
}

inline json to_json(const NormMultReport& r) {
    json j;
    j["multiplicative"] = r.multiplicative;
    j["violated"] = r.violated;
    j["exact"] = r.exact;
    j["min_value"] = r.min_value;
    j["method"] = r.method;
    if (!r.witness_a.empty()) j["witness_a"] = to_json(r.witness_a);
    if (!r.witness_b.empty()) j["witness_b"] = to_json(r.witness_b);
    return j;
}

inline json to_json(const WindowProbeReport& r) {
    json j;
    j["pass"] = r.pass;
    j["min_lower_slack"] = r.min_lower_slack;
    j["min_upper_slack"] = r.min_upper_slack;
    j["probes_checked"] = r.probes_checked;
    j["states_equal"] = r.states_equal;
    j["state_distance"] = r.state_distance;
    return j;
}

inline json to_json(const KernelMatchReport& r) {
    json j;
    j["all_matched"] = r.all_matched;
    json entries = json::array();
    for (const auto& e : r.entries) {
        json je;
        je["valid"] = e.valid;
        je["matched"] = e.matched;
        je["dim_restricted"] = json::array({e.dim_restricted[0], e.dim_restricted[1]});
        je["dim_base"] = json::array({e.dim_base[0], e.dim_base[1]});
        je["distance"] = json::array({e.distance[0], e.distance[1]});
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline json to_json(const IndependenceVerdict& v) {
    json j;
    j["verdict"] = verdict_kind_name(v.kind);
    j["window"] = json::array({v.window_m, v.window_M});
    j["exact"] = v.exact;
    j["method"] = v.method;
    j["detail"] = v.detail;
    j["screen"] = to_json(v.screen);
    j["screen_applicable"] = v.screen_applicable;
    j["enumeration_exact"] = v.enumeration_exact;
    j["state_pairs"] = v.state_pairs;
    if (v.refuting_pair >= 0) {
        j["refuting_pair"] = v.refuting_pair;
        j["refuting_certificate"] = to_json(v.certificates[static_cast<std::size_t>(v.refuting_pair)]);
    }
    if (v.min_probe_slack < 1e299) j["min_probe_slack"] = v.min_probe_slack;
    if (v.norm_report) j["norm_report"] = to_json(*v.norm_report);
    return j;
}

inline json to_json(const SingleStateReport& r) {
    json j;
    j["all_feasible"] = r.all_feasible;
    j["pairs"] = r.entries.size();
    j["joint"] = to_json(r.joint);
    if (r.refuting_entry >= 0) {
        const auto& e = r.entries[static_cast<std::size_t>(r.refuting_entry)];
        json je;
        je["probe1"] = e.probe1;
        je["probe2"] = e.probe2;
        je["certificate"] = to_json(e.cert);
        j["refuting_entry"] = std::move(je);
    }
    return j;
}

inline json to_json(const TwoStateReport& r) {
    json j;
    j["satisfied"] = r.satisfied;
    j["search1"] = to_json(r.search1);
    j["search2"] = to_json(r.search2);
    j["combined"] = to_json(r.combined);
    return j;
}

inline json to_json(const DefiniteVerifyReport& r) {
    json j;
    j["pass"] = r.pass;
    j["definite"] = json::array({r.definite[0], r.definite[1]});
    j["definiteness_gap"] = json::array({r.definiteness_gap[0], r.definiteness_gap[1]});
    j["values"] = json::array({r.value1, r.value12, r.value2});
    j["chain_holds"] = r.chain_holds;
    return j;
}

inline json to_json(const QepReport& r) {
    json j;
    j["holds"] = r.holds;
    j["exact"] = r.exact;
    j["min_value"] = r.min_value;
    j["method"] = r.method;
    if (!r.witness.empty()) j["witness"] = to_json(r.witness);
    return j;
}

inline json to_json(const SIndependenceReport& r) {
    json j;
    j["violation_found"] = r.violation_found;
    j["exact"] = r.exact;
    j["min_value"] = r.min_value;
    j["method"] = r.method;
    if (!r.witness_a.empty()) j["witness_a"] = to_json(r.witness_a);
    if (!r.witness_b.empty()) j["witness_b"] = to_json(r.witness_b);
    return j;
}

inline json to_json(const UnitInnerReport& r) {
    json j;
    j["inner_is_identity"] = r.inner_is_identity;
    j["identity_residual"] = r.identity_residual;
    if (r.abs_acts_as_unit) {
        j["abs_acts_as_unit"] = *r.abs_acts_as_unit;
        j["unit_action_residual"] = r.unit_action_residual;
    }
    return j;
}

} // namespace starmod
