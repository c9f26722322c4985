// Copyright 2026 The qtmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qtmlab/constructions.hpp"
#include "qtmlab/function_classes.hpp"
#include "qtmlab/oracle.hpp"
#include "qtmlab/well_formed.hpp"

namespace qtm {

using Json = nlohmann::json;

template <class R>
void put_real(Json &j, const std::string &key, const R &v) {
    j[key] = to_double(v);
    if constexpr (std::is_same_v<R, Exact>) j[key + "_exact"] = v.str();
}

inline Json to_json(const WellFormednessReport &r, const std::string &machine) {
    Json j;
    j["machine"] = machine;
    j["well-formed"] = r.passed ? "yes" : "no";
    Json v = Json::array();
    for (auto &x : r.violations)
        v.push_back({{"condition", condition_name(x.condition)}, {"witness", x.witness}, {"residual", x.residual}});
    j["violations"] = v;
    return j;
}

template <class S>
Json to_json(const RunResult<S> &r) {
    Json j;
    j["machine"] = r.machine;
    j["input"] = r.input;
    j["mode"] = ScalarTraits<S>::mode_name;
    j["halt_time"] = r.halt_time;
    put_real(j, "rho", r.accept);
    put_real(j, "rho_bar", r.reject);
    Json d = Json::object();
    for (auto &[out, p] : r.output_distribution) {
        d[out.empty() ? "-" : out] = to_double(p);
    }
    j["output_distribution"] = d;
    j["support_sizes"] = r.support_sizes;
    return j;
}

template <class S>
Json to_json(const QueryTrace<S> &t) {
    Json ev = Json::array();
    for (auto &e : t.events)
        for (auto &[y, q] : e.magnitudes) ev.push_back(Json::array({e.t, y.empty() ? "-" : y, to_double(q)}));
    return {{"events", ev}, {"total_query_times", t.total_query_times}};
}

inline Json to_json(const AuditReport &a) {
    Json j;
    j["passed"] = a.passed;
    j["first_query_time"] = a.first_query_time ? Json(*a.first_query_time) : Json(nullptr);
    j["snapshot"] = a.snapshot;
    j["halt_time"] = a.halt_time;
    Json f = Json::array();
    for (auto &x : a.failures) f.push_back({{"t", x.t}, {"reason", x.reason}, {"witness", x.witness}});
    j["failures"] = f;
    return j;
}

inline Json to_json(const BbbvResult &b) {
    return {{"lhs", b.lhs},           {"rhs", b.rhs}, {"holds", b.holds}, {"t", b.t}, {"distance", b.distance},
            {"magnitude_sum", b.magnitude_sum}};
}

inline Json to_json(const EstimationOutcome &e) {
    Json rows = Json::array();
    for (auto &r : e.table)
        rows.push_back({{"ell", r.ell}, {"probability", r.probability}, {"folded", r.folded}, {"estimate", r.estimate}});
    return {{"k", e.k},         {"accuracy", e.accuracy},         {"rho", e.rho},
            {"theta", e.theta}, {"success_prob", e.success_prob}, {"total", e.total},
            {"table", rows}};
}

inline Json to_json(const BvOutcome &b) {
    Json d = Json::object();
    for (auto &[w, p] : b.distribution) d[w] = p;
    return {{"hidden", b.hidden}, {"hidden_prob", b.hidden_prob}, {"total", b.total}, {"distribution", d}};
}

inline Json to_json(const QmaResult &q) {
    Json w = Json::array();
    for (auto &z : q.witness) w.push_back(Json::array({z.real(), z.imag()}));
    return {{"max_prob", q.max_prob}, {"dimension", q.witness.size()}, {"witness", w}};
}

inline std::string render_scalar(const Json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

// One `key: value` line per top-level key; nested values are rendered compactly.
inline std::string render_text(const Json &j) {
    std::string out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out += it.key() + ": ";
        auto &v = it.value();
        if (v.is_object() || v.is_array()) {
            Json copy = v;
            out += copy.dump();
        } else {
            out += render_scalar(v);
        }
        out += "\n";
    }
    return out;
}

inline std::string render(const Json &j, bool json) { return json ? j.dump(2) + "\n" : render_text(j); }

}  // namespace qtm
