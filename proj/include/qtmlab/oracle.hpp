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

#include <cmath>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qtmlab/simulator.hpp"

namespace qtm {

template <class S>
std::pair<RunResult<S>, QueryTrace<S>> run_with_oracle(const MachineSpec<S> &m, const Oracle &a,
                                                       const Superposition<S> &phi,
                                                       std::optional<std::size_t> budget = std::nullopt,
                                                       const RunOptions &opts = {}, std::string label = "") {
    if (!m.query_states) throw RolePrereqError("machine '" + m.name + "' declares no query states");
    QueryTrace<S> trace;
    OracleRunControl ctl{&a, budget, true};
    auto res = run(m, phi, opts, ctl, &trace, std::move(label));
    return {std::move(res), std::move(trace)};
}

template <class S>
std::pair<RunResult<S>, QueryTrace<S>> run_with_oracle(const MachineSpec<S> &m, const Oracle &a, std::string_view x,
                                                       std::optional<std::size_t> budget = std::nullopt,
                                                       const RunOptions &opts = {}) {
    return run_with_oracle(m, a, initial_superposition(m, x), budget, opts, std::string(x));
}

template <class S>
QueryTrace<S> query_magnitudes(const MachineSpec<S> &m, const Oracle &a, std::string_view x,
                               const RunOptions &opts = {}) {
    return run_with_oracle(m, a, x, std::nullopt, opts).second;
}

struct AuditFailure {
    std::size_t t;
    std::string reason;
    std::string witness;
};

struct AuditReport {
    bool passed = true;
    std::optional<std::size_t> first_query_time;
    std::vector<std::string> snapshot;
    std::vector<AuditFailure> failures;
    std::size_t halt_time = 0;
};

inline std::vector<std::string> split_query_list(const std::string &content) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : content) {
        if (c == '/') {
            words.push_back(cur);
            cur.clear();
        } else if (c != ',') {
            cur += c;
        }
    }
    if (!content.empty()) words.push_back(cur);
    return words;
}

// Lineage-free nonadaptivity audit: configurations that may not have queried yet keep a snapshot list.
template <class S>
AuditReport nonadaptive_audit(const MachineSpec<S> &m, const Oracle &a, std::string_view x,
                              const RunOptions &opts = {}) {
    if (!m.roles.qlist) throw RolePrereqError("machine '" + m.name + "' declares no query-list tape");
    AuditReport rep;
    if (!m.query_states) {
        rep.halt_time = run(m, x, opts).halt_time;
        return rep;
    }
    Evolver<S> ev(m, &a, opts);
    auto psi = initial_superposition(m, x);
    int ql = *m.roles.qlist;
    std::unordered_set<Configuration, ConfigurationHash> unqueried;
    for (auto &[c, amp] : psi.entries()) unqueried.insert(c);
    std::set<std::string> snapshot;
    std::size_t t = 0;
    while (true) {
        std::size_t finals = 0;
        bool any_pre = false;
        for (auto &[c, amp] : psi.entries()) {
            finals += m.is_final(c.state);
            any_pre = any_pre || ev.is_pre_query(c);
        }
        if (finals == psi.size()) break;
        if (finals > 0) throw TimingViolation("final and non-final configurations coexist at time " + std::to_string(t));
        if (any_pre && !rep.first_query_time) {
            rep.first_query_time = t;
            for (auto &[c, amp] : psi.entries()) snapshot.insert(tape_string(m, c, ql));
            rep.snapshot.assign(snapshot.begin(), snapshot.end());
        }
        for (auto &[c, amp] : psi.sorted()) {
            std::string list = tape_string(m, c, ql);
            if (rep.first_query_time && unqueried.count(c) && !snapshot.count(list))
                rep.failures.push_back({t, "query list altered before the first query", describe(m, c)});
            if (ev.is_pre_query(c)) {
                auto q = read_query_tape(m, c);
                auto words = split_query_list(list);
                if (q && std::find(words.begin(), words.end(), q->word) == words.end())
                    rep.failures.push_back({t, "queried word '" + q->word + "' absent from the query list", describe(m, c)});
            }
        }
        if (t >= opts.max_steps) throw MaxStepsExceeded("no halt within " + std::to_string(opts.max_steps) + " steps");
        auto next = ev.step(psi);
        std::unordered_set<Configuration, ConfigurationHash> next_unqueried;
        for (auto &c : unqueried) {
            if (ev.is_pre_query(c)) continue;
            auto succ = ev.step(Superposition<S>(c, S(1)));
            for (auto &[d, amp] : succ.entries())
                if (next.entries().count(d)) next_unqueried.insert(d);
        }
        unqueried = std::move(next_unqueried);
        psi = std::move(next);
        ++t;
    }
    rep.halt_time = t;
    rep.passed = rep.failures.empty();
    return rep;
}

struct BbbvResult {
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
    std::size_t t = 0;
    double distance = 0;
    double magnitude_sum = 0;
};

template <class S>
BbbvResult bbbv_bound(const MachineSpec<S> &m, const Oracle &a, const Oracle &b, const Superposition<S> &phi,
                      const Superposition<S> &psi, const RunOptions &opts = {}) {
    auto [ra, ta] = run_with_oracle(m, a, phi, std::nullopt, opts);
    auto [rb, tb] = run_with_oracle(m, b, psi, std::nullopt, opts);
    if (ra.halt_time != rb.halt_time)
        throw OracleTimingError("halting times differ: " + std::to_string(ra.halt_time) + " vs " +
                                std::to_string(rb.halt_time));
    BbbvResult r;
    r.t = ra.halt_time;
    auto diff = a.symmetric_difference(b);
    RealOf<S> sum{};
    for (auto &e : ta.events) {
        if (e.t < 1 || e.t > r.t - 1) continue;
        for (auto &[y, q] : e.magnitudes)
            if (diff.count(y)) sum += q;
    }
    r.magnitude_sum = to_double(sum);
    r.distance = distance(phi, psi);
    r.lhs = std::abs(ra.rho() - rb.rho());
    r.rhs = r.distance + 2.0 * std::sqrt(static_cast<double>(r.t)) * std::sqrt(std::max(0.0, r.magnitude_sum));
    r.holds = r.lhs <= r.rhs + kAmpTolerance;
    return r;
}

template <class S>
BbbvResult bbbv_bound(const MachineSpec<S> &m, const Oracle &a, const Oracle &b, std::string_view x,
                      std::string_view y, const RunOptions &opts = {}) {
    return bbbv_bound(m, a, b, initial_superposition(m, x), initial_superposition(m, y), opts);
}

}  // namespace qtm
