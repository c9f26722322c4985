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

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qtmlab/oracle_set.hpp"
#include "qtmlab/superposition.hpp"

namespace qtm {

inline std::size_t default_max_support() {
    if (const char *env = std::getenv("QTMLAB_MAX_SUPPORT")) {
        try {
            return static_cast<std::size_t>(std::stod(env));
        } catch (...) {
        }
    }
    return 1000000;
}

struct RunOptions {
    std::size_t max_steps = 10000;
    std::size_t max_support = default_max_support();
    std::optional<double> prune;
};

template <class S>
double prune_floor(const RunOptions &o) {
    return o.prune ? *o.prune : ScalarTraits<S>::default_prune;
}

template <class S>
std::vector<Symbol> tokenize_input(const MachineSpec<S> &m, std::string_view x, int tape = -1) {
    auto &alpha = m.tapes[tape < 0 ? m.roles.input : tape];
    std::vector<Symbol> out;
    bool separated = x.find(',') != std::string_view::npos || x.find(' ') != std::string_view::npos;
    auto push = [&](std::string_view tok) {
        auto s = alpha.find(tok);
        if (!s || (tape < 0 && !alpha.is_input(*s)))
            throw AlphabetError("symbol '" + std::string(tok) + "' not in the input alphabet");
        out.push_back(*s);
    };
    if (separated) {
        for (auto &t : detail::split_symbols(x)) push(t);
    } else {
        for (char c : x) push(std::string_view(&c, 1));
    }
    return out;
}

template <class S>
Configuration initial_configuration(const MachineSpec<S> &m, std::string_view x,
                                    const std::map<int, std::vector<Symbol>> &extra = {}) {
    Configuration c;
    c.state = m.initial;
    c.heads.assign(m.tape_count(), 0);
    c.tapes.assign(m.tape_count(), Tape{});
    auto syms = tokenize_input(m, x);
    for (std::size_t i = 0; i < syms.size(); ++i) c.tapes[m.roles.input].set(static_cast<std::int64_t>(i), syms[i]);
    for (auto &[t, content] : extra)
        for (std::size_t i = 0; i < content.size(); ++i) c.tapes[t].set(static_cast<std::int64_t>(i), content[i]);
    return c;
}

template <class S>
Superposition<S> initial_superposition(const MachineSpec<S> &m, std::string_view x) {
    return Superposition<S>(initial_configuration(m, x), S(1));
}

// Applies U_M (and its adjoint) to superpositions; caches the predecessor index.
template <class S>
class Evolver {
public:
    Evolver(const MachineSpec<S> &m, const Oracle *oracle = nullptr, RunOptions opts = {})
        : m_(m), oracle_(m.query_states ? oracle : nullptr), opts_(opts), floor_(prune_floor<S>(opts)) {}

    const MachineSpec<S> &machine() const { return m_; }
    const Oracle *oracle() const { return oracle_; }

    bool is_pre_query(const Configuration &c) const { return m_.query_states && c.state == m_.query_states->pre; }

    Superposition<S> step(const Superposition<S> &psi) const {
        Superposition<S> out;
        out.time = psi.time + 1;
        out.entries().reserve(psi.size() * 2 + 1);
        for (auto &[c, amp] : psi.entries()) {
            if (oracle_ && is_pre_query(c)) {
                out.add(apply_oracle(m_, c, *oracle_), amp);
                continue;
            }
            const auto &row = m_.row(c.state, c.read());
            for (auto &t : row) {
                Configuration n = c;
                n.state = t.next;
                for (std::size_t i = 0; i < n.tapes.size(); ++i) {
                    n.tapes[i].set(n.heads[i], t.write[i]);
                    n.heads[i] += move_delta(t.move[i]);
                }
                out.add(n, amp * t.amplitude);
            }
        }
        out.prune(floor_);
        check_support(out);
        return out;
    }

    Superposition<S> step_inverse(const Superposition<S> &psi) const {
        build_index();
        Superposition<S> out;
        out.time = psi.time > 0 ? psi.time - 1 : 0;
        std::size_t k = m_.tape_count();
        for (auto &[c, amp] : psi.entries()) {
            if (oracle_ && c.state == m_.query_states->post) {
                Configuration p = apply_oracle(m_, c, *oracle_);
                p.state = m_.query_states->pre;
                out.add(p, amp);
            }
            auto mit = moves_by_state_.find(c.state);
            if (mit == moves_by_state_.end()) continue;
            for (auto &d : mit->second) {
                Configuration base = c;
                SymbolVec tau(k);
                for (std::size_t i = 0; i < k; ++i) {
                    base.heads[i] -= move_delta(d[i]);
                    tau[i] = base.tapes[i].get(base.heads[i]);
                }
                auto it = index_.find(key(c.state, d, tau));
                if (it == index_.end()) continue;
                for (auto &[ri, alpha] : it->second) {
                    Configuration p = base;
                    p.state = m_.row_state(ri);
                    SymbolVec sigma = m_.row_symbols(ri);
                    for (std::size_t i = 0; i < k; ++i) p.tapes[i].set(p.heads[i], sigma[i]);
                    out.add(p, conj(alpha) * amp);
                }
            }
        }
        out.prune(floor_);
        check_support(out);
        return out;
    }

private:
    void check_support(const Superposition<S> &s) const {
        if (s.size() > opts_.max_support)
            throw SupportLimitError("support " + std::to_string(s.size()) + " exceeds limit " +
                                    std::to_string(opts_.max_support));
    }

    std::string key(StateId q, const MoveVec &d, const SymbolVec &tau) const {
        std::string s;
        s.reserve(4 + d.size() + tau.size());
        s.append(reinterpret_cast<const char *>(&q), sizeof(q));
        for (auto x : d) s.push_back(static_cast<char>(x));
        for (auto x : tau) s.push_back(static_cast<char>(x));
        return s;
    }

    void build_index() const {
        if (index_built_) return;
        for (std::size_t ri = 0; ri < m_.row_count(); ++ri) {
            if (oracle_ && m_.row_state(ri) == m_.query_states->pre) continue;
            for (auto &t : m_.row_at(ri)) {
                auto &mv = moves_by_state_[t.next];
                if (std::find(mv.begin(), mv.end(), t.move) == mv.end()) mv.push_back(t.move);
                index_[key(t.next, t.move, t.write)].emplace_back(ri, t.amplitude);
            }
        }
        index_built_ = true;
    }

    const MachineSpec<S> &m_;
    const Oracle *oracle_;
    RunOptions opts_;
    double floor_;
    mutable bool index_built_ = false;
    mutable std::unordered_map<StateId, std::vector<MoveVec>> moves_by_state_;
    mutable std::unordered_map<std::string, std::vector<std::pair<std::size_t, S>>> index_;
};

template <class S>
Superposition<S> step(const MachineSpec<S> &m, const Superposition<S> &psi, const RunOptions &opts = {}) {
    return Evolver<S>(m, nullptr, opts).step(psi);
}

template <class S>
Superposition<S> step_inverse(const MachineSpec<S> &m, const Superposition<S> &psi, const RunOptions &opts = {}) {
    return Evolver<S>(m, nullptr, opts).step_inverse(psi);
}

template <class S>
struct QueryEvent {
    std::size_t t = 0;
    std::map<std::string, RealOf<S>> magnitudes;
};

template <class S>
struct QueryTrace {
    std::vector<QueryEvent<S>> events;
    std::size_t total_query_times = 0;

    RealOf<S> magnitude(std::size_t t, const std::string &y) const {
        for (auto &e : events)
            if (e.t == t) {
                auto it = e.magnitudes.find(y);
                return it == e.magnitudes.end() ? RealOf<S>{} : it->second;
            }
        return RealOf<S>{};
    }
};

template <class S>
struct RunResult {
    std::string machine;
    std::string input;
    Superposition<S> final;
    std::size_t halt_time = 0;
    RealOf<S> accept{};
    RealOf<S> reject{};
    std::map<std::string, RealOf<S>> output_distribution;
    std::vector<std::size_t> support_sizes;

    double rho() const { return to_double(accept); }
    double rho_bar() const { return to_double(reject); }
};

template <class S>
bool is_accepting(const MachineSpec<S> &m, const Configuration &c) {
    auto one = m.output_alphabet().find("1");
    return one && c.tapes[m.roles.output].get(0) == *one;
}

struct OracleRunControl {
    const Oracle *oracle = nullptr;
    std::optional<std::size_t> budget;
    bool require_query_sync = false;
};

template <class S>
RunResult<S> run(const MachineSpec<S> &m, Superposition<S> psi, const RunOptions &opts = {},
                 const OracleRunControl &ctl = {}, QueryTrace<S> *trace = nullptr, std::string input_label = "") {
    Evolver<S> ev(m, ctl.oracle, opts);
    RunResult<S> res;
    res.machine = m.name;
    res.input = std::move(input_label);
    std::size_t t = psi.time;
    while (true) {
        res.support_sizes.push_back(psi.size());
        if (psi.empty()) throw Error("superposition vanished at time " + std::to_string(t));
        std::size_t finals = 0, pre = 0;
        std::map<std::string, RealOf<S>> mags;
        for (auto &[c, a] : psi.entries()) {
            if (m.is_final(c.state)) ++finals;
            if (ev.is_pre_query(c)) {
                ++pre;
                if (trace) {
                    auto q = read_query_tape(m, c);
                    if (q) mags[q->word] += norm2(a);
                }
            }
        }
        if (finals == psi.size()) break;
        if (finals > 0)
            throw TimingViolation("final and non-final configurations coexist at time " + std::to_string(t));
        if (pre > 0) {
            if (ctl.require_query_sync && pre != psi.size())
                throw QueryDesyncError("pre-query and other configurations coexist at time " + std::to_string(t));
            if (trace) {
                trace->events.push_back({t, std::move(mags)});
                trace->total_query_times++;
                if (ctl.budget && trace->total_query_times > *ctl.budget)
                    throw BudgetExceeded("query count " + std::to_string(trace->total_query_times) +
                                         " exceeds budget " + std::to_string(*ctl.budget));
            }
        }
        if (t >= opts.max_steps) throw MaxStepsExceeded("no halt within " + std::to_string(opts.max_steps) + " steps");
        psi = ev.step(psi);
        ++t;
    }
    res.halt_time = t;
    for (auto &[c, a] : psi.entries()) {
        auto w = norm2(a);
        if (is_accepting(m, c)) {
            res.accept += w;
        } else {
            res.reject += w;
        }
        res.output_distribution[tape_string(m, c, m.roles.output)] += w;
    }
    res.final = std::move(psi);
    return res;
}

template <class S>
RunResult<S> run(const MachineSpec<S> &m, std::string_view x, const RunOptions &opts = {}) {
    return run(m, Superposition<S>(initial_superposition(m, x)), opts, {}, static_cast<QueryTrace<S> *>(nullptr), std::string(x));
}

// Applies U_M exactly n times with no halting checks.
template <class S>
Superposition<S> evolve(const Evolver<S> &ev, Superposition<S> psi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) psi = ev.step(psi);
    return psi;
}

template <class S>
Superposition<S> evolve_inverse(const Evolver<S> &ev, Superposition<S> psi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) psi = ev.step_inverse(psi);
    return psi;
}

}  // namespace qtm
