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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qtmlab/builder.hpp"
#include "qtmlab/simulator.hpp"

namespace qtm {

inline constexpr int kMaxRepeat = 5;
inline const std::vector<std::string> kQuadSymbols{"b0", "b1", "b2", "b3"};

template <class S>
std::vector<int> identity_tape_map(const MachineSpec<S> &m) {
    std::vector<int> v(m.tape_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
}

// Inputs of length <= n over the input alphabet, shortest first.
template <class S>
std::vector<std::string> probe_inputs(const MachineSpec<S> &m, std::size_t n = 3) {
    auto &a = m.input_alphabet();
    bool single = true;
    for (std::size_t s = 1; s <= a.input_count; ++s) single = single && a.names[s].size() == 1;
    std::vector<std::string> out{""}, layer{""};
    for (std::size_t len = 1; len <= n && a.input_count > 0; ++len) {
        std::vector<std::string> next;
        for (auto &w : layer)
            for (std::size_t s = 1; s <= a.input_count; ++s)
                next.push_back(w.empty() ? a.names[s] : w + (single ? "" : ",") + a.names[s]);
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

template <class S>
MachineSpec<S> complement_machine(const MachineSpec<S> &m) {
    auto &out = m.output_alphabet();
    auto zero = out.find("0"), one = out.find("1");
    if (!zero || !one) throw RolePrereqError("output tape of '" + m.name + "' lacks the symbols 0 and 1");
    MachineBuilder<S> b(m.name + "~", m.tapes, m.roles);
    auto c = b.add_copy(m, "", identity_tape_map(m));
    StateId flip = b.add_state("flip", {}, true);
    int ot = m.roles.output;
    b.rule_each(c.final, [&](const SymbolVec &sigma) {
        SymbolVec w = sigma;
        if (w[ot] == *zero) {
            w[ot] = *one;
        } else if (w[ot] == *one) {
            w[ot] = *zero;
        }
        return std::vector<typename MachineBuilder<S>::FullOut>{{S(1), flip, w}};
    });
    b.set_initial(c.entry);
    return b.finish();
}

// Appends n idle steps before halting.
template <class S>
MachineSpec<S> delay_machine(const MachineSpec<S> &m, std::size_t n) {
    if (n == 0) return m;
    MachineBuilder<S> b(m.name + "+" + std::to_string(n), m.tapes, m.roles);
    auto c = b.add_copy(m, "", identity_tape_map(m));
    StateId prev = c.final;
    for (std::size_t i = 1; i <= n; ++i) {
        StateId w = b.add_state("wait" + std::to_string(i), {}, i == n);
        b.pass(prev, w);
        prev = w;
    }
    b.set_initial(c.entry);
    return b.finish();
}

// Halting time shared by every probe input, or nullopt if they differ or a run fails.
template <class S>
std::optional<std::size_t> common_halt_time(const MachineSpec<S> &m, const std::vector<std::string> &probes,
                                            const RunOptions &opts = {}) {
    std::optional<std::size_t> t;
    for (auto &x : probes) {
        std::size_t h;
        try {
            h = run(m, x, opts).halt_time;
        } catch (const Error &) {
            return std::nullopt;
        }
        if (t && *t != h) return std::nullopt;
        t = h;
    }
    return t;
}

struct PaddingOptions {
    std::optional<std::pair<std::size_t, std::size_t>> pads;
    std::vector<std::string> probes;
};

// Pads two machines to a common halting time over the probe inputs.
template <class S>
std::pair<std::size_t, std::size_t> synchronizing_pads(const MachineSpec<S> &g, const MachineSpec<S> &h,
                                                       const PaddingOptions &opt) {
    if (opt.pads) return *opt.pads;
    auto probes = opt.probes.empty() ? probe_inputs(g) : opt.probes;
    std::optional<long> diff;
    for (auto &x : probes) {
        long tg, th;
        try {
            tg = static_cast<long>(run(g, x).halt_time);
            th = static_cast<long>(run(h, x).halt_time);
        } catch (const Error &e) {
            throw SyncError(std::string("probe '") + x + "' failed: " + e.what());
        }
        if (diff && *diff != tg - th) throw SyncError("halting-time difference varies across inputs");
        diff = tg - th;
    }
    if (!diff) return {0, 0};
    return *diff >= 0 ? std::pair<std::size_t, std::size_t>{0, *diff}
                      : std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(-*diff), 0};
}

// Branches on an H2-split four-symbol cell: b0,b1 run Mg, b2,b3 run complement(Mh).
template <class S>
MachineSpec<S> mixture_machine(const MachineSpec<S> &mg, const MachineSpec<S> &mh, const PaddingOptions &opt = {}) {
    if (!(mg.tapes == mh.tapes) || !(mg.roles == mh.roles))
        throw CompositionError("mixture operands must share tapes and roles");
    auto hc = complement_machine(mh);
    auto [pg, ph] = synchronizing_pads(mg, hc, opt);
    auto g = delay_machine(mg, pg);
    auto h = delay_machine(hc, ph);
    auto tapes = mg.tapes;
    tapes.push_back(Alphabet::make({}, kQuadSymbols));
    int bt = static_cast<int>(tapes.size()) - 1;
    MachineBuilder<S> b("mix." + mg.name + "." + mh.name, tapes, mg.roles);
    auto cg = b.add_copy(g, "g.", identity_tape_map(g));
    auto ch = b.add_copy(h, "h.", identity_tape_map(h));
    StateId s = b.add_state("split");
    StateId t = b.add_state("branch");
    StateId f = b.add_state("done", {}, true);
    Symbol q[4];
    for (int j = 0; j < 4; ++j) q[j] = b.sym(bt, kQuadSymbols[j]);
    const int h2[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
    Symbol row_in[4] = {kBlank, q[1], q[2], q[3]};
    S half = S(1) / S(2);
    for (int r = 0; r < 4; ++r) {
        std::vector<typename MachineBuilder<S>::Out> outs;
        for (int j = 0; j < 4; ++j) outs.push_back({h2[r][j] > 0 ? half : S(-half), t, {{bt, q[j]}}});
        b.rule(s, {{bt, row_in[r]}}, outs);
    }
    for (int j = 0; j < 4; ++j) {
        b.rule(t, {{bt, q[j]}}, {{S(1), j < 2 ? cg.entry : ch.entry, {}}});
        b.rule(j < 2 ? cg.final : ch.final, {{bt, q[j]}}, {{S(1), f, {}}});
    }
    b.set_initial(s);
    return b.finish();
}

// m sequential copies of M on fresh work tapes sharing the input; accepts iff all accept.
template <class S>
MachineSpec<S> seq_repeat(const MachineSpec<S> &m, int count, int bound = kMaxRepeat) {
    if (count < 1) throw BudgetError("repeat count must be positive");
    if (count > bound) throw BudgetError("repeat count " + std::to_string(count) + " exceeds bound " + std::to_string(bound));
    if (m.roles.query || m.roles.qlist) throw CompositionError("seq_repeat does not support oracle tapes");
    auto zero = m.output_alphabet().find("0"), one = m.output_alphabet().find("1");
    if (!zero || !one) throw RolePrereqError("output tape lacks the symbols 0 and 1");
    std::vector<Alphabet> tapes{m.input_alphabet()};
    std::vector<std::vector<int>> maps;
    std::vector<int> outs;
    for (int j = 0; j < count; ++j) {
        std::vector<int> map(m.tape_count());
        for (std::size_t i = 0; i < m.tape_count(); ++i) {
            if (static_cast<int>(i) == m.roles.input) {
                map[i] = 0;
            } else {
                map[i] = static_cast<int>(tapes.size());
                tapes.push_back(m.tapes[i]);
            }
        }
        outs.push_back(map[m.roles.output]);
        maps.push_back(map);
    }
    tapes.push_back(m.output_alphabet());
    int ot = static_cast<int>(tapes.size()) - 1;
    TapeRoles roles;
    roles.input = 0;
    roles.output = ot;
    MachineBuilder<S> b(m.name + ".rep" + std::to_string(count), tapes, roles);
    std::vector<typename MachineBuilder<S>::Copy> copies;
    for (int j = 0; j < count; ++j) copies.push_back(b.add_copy(m, "r" + std::to_string(j + 1) + ".", maps[j]));
    StateId conj_state = b.add_state("and");
    StateId f = b.add_state("done", {}, true);
    for (int j = 0; j + 1 < count; ++j) b.pass(copies[j].final, copies[j + 1].entry);
    b.pass(copies.back().final, conj_state);
    Symbol z = *zero, o = *one;
    b.rule_each(conj_state, [&](const SymbolVec &sigma) {
        bool all = std::all_of(outs.begin(), outs.end(), [&](int t) { return sigma[t] == o; });
        SymbolVec w = sigma;
        Symbol cur = sigma[ot];
        Symbol bit = all ? o : z;
        w[ot] = cur == kBlank ? bit : cur == bit ? kBlank : cur;
        return std::vector<typename MachineBuilder<S>::FullOut>{{S(1), f, w}};
    });
    b.set_initial(copies.front().entry);
    return b.finish();
}

}  // namespace qtm
