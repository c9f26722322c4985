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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtmlab/errors.hpp"
#include "qtmlab/scalar.hpp"

namespace qtm {

using StateId = std::uint32_t;
using Symbol = std::uint8_t;
using SymbolVec = std::vector<Symbol>;

inline constexpr Symbol kBlank = 0;
inline constexpr const char *kBlankName = "#";

enum class Move : std::int8_t { L = -1, N = 0, R = 1 };
using MoveVec = std::vector<Move>;

inline char move_char(Move m) { return m == Move::L ? 'L' : m == Move::R ? 'R' : 'N'; }
inline int move_delta(Move m) { return static_cast<int>(m); }

// names[0] is the blank; names[1..input_count] is the input alphabet.
struct Alphabet {
    std::vector<std::string> names{kBlankName};
    std::size_t input_count = 0;

    static Alphabet make(const std::vector<std::string> &input, const std::vector<std::string> &work) {
        Alphabet a;
        for (auto &s : input) a.add(s);
        a.input_count = a.names.size() - 1;
        for (auto &s : work)
            if (!a.find(s)) a.add(s);
        return a;
    }

    std::size_t size() const { return names.size(); }
    bool is_input(Symbol s) const { return s >= 1 && s <= input_count; }
    std::optional<Symbol> find(std::string_view name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<Symbol>(i);
        return std::nullopt;
    }
    Symbol at(std::string_view name) const {
        auto s = find(name);
        if (!s) throw AlphabetError("symbol '" + std::string(name) + "' not in alphabet");
        return *s;
    }
    bool operator==(const Alphabet &o) const { return names == o.names && input_count == o.input_count; }

private:
    void add(const std::string &s) {
        if (s == kBlankName) return;
        if (find(s)) throw AlphabetError("duplicate symbol '" + s + "'");
        if (names.size() >= 250) throw AlphabetError("alphabet too large");
        names.push_back(s);
    }
};

// Tape indices are 0-based internally, 1-based in machine files.
struct TapeRoles {
    int input = 0;
    int output = 1;
    std::optional<int> query;
    std::optional<int> qlist;
    bool operator==(const TapeRoles &) const = default;
};

struct QueryStates {
    StateId pre;
    StateId post;
    bool operator==(const QueryStates &) const = default;
};

template <class S>
struct Transition {
    S amplitude;
    StateId next;
    SymbolVec write;
    MoveVec move;

    bool operator==(const Transition &) const = default;
};

template <class S>
using Row = std::vector<Transition<S>>;

template <class S>
class MachineSpec {
public:
    std::string name;
    std::vector<Alphabet> tapes;
    TapeRoles roles;
    std::vector<std::string> states;
    StateId initial = 0;
    std::vector<bool> final;
    std::optional<QueryStates> query_states;

    MachineSpec() = default;

    MachineSpec(std::string name_, std::vector<Alphabet> tapes_, TapeRoles roles_, std::vector<std::string> states_,
                StateId initial_, std::vector<bool> final_)
        : name(std::move(name_)),
          tapes(std::move(tapes_)),
          roles(roles_),
          states(std::move(states_)),
          initial(initial_),
          final(std::move(final_)) {
        reshape();
    }

    void reshape() {
        strides_.assign(tapes.size(), 1);
        space_ = 1;
        for (std::size_t i = tapes.size(); i-- > 0;) {
            strides_[i] = space_;
            space_ *= tapes[i].size();
        }
        rows_.assign(states.size() * space_, {});
    }

    std::size_t tape_count() const { return tapes.size(); }
    std::size_t state_count() const { return states.size(); }
    // Number of symbol vectors in Gamma_1 x ... x Gamma_k.
    std::size_t symbol_space() const { return space_; }
    std::size_t row_count() const { return rows_.size(); }

    std::size_t symbols_index(std::span<const Symbol> sigma) const {
        std::size_t r = 0;
        for (std::size_t i = 0; i < sigma.size(); ++i) r += sigma[i] * strides_[i];
        return r;
    }
    std::size_t row_index(StateId p, std::span<const Symbol> sigma) const {
        return p * space_ + symbols_index(sigma);
    }
    SymbolVec decode_symbols(std::size_t sym_index) const {
        SymbolVec out(tapes.size());
        for (std::size_t i = 0; i < tapes.size(); ++i) {
            out[i] = static_cast<Symbol>(sym_index / strides_[i]);
            sym_index %= strides_[i];
        }
        return out;
    }
    StateId row_state(std::size_t ri) const { return static_cast<StateId>(ri / space_); }
    SymbolVec row_symbols(std::size_t ri) const { return decode_symbols(ri % space_); }

    const Row<S> &row(StateId p, std::span<const Symbol> sigma) const { return rows_[row_index(p, sigma)]; }
    const Row<S> &row_at(std::size_t ri) const { return rows_[ri]; }
    Row<S> &mutable_row(std::size_t ri) { return rows_[ri]; }
    Row<S> &mutable_row(StateId p, std::span<const Symbol> sigma) { return rows_[row_index(p, sigma)]; }

    bool is_final(StateId q) const { return final[q]; }
    std::vector<StateId> final_states() const {
        std::vector<StateId> out;
        for (StateId q = 0; q < final.size(); ++q)
            if (final[q]) out.push_back(q);
        return out;
    }
    std::optional<StateId> find_state(std::string_view n) const {
        for (StateId q = 0; q < states.size(); ++q)
            if (states[q] == n) return q;
        return std::nullopt;
    }
    StateId state(std::string_view n) const {
        auto q = find_state(n);
        if (!q) throw Error("unknown state '" + std::string(n) + "'");
        return *q;
    }

    const Alphabet &input_alphabet() const { return tapes[roles.input]; }
    const Alphabet &output_alphabet() const { return tapes[roles.output]; }

    std::string row_label(std::size_t ri) const {
        std::string s = "(" + states[row_state(ri)] + ";";
        auto sig = row_symbols(ri);
        for (std::size_t i = 0; i < sig.size(); ++i) s += (i ? "," : " ") + tapes[i].names[sig[i]];
        return s + ")";
    }

    std::size_t entry_count() const {
        std::size_t n = 0;
        for (auto &r : rows_) n += r.size();
        return n;
    }

    // Rows that are empty, i.e. undefined.
    std::vector<std::size_t> undefined_rows() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (rows_[i].empty()) out.push_back(i);
        return out;
    }

    void validate_roles() const {
        int k = static_cast<int>(tapes.size());
        std::vector<int> used;
        auto use = [&](int t, const char *what) {
            if (t < 0 || t >= k) throw RoleError(std::string(what) + " tape index out of range");
            if (std::find(used.begin(), used.end(), t) != used.end())
                throw RoleError(std::string(what) + " tape shares an index with another role");
            used.push_back(t);
        };
        use(roles.input, "input");
        use(roles.output, "output");
        if (roles.query) use(*roles.query, "query");
        if (roles.qlist) use(*roles.qlist, "query-list");
        if (query_states && !roles.query) throw RoleError("query states declared without a query tape");
    }

    void validate_states() const {
        if (final.size() != states.size()) throw Error("final flags size mismatch");
        if (initial >= states.size()) throw Error("initial state out of range");
        if (final[initial]) throw Error("initial state is final");
        if (std::none_of(final.begin(), final.end(), [](bool b) { return b; })) throw Error("no final state");
    }

    bool operator==(const MachineSpec &) const = default;

private:
    std::vector<std::size_t> strides_;
    std::size_t space_ = 1;
    std::vector<Row<S>> rows_;
};

// Canonical entry order inside a row: by target (state, written symbols, moves).
template <class S>
bool transition_key_less(const Transition<S> &a, const Transition<S> &b) {
    if (a.next != b.next) return a.next < b.next;
    if (a.write != b.write) return a.write < b.write;
    return a.move < b.move;
}

template <class S>
bool same_target(const Transition<S> &a, const Transition<S> &b) {
    return a.next == b.next && a.write == b.write && a.move == b.move;
}

// Merges coinciding targets, drops zeros, sorts.
template <class S>
void normalize_row(Row<S> &row) {
    std::sort(row.begin(), row.end(), transition_key_less<S>);
    Row<S> out;
    for (auto &t : row) {
        if (!out.empty() && same_target(out.back(), t)) {
            out.back().amplitude += t.amplitude;
        } else {
            out.push_back(t);
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Transition<S> &t) { return is_zero(t.amplitude); }),
              out.end());
    row = std::move(out);
}

template <class S>
MachineSpec<Approx> to_approx(const MachineSpec<S> &m) {
    MachineSpec<Approx> out(m.name, m.tapes, m.roles, m.states, m.initial, m.final);
    out.query_states = m.query_states;
    for (std::size_t ri = 0; ri < m.row_count(); ++ri) {
        auto &dst = out.mutable_row(ri);
        for (auto &t : m.row_at(ri)) dst.push_back({to_complex(t.amplitude), t.next, t.write, t.move});
    }
    return out;
}

template <class S>
MachineSpec<S> conjugate_machine(const MachineSpec<S> &m) {
    MachineSpec<S> out = m;
    for (std::size_t ri = 0; ri < out.row_count(); ++ri)
        for (auto &t : out.mutable_row(ri)) t.amplitude = conj(t.amplitude);
    return out;
}

}  // namespace qtm
