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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "qtmlab/machine.hpp"
#include "qtmlab/well_formed.hpp"

namespace qtm {

// Assembles well-formed machines from control states and copies of sub-machines.
//
// Control states and copy entries have a fixed arrival move vector, so every
// transition into them uses it. Rows left undefined at finish() are paired
// bijectively with the local targets no defined row reaches.
template <class S>
class MachineBuilder {
public:
    using Writes = std::vector<std::pair<int, Symbol>>;

    struct Out {
        S amp;
        StateId next;
        Writes write;
    };
    struct FullOut {
        S amp;
        StateId next;
        SymbolVec write;
        MoveVec move{};  // empty: arrival vector of `next`
    };
    struct Copy {
        StateId entry;
        StateId final;
        std::vector<StateId> states;
        std::vector<int> tape_map;
    };

    MachineBuilder(std::string name, std::vector<Alphabet> tapes, TapeRoles roles)
        : name_(std::move(name)), tapes_(std::move(tapes)), roles_(roles) {
        space_ = 1;
        for (auto &a : tapes_) space_ *= a.size();
    }

    const std::vector<Alphabet> &tapes() const { return tapes_; }
    std::size_t tape_count() const { return tapes_.size(); }
    Symbol sym(int tape, std::string_view name) const { return tapes_[tape].at(name); }

    StateId add_state(const std::string &name, MoveVec arrival = {}, bool is_final = false) {
        if (arrival.empty()) arrival.assign(tapes_.size(), Move::N);
        StateId id = static_cast<StateId>(names_.size());
        names_.push_back(unique_name(name));
        final_.push_back(is_final);
        arrival_.push_back(arrival);
        rows_.emplace_back(space_);
        return id;
    }

    MoveVec moves(std::initializer_list<std::pair<int, Move>> m) const {
        MoveVec v(tapes_.size(), Move::N);
        for (auto &[t, d] : m) v[t] = d;
        return v;
    }

    void set_initial(StateId q) { initial_ = q; }
    void set_query_states(StateId pre, StateId post) { query_ = QueryStates{pre, post}; }

    Copy add_copy(const MachineSpec<S> &sub, const std::string &prefix, std::vector<int> tape_map,
                  MoveVec entry_arrival = {}) {
        if (tape_map.size() != sub.tape_count()) throw CompositionError("tape map size mismatch");
        for (std::size_t i = 0; i < tape_map.size(); ++i)
            if (!(tapes_[tape_map[i]] == sub.tapes[i]))
                throw CompositionError("AlphabetMismatch: tape " + std::to_string(i + 1) + " of '" + sub.name + "'");
        auto finals = sub.final_states();
        if (finals.size() != 1) throw CompositionError("sub-machine '" + sub.name + "' must have one final state");
        Copy c;
        c.tape_map = tape_map;
        c.states.resize(sub.state_count());
        for (StateId q = 0; q < sub.state_count(); ++q) {
            StateId id = static_cast<StateId>(names_.size());
            names_.push_back(unique_name(prefix + sub.states[q]));
            final_.push_back(false);
            arrival_.emplace_back();
            rows_.emplace_back(space_);
            c.states[q] = id;
        }
        c.entry = c.states[sub.initial];
        c.final = finals.front();
        c.final = c.states[c.final];
        arrival_[c.entry] = entry_arrival.empty() ? MoveVec(tapes_.size(), Move::N) : entry_arrival;
        if (sub.query_states) set_query_states(c.states[sub.query_states->pre], c.states[sub.query_states->post]);
        std::vector<bool> mapped(tapes_.size(), false);
        for (int t : tape_map) mapped[t] = true;
        for (std::size_t s = 0; s < space_; ++s) {
            SymbolVec sigma = decode(s);
            SymbolVec sub_sigma(sub.tape_count());
            for (std::size_t i = 0; i < sub_sigma.size(); ++i) sub_sigma[i] = sigma[tape_map[i]];
            for (StateId q = 0; q < sub.state_count(); ++q) {
                if (sub.is_final(q)) continue;
                std::vector<FullOut> outs;
                for (auto &t : sub.row(q, sub_sigma)) {
                    if (t.next == sub.initial)
                        throw CompositionError("sub-machine '" + sub.name + "' re-enters its initial state");
                    FullOut o{t.amplitude, c.states[t.next], sigma, MoveVec(tapes_.size(), Move::N)};
                    for (std::size_t i = 0; i < tape_map.size(); ++i) {
                        o.write[tape_map[i]] = t.write[i];
                        o.move[tape_map[i]] = t.move[i];
                    }
                    outs.push_back(std::move(o));
                }
                define_raw(c.states[q], s, outs, true);
            }
        }
        internal_.insert(c.states.begin(), c.states.end());
        internal_.erase(c.entry);
        return c;
    }

    // Defines (p, sigma) for every sigma matching `read`; unlisted tapes are left unchanged.
    void rule(StateId p, const Writes &read, const std::vector<Out> &outs) {
        for (std::size_t s = 0; s < space_; ++s) {
            SymbolVec sigma = decode(s);
            bool match = std::all_of(read.begin(), read.end(), [&](auto &r) { return sigma[r.first] == r.second; });
            if (!match) continue;
            std::vector<FullOut> full;
            for (auto &o : outs) {
                FullOut f{o.amp, o.next, sigma};
                for (auto &[t, v] : o.write) f.write[t] = v;
                full.push_back(std::move(f));
            }
            define_raw(p, s, full, false);
        }
    }

    // Defines rows from a callback over every symbol vector; an empty result leaves the row undefined.
    void rule_each(StateId p, const std::function<std::vector<FullOut>(const SymbolVec &)> &f) {
        for (std::size_t s = 0; s < space_; ++s) {
            auto outs = f(decode(s));
            if (!outs.empty()) define_raw(p, s, outs, false);
        }
    }

    // Identity transition into `next` for every symbol vector.
    void pass(StateId p, StateId next) { rule(p, {}, {{S(1), next, {}}}); }

    MachineSpec<S> finish(bool verify = true) {
        if (!initial_) throw CompositionError("initial state not set");
        const std::size_t nq = names_.size();
        std::vector<bool> fixed(nq, false);
        for (StateId q = 0; q < nq; ++q) fixed[q] = !internal_.count(q);
        // Targets of defined rows inside the fixed-arrival block.
        std::vector<std::vector<bool>> covered(nq, std::vector<bool>(space_, false));
        std::size_t defined_into_fixed = 0, covered_count = 0;
        for (StateId q = 0; q < nq; ++q)
            for (std::size_t s = 0; s < space_; ++s) {
                auto &row = rows_[q][s];
                if (!row) continue;
                bool into_fixed = false;
                for (auto &o : *row) {
                    if (!fixed[o.next]) continue;
                    into_fixed = true;
                    std::size_t ts = index(o.write);
                    if (!covered[o.next][ts]) {
                        covered[o.next][ts] = true;
                        ++covered_count;
                    }
                }
                if (into_fixed) ++defined_into_fixed;
            }
        if (defined_into_fixed != covered_count)
            throw CompositionError("'" + name_ + "': defined control rows do not span their targets (" +
                                   std::to_string(defined_into_fixed) + " rows, " + std::to_string(covered_count) +
                                   " targets)");
        std::vector<std::pair<StateId, std::size_t>> free_in, free_out;
        for (StateId q = 0; q < nq; ++q)
            for (std::size_t s = 0; s < space_; ++s) {
                if (!rows_[q][s]) free_in.emplace_back(q, s);
                if (fixed[q] && !covered[q][s]) free_out.emplace_back(q, s);
            }
        if (free_in.size() != free_out.size())
            throw CompositionError("'" + name_ + "': cannot complete: " + std::to_string(free_in.size()) + " open rows, " +
                                   std::to_string(free_out.size()) + " open targets");
        // Final rows re-enter the initial state first, keeping the result entry-clean.
        StateId init = *initial_;
        std::stable_partition(free_in.begin(), free_in.end(), [&](auto &x) { return final_[x.first]; });
        std::stable_partition(free_out.begin(), free_out.end(), [&](auto &x) { return x.first == init; });
        for (std::size_t i = 0; i < free_in.size(); ++i) {
            auto [p, s] = free_in[i];
            auto [q, ts] = free_out[i];
            rows_[p][s] = std::vector<FullOut>{{S(1), q, decode(ts)}};
        }
        MachineSpec<S> m(name_, tapes_, roles_, names_, init, final_);
        m.query_states = query_;
        for (StateId q = 0; q < nq; ++q)
            for (std::size_t s = 0; s < space_; ++s) {
                auto &row = m.mutable_row(q, decode(s));
                auto &outs = *rows_[q][s];
                for (auto &o : outs) row.push_back({o.amp, o.next, o.write, o.move.empty() ? arrival_[o.next] : o.move});
                normalize_row(row);
            }
        m.validate_roles();
        m.validate_states();
        if (verify) {
            auto rep = check_well_formed(m);
            if (!rep.passed)
                throw CompositionError("assembled machine '" + name_ + "' is not well-formed: " +
                                       condition_name(rep.violations.front().condition) + " at " +
                                       rep.violations.front().witness);
        }
        return m;
    }

private:
    std::string unique_name(const std::string &base) {
        std::string n = base;
        while (std::find(names_.begin(), names_.end(), n) != names_.end()) n += "'";
        return n;
    }

    SymbolVec decode(std::size_t s) const {
        SymbolVec out(tapes_.size());
        for (std::size_t i = tapes_.size(); i-- > 0;) {
            out[i] = static_cast<Symbol>(s % tapes_[i].size());
            s /= tapes_[i].size();
        }
        return out;
    }
    std::size_t index(const SymbolVec &v) const {
        std::size_t s = 0;
        for (std::size_t i = 0; i < v.size(); ++i) s = s * tapes_[i].size() + v[i];
        return s;
    }
    void define_raw(StateId p, std::size_t s, std::vector<FullOut> outs, bool from_copy) {
        auto &slot = rows_[p];
        if (slot.size() != space_) slot.resize(space_);
        if (slot[s]) throw CompositionError("row (" + names_[p] + ", #" + std::to_string(s) + ") defined twice");
        if (!from_copy)
            for (auto &o : outs)
                if (internal_.count(o.next))
                    throw CompositionError("control row targets internal state '" + names_[o.next] + "'");
        slot[s] = std::move(outs);
    }

    std::string name_;
    std::vector<Alphabet> tapes_;
    TapeRoles roles_;
    std::size_t space_ = 1;
    std::vector<std::string> names_;
    std::vector<bool> final_;
    std::vector<MoveVec> arrival_;
    std::vector<std::vector<std::optional<std::vector<FullOut>>>> rows_;
    std::set<StateId> internal_;
    std::optional<StateId> initial_;
    std::optional<QueryStates> query_;
};

}  // namespace qtm
