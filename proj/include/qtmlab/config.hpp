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
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qtmlab/machine.hpp"

namespace qtm {

// Finitely supported tape; blanks are never stored.
class Tape {
public:
    using Cell = std::pair<std::int64_t, Symbol>;

    Symbol get(std::int64_t pos) const {
        auto it = lower(pos);
        return it != cells_.end() && it->first == pos ? it->second : kBlank;
    }
    void set(std::int64_t pos, Symbol s) {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), pos,
                                   [](const Cell &c, std::int64_t p) { return c.first < p; });
        bool present = it != cells_.end() && it->first == pos;
        if (s == kBlank) {
            if (present) cells_.erase(it);
        } else if (present) {
            it->second = s;
        } else {
            cells_.insert(it, {pos, s});
        }
    }
    const std::vector<Cell> &cells() const { return cells_; }
    bool empty() const { return cells_.empty(); }
    bool operator==(const Tape &o) const = default;

private:
    std::vector<Cell>::const_iterator lower(std::int64_t pos) const {
        return std::lower_bound(cells_.begin(), cells_.end(), pos,
                                [](const Cell &c, std::int64_t p) { return c.first < p; });
    }
    std::vector<Cell> cells_;
};

struct Configuration {
    StateId state = 0;
    std::vector<std::int64_t> heads;
    std::vector<Tape> tapes;

    bool operator==(const Configuration &o) const = default;

    SymbolVec read() const {
        SymbolVec s(tapes.size());
        for (std::size_t i = 0; i < tapes.size(); ++i) s[i] = tapes[i].get(heads[i]);
        return s;
    }
};

inline void hash_mix(std::size_t &h, std::uint64_t v) {
    v ^= v >> 33;
    v *= 0xff51afd7ed558ccdULL;
    v ^= v >> 33;
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

struct ConfigurationHash {
    std::size_t operator()(const Configuration &c) const {
        std::size_t h = c.state;
        for (auto x : c.heads) hash_mix(h, static_cast<std::uint64_t>(x));
        for (auto &t : c.tapes) {
            hash_mix(h, 0x517cc1b727220a95ULL);
            for (auto &[p, s] : t.cells()) hash_mix(h, (static_cast<std::uint64_t>(p) << 8) ^ s);
        }
        return h;
    }
};

// Total order used for deterministic iteration and reports.
inline bool config_less(const Configuration &a, const Configuration &b) {
    if (a.state != b.state) return a.state < b.state;
    if (a.heads != b.heads) return a.heads < b.heads;
    for (std::size_t i = 0; i < a.tapes.size(); ++i) {
        auto &x = a.tapes[i].cells();
        auto &y = b.tapes[i].cells();
        if (x != y) return x < y;
    }
    return false;
}

template <class S>
std::string describe(const MachineSpec<S> &m, const Configuration &c) {
    std::string s = "[" + m.states[c.state];
    for (std::size_t i = 0; i < c.tapes.size(); ++i) {
        s += " | h=" + std::to_string(c.heads[i]) + " ";
        if (c.tapes[i].empty()) s += "-";
        bool first = true;
        for (auto &[p, sym] : c.tapes[i].cells()) {
            s += (first ? "" : ",") + std::to_string(p) + ":" + m.tapes[i].names[sym];
            first = false;
        }
    }
    return s + "]";
}

// Contiguous content of a tape from cell 0 to the last non-blank cell.
template <class S>
std::string tape_string(const MachineSpec<S> &m, const Configuration &c, int tape) {
    auto &t = c.tapes[tape];
    auto &names = m.tapes[tape].names;
    if (t.empty()) return "";
    bool single = std::all_of(names.begin(), names.end(), [](const std::string &n) { return n.size() == 1; });
    std::int64_t lo = std::min<std::int64_t>(0, t.cells().front().first);
    std::int64_t hi = t.cells().back().first;
    std::string out;
    for (std::int64_t p = lo; p <= hi; ++p) {
        if (!single && p > lo) out += ",";
        out += names[t.get(p)];
    }
    return out;
}

}  // namespace qtm
