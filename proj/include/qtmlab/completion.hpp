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

#include <map>
#include <unordered_map>
#include <vector>

#include "qtmlab/well_formed.hpp"

namespace qtm {

// Extends the defined rows of a unidirectional partial machine to an orthonormal system.
template <class S>
MachineSpec<S> complete_unidirectional(const MachineSpec<S> &partial, double tol = kAmpTolerance) {
    std::vector<StateId> conflicts;
    auto arrivals = arrival_directions(partial, &conflicts);
    if (!conflicts.empty())
        throw NotUnidirectionalError("state '" + partial.states[conflicts.front()] + "' is entered with different moves");
    const std::size_t k = partial.tape_count();
    const std::size_t space = partial.symbol_space();
    MoveVec stay(k, Move::N);
    auto dir = [&](StateId q) -> const MoveVec & {
        auto it = arrivals.find(q);
        return it == arrivals.end() ? stay : it->second;
    };
    using Vec = std::map<std::size_t, S>;
    std::vector<Vec> rows;
    std::vector<std::size_t> row_of;
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_basis;
    for (std::size_t ri = 0; ri < partial.row_count(); ++ri) {
        auto &row = partial.row_at(ri);
        if (row.empty()) continue;
        Vec v;
        for (auto &t : row) v[t.next * space + partial.symbols_index(t.write)] += t.amplitude;
        RealOf<S> n{};
        for (auto &[j, a] : v) n += norm2(a);
        if (!detail::real_vanishes<S>(n - RealOf<S>(1), tol))
            throw RowDefectError("row " + partial.row_label(ri) + " does not have unit length");
        std::size_t id = rows.size();
        for (auto &[j, a] : v) by_basis[j].push_back(id);
        rows.push_back(std::move(v));
        row_of.push_back(ri);
    }
    auto dot = [&](const Vec &a, const Vec &b) {
        S acc{};
        for (auto &[j, x] : a) {
            auto it = b.find(j);
            if (it != b.end()) acc += conj(x) * it->second;
        }
        return acc;
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<std::size_t> others;
        for (auto &[j, a] : rows[i])
            for (auto r : by_basis[j])
                if (r > i) others.push_back(r);
        std::sort(others.begin(), others.end());
        others.erase(std::unique(others.begin(), others.end()), others.end());
        for (auto r : others)
            if (!detail::scalar_vanishes(dot(rows[i], rows[r]), tol))
                throw RowDefectError("rows " + partial.row_label(row_of[i]) + " and " + partial.row_label(row_of[r]) +
                                     " are not orthogonal");
    }
    MachineSpec<S> out = partial;
    const std::size_t dim = partial.state_count() * space;
    std::size_t next_free = 0;
    auto emit = [&](std::size_t ri, const Vec &v) {
        auto &row = out.mutable_row(ri);
        for (auto &[j, a] : v) {
            StateId q = static_cast<StateId>(j / space);
            row.push_back({a, q, partial.decode_symbols(j % space), dir(q)});
        }
        normalize_row(row);
    };
    for (auto ri : partial.undefined_rows()) {
        while (next_free < dim && by_basis.count(next_free)) ++next_free;
        Vec chosen;
        if (next_free < dim) {
            chosen[next_free] = S(1);
        } else {
            bool found = false;
            for (std::size_t j = 0; j < dim && !found; ++j) {
                Vec r{{j, S(1)}};
                for (auto id : by_basis[j]) {
                    S c = conj(rows[id].at(j));
                    for (auto &[b, a] : rows[id]) r[b] -= c * a;
                }
                RealOf<S> n{};
                for (auto &[b, a] : r) n += norm2(a);
                if (detail::real_vanishes<S>(n, tol)) continue;
                S inv;
                if constexpr (is_exact_v<S>) {
                    auto root = Exact::sqrt(n);
                    if (!root) continue;
                    inv = Exact(1) / *root;
                } else {
                    inv = S(1.0 / std::sqrt(n), 0.0);
                }
                for (auto &[b, a] : r) a *= inv;
                std::erase_if(r, [&](auto &e) { return detail::scalar_vanishes(e.second, 0.0); });
                chosen = std::move(r);
                found = true;
            }
            if (!found) throw CompletionArithmeticError("no completion vector with a representable norm");
        }
        std::size_t id = rows.size();
        for (auto &[j, a] : chosen) by_basis[j].push_back(id);
        rows.push_back(chosen);
        emit(ri, chosen);
    }
    return out;
}

}  // namespace qtm
