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
#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qtmlab/config.hpp"
#include "qtmlab/machine.hpp"

// Straight-from-the-definition evolution used to cross-check the sparse engine.
namespace qtm::reference {

struct ConfigLess {
    bool operator()(const Configuration &a, const Configuration &b) const {
        if (a.state != b.state) return a.state < b.state;
        if (a.heads != b.heads) return a.heads < b.heads;
        for (std::size_t i = 0; i < a.tapes.size(); ++i)
            if (a.tapes[i].cells() != b.tapes[i].cells()) return a.tapes[i].cells() < b.tapes[i].cells();
        return false;
    }
};

using Amp = std::complex<double>;
using Vec = std::map<Configuration, Amp, ConfigLess>;

inline Amp as_complex(const Exact &x) { return {x.to_double(), 0.0}; }
inline Amp as_complex(const Approx &x) { return x; }

// U|c> read off the transition table.
template <class S>
Vec apply_delta(const MachineSpec<S> &m, const Configuration &c) {
    SymbolVec sigma(m.tape_count());
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = c.tapes[i].get(c.heads[i]);
    Vec out;
    for (auto &t : m.row(c.state, sigma)) {
        Configuration d = c;
        d.state = t.next;
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            d.tapes[i].set(c.heads[i], t.write[i]);
            d.heads[i] += static_cast<int>(t.move[i]);
        }
        out[d] += as_complex(t.amplitude);
    }
    return out;
}

template <class S>
Configuration start(const MachineSpec<S> &m, const std::vector<Symbol> &input) {
    Configuration c;
    c.state = m.initial;
    c.heads.assign(m.tape_count(), 0);
    c.tapes.resize(m.tape_count());
    for (std::size_t i = 0; i < input.size(); ++i) c.tapes[m.roles.input].set(static_cast<std::int64_t>(i), input[i]);
    return c;
}

// All input words over the input alphabet with length <= n.
template <class S>
std::vector<std::vector<Symbol>> short_inputs(const MachineSpec<S> &m, std::size_t n) {
    std::vector<std::vector<Symbol>> all{{}}, layer{{}};
    std::size_t k = m.tapes[m.roles.input].input_count;
    for (std::size_t len = 1; len <= n && k > 0; ++len) {
        std::vector<std::vector<Symbol>> next;
        for (auto &w : layer)
            for (std::size_t s = 1; s <= k; ++s) {
                auto v = w;
                v.push_back(static_cast<Symbol>(s));
                next.push_back(v);
            }
        all.insert(all.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return all;
}

template <class S>
std::vector<Configuration> reachable(const MachineSpec<S> &m, std::size_t max_input, std::size_t steps) {
    std::set<Configuration, ConfigLess> seen;
    std::vector<Configuration> frontier;
    for (auto &w : short_inputs(m, max_input)) {
        auto c = start(m, w);
        if (seen.insert(c).second) frontier.push_back(c);
    }
    for (std::size_t t = 0; t < steps; ++t) {
        std::vector<Configuration> next;
        for (auto &c : frontier)
            for (auto &[d, a] : apply_delta(m, c))
                if (std::abs(a) > 0 && seen.insert(d).second) next.push_back(d);
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

// max |(U^dagger U - I)[c][c']| over the given columns.
template <class S>
double unitarity_defect(const MachineSpec<S> &m, const std::vector<Configuration> &cols) {
    std::vector<Vec> images;
    for (auto &c : cols) images.push_back(apply_delta(m, c));
    std::map<Configuration, std::vector<std::size_t>, ConfigLess> hits;
    for (std::size_t j = 0; j < images.size(); ++j)
        for (auto &[d, a] : images[j]) hits[d].push_back(j);
    double worst = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        std::map<std::size_t, Amp> g;
        g[i] = 0;
        for (auto &[d, a] : images[i])
            for (auto j : hits[d]) g[j] += std::conj(a) * images[j].at(d);
        for (auto &[j, v] : g) worst = std::max(worst, std::abs(v - (i == j ? Amp(1) : Amp(0))));
    }
    return worst;
}

// Dense matrix of U on the subspace spanned by configurations reachable from `start` within `steps` steps.
struct DenseSystem {
    std::vector<Configuration> basis;
    std::vector<std::vector<Amp>> u;
};

template <class S>
DenseSystem dense_system(const MachineSpec<S> &m, const std::vector<Configuration> &seeds, std::size_t steps) {
    std::set<Configuration, ConfigLess> seen(seeds.begin(), seeds.end());
    std::vector<Configuration> frontier(seeds);
    for (std::size_t t = 0; t <= steps; ++t) {
        std::vector<Configuration> next;
        for (auto &c : frontier)
            for (auto &[d, a] : apply_delta(m, c))
                if (seen.insert(d).second) next.push_back(d);
        frontier = std::move(next);
    }
    DenseSystem s;
    s.basis.assign(seen.begin(), seen.end());
    std::map<Configuration, std::size_t, ConfigLess> index;
    for (std::size_t i = 0; i < s.basis.size(); ++i) index[s.basis[i]] = i;
    s.u.assign(s.basis.size(), std::vector<Amp>(s.basis.size()));
    for (std::size_t j = 0; j < s.basis.size(); ++j)
        for (auto &[d, a] : apply_delta(m, s.basis[j]))
            if (auto it = index.find(d); it != index.end()) s.u[it->second][j] += a;
    return s;
}

inline std::vector<Amp> dense_apply(const DenseSystem &s, const std::vector<Amp> &v, bool adjoint = false) {
    std::vector<Amp> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            out[i] += adjoint ? std::conj(s.u[j][i]) * v[j] : s.u[i][j] * v[j];
    return out;
}

}  // namespace qtm::reference
