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
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qtmlab/machine.hpp"

namespace qtm {

enum class Condition { UnitLength, Orthogonality, Separability };

inline const char *condition_name(Condition c) {
    switch (c) {
        case Condition::UnitLength:
            return "unit-length";
        case Condition::Orthogonality:
            return "orthogonality";
        case Condition::Separability:
            return "separability";
    }
    return "?";
}

struct Violation {
    Condition condition;
    std::string witness;
    double residual;
};

struct WellFormednessReport {
    bool passed = true;
    std::vector<Violation> violations;

    std::size_t count(Condition c) const {
        return static_cast<std::size_t>(
            std::count_if(violations.begin(), violations.end(), [&](const Violation &v) { return v.condition == c; }));
    }
};

namespace detail {

// Value A + B*sqrt(3) with A, B in the scalar field; sqrt3 never lies in Q(sqrt2).
template <class S>
struct Sqrt3Pair {
    S a{};
    S b{};
    void add(const S &v, int pow3_neg, int pow2_neg) {
        // v * 3^(-pow3_neg/2) * 2^(-pow2_neg/2)
        if constexpr (is_exact_v<S>) {
            S f = v * Exact::rt2_pow(-pow2_neg);
            mpz_class p3;
            if (pow3_neg % 2 == 0) {
                mpz_ui_pow_ui(p3.get_mpz_t(), 3, static_cast<unsigned long>(pow3_neg / 2));
                a += f * Exact(mpq_class(mpz_class(1), p3));
            } else {
                mpz_ui_pow_ui(p3.get_mpz_t(), 3, static_cast<unsigned long>((pow3_neg + 1) / 2));
                b += f * Exact(mpq_class(mpz_class(1), p3));
            }
        } else {
            a += v * std::pow(3.0, -pow3_neg / 2.0) * std::pow(2.0, -pow2_neg / 2.0);
        }
    }
    double magnitude() const {
        if constexpr (is_exact_v<S>) {
            return std::abs(to_double(a) + to_double(b) * std::sqrt(3.0));
        } else {
            return std::abs(a);
        }
    }
    bool vanishes(double tol) const {
        if constexpr (is_exact_v<S>) {
            return is_zero(a) && is_zero(b);
        } else {
            return std::abs(a) <= tol;
        }
    }
};

template <class S>
bool real_vanishes(const RealOf<S> &x, double tol) {
    if constexpr (is_exact_v<S>) {
        return is_zero(x);
    } else {
        return std::abs(x) <= tol;
    }
}

template <class S>
bool scalar_vanishes(const S &x, double tol) {
    if constexpr (is_exact_v<S>) {
        return is_zero(x);
    } else {
        return std::abs(x) <= tol;
    }
}

template <class S>
double scalar_magnitude(const S &x) {
    return std::abs(to_complex(x));
}

inline std::string h_label(int code) { return code == 3 ? "nat" : std::to_string(code - 1); }

}  // namespace detail

template <class S>
WellFormednessReport check_well_formed(const MachineSpec<S> &m, double tol = kAmpTolerance) {
    WellFormednessReport rep;
    const std::size_t k = m.tape_count();
    auto add = [&](Condition c, std::string w, double r) { rep.violations.push_back({c, std::move(w), r}); };

    // (1) unit length
    for (std::size_t ri = 0; ri < m.row_count(); ++ri) {
        RealOf<S> n{};
        for (auto &t : m.row_at(ri)) n += norm2(t.amplitude);
        RealOf<S> d = n - RealOf<S>(1);
        if (!detail::real_vanishes<S>(d, tol))
            add(Condition::UnitLength, m.row_label(ri), std::abs(to_double(d)));
    }

    // (2) orthogonality via an inverted index over local targets (q, tau, d)
    {
        std::unordered_map<std::string, std::vector<std::pair<std::size_t, const S *>>> by_target;
        for (std::size_t ri = 0; ri < m.row_count(); ++ri)
            for (auto &t : m.row_at(ri)) {
                std::string key(reinterpret_cast<const char *>(&t.next), sizeof(t.next));
                for (std::size_t i = 0; i < k; ++i) {
                    key.push_back(static_cast<char>(t.write[i]));
                    key.push_back(static_cast<char>(t.move[i]));
                }
                by_target[key].emplace_back(ri, &t.amplitude);
            }
        std::map<std::pair<std::size_t, std::size_t>, S> dots;
        for (auto &[key, list] : by_target)
            for (std::size_t i = 0; i < list.size(); ++i)
                for (std::size_t j = i + 1; j < list.size(); ++j) {
                    auto [r1, a1] = list[i];
                    auto [r2, a2] = list[j];
                    if (r1 == r2) continue;
                    if (r1 < r2) {
                        dots[{r1, r2}] += conj(*a1) * *a2;
                    } else {
                        dots[{r2, r1}] += conj(*a2) * *a1;
                    }
                }
        for (auto &[pr, v] : dots)
            if (!detail::scalar_vanishes(v, tol))
                add(Condition::Orthogonality, m.row_label(pr.first) + " . " + m.row_label(pr.second),
                    detail::scalar_magnitude(v));
    }

    // (3) separability; only states entered with more than one move vector can contribute
    {
        std::unordered_map<StateId, std::vector<MoveVec>> arrivals;
        for (std::size_t ri = 0; ri < m.row_count(); ++ri)
            for (auto &t : m.row_at(ri)) {
                auto &v = arrivals[t.next];
                if (std::find(v.begin(), v.end(), t.move) == v.end()) v.push_back(t.move);
            }
        std::unordered_set<StateId> mixed;
        for (auto &[q, v] : arrivals)
            if (v.size() > 1) mixed.insert(q);
        if (!mixed.empty()) {
            struct Contribution {
                std::uint64_t vec;
                const S *amp;
                int n0, n1;
                std::size_t eps;
            };
            std::size_t eps_space = 1;
            for (std::size_t i = 0; i < k; ++i) eps_space *= 5;
            const std::uint64_t sym_space = m.symbol_space();
            std::unordered_map<std::uint64_t, std::vector<Contribution>> by_comp;
            for (std::size_t ri = 0; ri < m.row_count(); ++ri)
                for (auto &t : m.row_at(ri)) {
                    if (!mixed.count(t.next)) continue;
                    int n0 = 0, n1 = 0;
                    std::vector<std::vector<int>> eps_choices(k);
                    for (std::size_t i = 0; i < k; ++i) {
                        int d = move_delta(t.move[i]);
                        (d == 0 ? n0 : n1)++;
                        for (int e = -2; e <= 2; ++e)
                            if (std::abs(2 * d - e) <= 1) eps_choices[i].push_back(e);
                    }
                    std::uint64_t tau = m.symbols_index(t.write);
                    std::vector<std::size_t> idx(k, 0);
                    while (true) {
                        std::size_t eps_code = 0;
                        std::uint64_t h_code = 0;
                        for (std::size_t i = 0; i < k; ++i) {
                            int e = eps_choices[i][idx[i]];
                            int d = move_delta(t.move[i]);
                            eps_code = eps_code * 5 + static_cast<std::size_t>(e + 2);
                            int h = e == 0 ? 3 : 2 * d - e + 1;
                            h_code = h_code * 4 + static_cast<std::uint64_t>(h);
                        }
                        std::uint64_t vec = (static_cast<std::uint64_t>(ri) * sym_space + tau) * eps_space + eps_code;
                        std::uint64_t comp = (static_cast<std::uint64_t>(t.next) << 36) ^ h_code;
                        by_comp[comp].push_back({vec, &t.amplitude, n0, n1, eps_code});
                        std::size_t i = 0;
                        while (i < k && ++idx[i] == eps_choices[i].size()) idx[i++] = 0;
                        if (i == k) break;
                    }
                }
            std::map<std::pair<std::uint64_t, std::uint64_t>, detail::Sqrt3Pair<S>> dots;
            for (auto &[comp, list] : by_comp)
                for (std::size_t i = 0; i < list.size(); ++i)
                    for (std::size_t j = i + 1; j < list.size(); ++j) {
                        const auto *x = &list[i];
                        const auto *y = &list[j];
                        if (x->eps == y->eps) continue;
                        if (x->vec > y->vec) std::swap(x, y);
                        dots[{x->vec, y->vec}].add(conj(*x->amp) * *y->amp, x->n0 + y->n0, x->n1 + y->n1);
                    }
            auto vec_label = [&](std::uint64_t v) {
                std::size_t eps_code = v % eps_space;
                std::uint64_t rest = v / eps_space;
                std::size_t tau = rest % sym_space;
                std::size_t ri = rest / sym_space;
                SymbolVec tv = m.decode_symbols(tau);
                std::string s = m.row_label(ri) + " tau=";
                for (std::size_t i = 0; i < k; ++i) s += (i ? "," : "") + m.tapes[i].names[tv[i]];
                std::vector<int> e(k);
                for (std::size_t i = k; i-- > 0;) {
                    e[i] = static_cast<int>(eps_code % 5) - 2;
                    eps_code /= 5;
                }
                s += " eps=";
                for (std::size_t i = 0; i < k; ++i) s += (i ? "," : "") + std::to_string(e[i]);
                return s;
            };
            for (auto &[pr, v] : dots)
                if (!v.vanishes(tol))
                    add(Condition::Separability, vec_label(pr.first) + " . " + vec_label(pr.second), v.magnitude());
        }
    }
    rep.passed = rep.violations.empty();
    return rep;
}

// Move vector shared by every entry arriving in each state, if consistent.
template <class S>
std::map<StateId, MoveVec> arrival_directions(const MachineSpec<S> &m, std::vector<StateId> *conflicts = nullptr) {
    std::map<StateId, MoveVec> out;
    for (std::size_t ri = 0; ri < m.row_count(); ++ri)
        for (auto &t : m.row_at(ri)) {
            auto [it, ins] = out.emplace(t.next, t.move);
            if (!ins && it->second != t.move && conflicts &&
                std::find(conflicts->begin(), conflicts->end(), t.next) == conflicts->end())
                conflicts->push_back(t.next);
        }
    return out;
}

}  // namespace qtm
