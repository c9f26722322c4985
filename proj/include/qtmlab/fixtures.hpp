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

#include <array>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qtmlab/constructions.hpp"

namespace qtm::fixtures {

// Maps on one {#,0,1} cell, indexed [read][write] in the order #, 0, 1.
template <class S>
using Cell3 = std::array<std::array<S, 3>, 3>;

template <class S>
std::array<Symbol, 3> cell_symbols(const MachineBuilder<S> &b, int tape) {
    return {kBlank, b.sym(tape, "0"), b.sym(tape, "1")};
}

template <class S>
void cell_op(MachineBuilder<S> &b, StateId p, int tape, const Cell3<S> &u, StateId next,
             const typename MachineBuilder<S>::Writes &guard = {}) {
    auto sy = cell_symbols(b, tape);
    for (int r = 0; r < 3; ++r) {
        std::vector<typename MachineBuilder<S>::Out> outs;
        for (int w = 0; w < 3; ++w)
            if (!is_zero(u[r][w])) outs.push_back({u[r][w], next, {{tape, sy[w]}}});
        auto read = guard;
        read.push_back({tape, sy[r]});
        b.rule(p, read, outs);
    }
}

template <class S>
Cell3<S> cell_identity() {
    Cell3<S> u{};
    for (int i = 0; i < 3; ++i) u[i][i] = S(1);
    return u;
}

template <class S>
Cell3<S> cell_swap(int a, int c) {
    auto u = cell_identity<S>();
    u[a][a] = u[c][c] = S(0);
    u[a][c] = u[c][a] = S(1);
    return u;
}

// Symmetric orthogonal reflection sending # to (|0> + |1>)/sqrt2.
template <class S>
Cell3<S> cell_reflection() {
    S a = inv_sqrt2<S>(), h = S(1) / S(2);
    return {{{S(0), a, a}, {a, h, S(-h)}, {a, S(-h), h}}};
}

// # -> c|0> + s|1>, 0 -> s|0> - c|1>, 1 -> #.
template <class S>
Cell3<S> cell_rotation(S c, S s) {
    return {{{S(0), c, s}, {S(0), s, S(-c)}, {S(1), S(0), S(0)}}};
}

inline std::vector<Alphabet> io_tapes() { return {Alphabet::make({"0", "1"}, {}), Alphabet::make({}, {"0", "1"})}; }

inline TapeRoles io_roles() {
    TapeRoles r;
    r.input = 0;
    r.output = 1;
    return r;
}

// q0 applies each op in turn to the output cell, then one identity step into qf.
template <class S>
MachineSpec<S> output_chain(const std::string &name, const std::vector<Cell3<S>> &ops) {
    MachineBuilder<S> b(name, io_tapes(), io_roles());
    std::vector<StateId> q;
    for (std::size_t i = 0; i <= ops.size(); ++i) q.push_back(b.add_state("q" + std::to_string(i)));
    StateId f = b.add_state("qf", {}, true);
    for (std::size_t i = 0; i < ops.size(); ++i) cell_op(b, q[i], 1, ops[i], q[i + 1]);
    b.pass(q.back(), f);
    b.set_initial(q.front());
    return b.finish();
}

template <class S = Exact>
MachineSpec<S> had() {
    return output_chain<S>("had", {cell_reflection<S>()});
}

template <class S = Exact>
MachineSpec<S> hh() {
    return output_chain<S>("hh", {cell_reflection<S>(), cell_reflection<S>()});
}

template <class S = Exact>
MachineSpec<S> one() {
    return output_chain<S>("one", {cell_swap<S>(0, 2)});
}

template <class S = Exact>
MachineSpec<S> zero() {
    return output_chain<S>("zero", {cell_swap<S>(0, 1)});
}

// Accepts with probability 16/25 when the first input symbol is 1, else 9/25.
template <class S = Exact>
MachineSpec<S> bias() {
    MachineBuilder<S> b("bias", io_tapes(), io_roles());
    StateId q0 = b.add_state("q0"), q1 = b.add_state("q1"), f = b.add_state("qf", {}, true);
    S three = S(3) / S(5), four = S(4) / S(5);
    auto in = cell_symbols(b, 0);
    cell_op(b, q0, 1, cell_rotation<S>(three, four), q1, {{0, in[2]}});
    cell_op(b, q0, 1, cell_rotation<S>(four, three), q1, {{0, in[1]}});
    cell_op(b, q0, 1, cell_rotation<S>(four, three), q1, {{0, in[0]}});
    b.pass(q1, f);
    b.set_initial(q0);
    return b.finish();
}

// Output equals the first input bit.
template <class S = Exact>
MachineSpec<S> copy_bit() {
    MachineBuilder<S> b("copy", io_tapes(), io_roles());
    StateId q0 = b.add_state("q0"), q1 = b.add_state("q1"), f = b.add_state("qf", {}, true);
    auto in = cell_symbols(b, 0);
    cell_op(b, q0, 1, cell_identity<S>(), q1, {{0, in[0]}});
    cell_op(b, q0, 1, cell_swap<S>(0, 1), q1, {{0, in[1]}});
    cell_op(b, q0, 1, cell_swap<S>(0, 2), q1, {{0, in[2]}});
    b.pass(q1, f);
    b.set_initial(q0);
    return b.finish();
}

// Branch 1 halts at time 2, branch 0 at time 3.
template <class S = Exact>
MachineSpec<S> desync() {
    MachineBuilder<S> b("desync", io_tapes(), io_roles());
    StateId q0 = b.add_state("q0"), q1 = b.add_state("q1"), q2 = b.add_state("q2"), f = b.add_state("qf", {}, true);
    auto o = cell_symbols(b, 1);
    cell_op(b, q0, 1, cell_reflection<S>(), q1);
    b.rule(q1, {{1, o[2]}}, {{S(1), f, {}}});
    b.rule(q1, {{1, o[1]}}, {{S(1), q2, {}}});
    b.rule(q2, {{1, o[1]}}, {{S(1), f, {}}});
    b.set_initial(q0);
    return b.finish();
}

// Queries the word 0 once and accepts iff the answer bit is 1.
template <class S = Exact>
MachineSpec<S> q1() {
    std::vector<Alphabet> tapes{Alphabet::make({"0", "1"}, {}), Alphabet::make({}, {"0", "1"}),
                                Alphabet::make({}, {"0", "1"})};
    TapeRoles roles;
    roles.input = 0;
    roles.query = 1;
    roles.output = 2;
    MachineBuilder<S> b("q1", tapes, roles);
    const int Q = 1, O = 2;
    auto qs = cell_symbols(b, Q);
    auto os = cell_symbols(b, O);
    StateId s0 = b.add_state("s0");
    StateId s1 = b.add_state("s1", b.moves({{Q, Move::R}}));
    StateId pre = b.add_state("pre", b.moves({{Q, Move::L}}));
    StateId post = b.add_state("post");
    StateId rd = b.add_state("rd", b.moves({{Q, Move::R}}));
    StateId f = b.add_state("qf", {}, true);
    b.rule(s0, {{Q, kBlank}}, {{S(1), s1, {{Q, qs[1]}}}});
    b.rule(s1, {{Q, kBlank}}, {{S(1), pre, {{Q, qs[1]}}}});
    b.pass(pre, post);
    b.set_query_states(pre, post);
    b.pass(post, rd);
    b.rule(rd, {{Q, qs[2]}, {O, kBlank}}, {{S(1), f, {{O, os[2]}}}});
    b.rule(rd, {{Q, qs[1]}, {O, kBlank}}, {{S(1), f, {{O, os[1]}}}});
    b.set_initial(s0);
    return b.finish();
}

// Queries the word 0 twice and accepts iff the answer bit is back to 0.
template <class S = Exact>
MachineSpec<S> q2() {
    std::vector<Alphabet> tapes{Alphabet::make({"0", "1"}, {}), Alphabet::make({}, {"0", "1"}),
                                Alphabet::make({}, {"m"}), Alphabet::make({}, {"0", "1"})};
    TapeRoles roles;
    roles.input = 0;
    roles.query = 1;
    roles.output = 3;
    MachineBuilder<S> b("q2", tapes, roles);
    const int Q = 1, W = 2, O = 3;
    auto qs = cell_symbols(b, Q);
    auto os = cell_symbols(b, O);
    Symbol mark = b.sym(W, "m");
    StateId s0 = b.add_state("s0");
    StateId s1 = b.add_state("s1", b.moves({{Q, Move::R}}));
    StateId pre = b.add_state("pre", b.moves({{Q, Move::L}}));
    StateId post = b.add_state("post");
    StateId r1 = b.add_state("r1", b.moves({{Q, Move::R}}));
    StateId r2 = b.add_state("r2", b.moves({{Q, Move::R}}));
    StateId f = b.add_state("qf", {}, true);
    b.rule(s0, {{Q, kBlank}}, {{S(1), s1, {{Q, qs[1]}}}});
    b.rule(s1, {{Q, kBlank}, {W, kBlank}}, {{S(1), pre, {{Q, qs[1]}}}});
    b.pass(pre, post);
    b.set_query_states(pre, post);
    b.rule(post, {{W, kBlank}}, {{S(1), r1, {}}});
    b.rule(post, {{W, mark}}, {{S(1), r2, {}}});
    b.rule(r1, {{W, kBlank}}, {{S(1), pre, {{W, mark}}}});
    b.rule(r2, {{Q, qs[1]}, {O, kBlank}}, {{S(1), f, {{O, os[2]}}}});
    b.rule(r2, {{Q, qs[2]}, {O, kBlank}}, {{S(1), f, {{O, os[1]}}}});
    b.set_initial(s0);
    return b.finish();
}

// Lists the word 0, queries it, then queries the answer bit as a word.
template <class S = Exact>
MachineSpec<S> adapt() {
    std::vector<Alphabet> tapes{Alphabet::make({"0", "1"}, {}), Alphabet::make({}, {"0", "1"}),
                                Alphabet::make({}, {"0", "1", "/"}), Alphabet::make({}, {"m0", "m1"}),
                                Alphabet::make({}, {"0", "1"})};
    TapeRoles roles;
    roles.input = 0;
    roles.query = 1;
    roles.qlist = 2;
    roles.output = 4;
    MachineBuilder<S> b("adapt", tapes, roles);
    const int Q = 1, QL = 2, W = 3, O = 4;
    auto qs = cell_symbols(b, Q);
    auto os = cell_symbols(b, O);
    Symbol marks[2] = {b.sym(W, "m0"), b.sym(W, "m1")};
    MoveVec right = b.moves({{Q, Move::R}}), left = b.moves({{Q, Move::L}});
    StateId s0 = b.add_state("s0");
    StateId s1 = b.add_state("s1", right);
    StateId pre = b.add_state("pre", left);
    StateId post = b.add_state("post");
    StateId a1 = b.add_state("a1", right);
    StateId a2 = b.add_state("a2", right);
    StateId c[2] = {b.add_state("c0", left), b.add_state("c1", left)};
    StateId d[2] = {b.add_state("d0", right), b.add_state("d1", right)};
    StateId f = b.add_state("qf", {}, true);
    b.rule(s0, {{Q, kBlank}, {QL, kBlank}}, {{S(1), s1, {{Q, qs[1]}, {QL, b.sym(QL, "0")}}}});
    b.rule(s1, {{Q, kBlank}, {W, kBlank}}, {{S(1), pre, {{Q, qs[1]}}}});
    b.pass(pre, post);
    b.set_query_states(pre, post);
    b.rule(post, {{W, kBlank}}, {{S(1), a1, {}}});
    for (int v = 0; v < 2; ++v) {
        b.rule(post, {{W, marks[v]}}, {{S(1), a2, {}}});
        b.rule(a1, {{Q, qs[1 + v]}}, {{S(1), c[v], {{Q, qs[1]}}}});
        b.rule(c[v], {{Q, qs[1]}}, {{S(1), d[v], {{Q, qs[1 + v]}}}});
        b.rule(d[v], {{W, kBlank}}, {{S(1), pre, {{W, marks[v]}}}});
    }
    b.rule(a2, {{Q, qs[2]}, {O, kBlank}}, {{S(1), f, {{O, os[2]}}}});
    b.rule(a2, {{Q, qs[1]}, {O, kBlank}}, {{S(1), f, {{O, os[1]}}}});
    b.set_initial(s0);
    return b.finish();
}

// Writes a one-word query list and halts without querying.
template <class S = Exact>
MachineSpec<S> lister() {
    std::vector<Alphabet> tapes{Alphabet::make({"0", "1"}, {}), Alphabet::make({}, {"0", "1", "/"}),
                                Alphabet::make({}, {"0", "1"})};
    TapeRoles roles;
    roles.input = 0;
    roles.qlist = 1;
    roles.output = 2;
    MachineBuilder<S> b("lister", tapes, roles);
    StateId q0 = b.add_state("q0"), q1 = b.add_state("q1"), f = b.add_state("qf", {}, true);
    b.rule(q0, {{1, kBlank}}, {{S(1), q1, {{1, b.sym(1, "0")}}}});
    b.pass(q1, f);
    b.set_initial(q0);
    return b.finish();
}

inline std::vector<Alphabet> verifier_tapes() {
    return {Alphabet::make({"0", "1"}, {}), Alphabet::make({}, {"0", "1"}), Alphabet::make({}, {"0", "1"})};
}

inline TapeRoles verifier_roles() {
    TapeRoles r;
    r.input = 0;
    r.output = 2;
    return r;
}

inline constexpr int kWitnessTape = 1;

// Accepts iff the witness qubit is |1>.
template <class S = Exact>
MachineSpec<S> verifier_bit() {
    MachineBuilder<S> b("vbit", verifier_tapes(), verifier_roles());
    StateId q0 = b.add_state("q0"), q1 = b.add_state("q1"), f = b.add_state("qf", {}, true);
    auto w = cell_symbols(b, 1);
    auto o = cell_symbols(b, 2);
    b.rule(q0, {{1, w[2]}, {2, kBlank}}, {{S(1), q1, {{2, o[2]}}}});
    b.rule(q0, {{1, w[1]}, {2, kBlank}}, {{S(1), q1, {{2, o[1]}}}});
    b.pass(q1, f);
    b.set_initial(q0);
    return b.finish();
}

// Hadamard on the witness qubit, then accepts iff it reads 0.
template <class S = Exact>
MachineSpec<S> verifier_plus() {
    MachineBuilder<S> b("vplus", verifier_tapes(), verifier_roles());
    StateId q0 = b.add_state("q0"), q1 = b.add_state("q1"), f = b.add_state("qf", {}, true);
    auto w = cell_symbols(b, 1);
    auto o = cell_symbols(b, 2);
    S r = inv_sqrt2<S>();
    Cell3<S> h{{{S(1), S(0), S(0)}, {S(0), r, r}, {S(0), r, S(-r)}}};
    cell_op(b, q0, 1, h, q1);
    b.rule(q1, {{1, w[1]}, {2, kBlank}}, {{S(1), f, {{2, o[2]}}}});
    b.rule(q1, {{1, w[2]}, {2, kBlank}}, {{S(1), f, {{2, o[1]}}}});
    b.set_initial(q0);
    return b.finish();
}

// Ignores the witness and accepts with probability 1/2.
template <class S = Exact>
MachineSpec<S> verifier_blind() {
    MachineBuilder<S> b("vblind", verifier_tapes(), verifier_roles());
    StateId q0 = b.add_state("q0"), q1 = b.add_state("q1"), f = b.add_state("qf", {}, true);
    cell_op(b, q0, 2, cell_reflection<S>(), q1);
    b.pass(q1, f);
    b.set_initial(q0);
    return b.finish();
}

inline Approx gaussian_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    double re = n(rng);
    return {re, n(rng)};
}

// Haar-like random unitary by Gram-Schmidt on a complex Gaussian matrix; rows are orthonormal.
inline std::vector<std::vector<Approx>> random_unitary(std::size_t d, std::mt19937_64 &rng) {
    std::vector<std::vector<Approx>> u(d, std::vector<Approx>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (auto &x : u[i]) x = gaussian_complex(rng);
        for (std::size_t j = 0; j < i; ++j) {
            Approx c = 0;
            for (std::size_t k = 0; k < d; ++k) c += std::conj(u[j][k]) * u[i][k];
            for (std::size_t k = 0; k < d; ++k) u[i][k] -= c * u[j][k];
        }
        double n = 0;
        for (auto &x : u[i]) n += std::norm(x);
        n = std::sqrt(n);
        for (auto &x : u[i]) x /= n;
    }
    return u;
}

inline Cell3<Approx> random_cell(std::mt19937_64 &rng) {
    auto u = random_unitary(3, rng);
    Cell3<Approx> c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = u[i][j];
    return c;
}

// Random unitaries on each witness cell conditioned on the running parity, then a
// parity-conditioned rotation of the output cell.
inline MachineSpec<Approx> random_verifier(int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MachineBuilder<Approx> b("vrand" + std::to_string(p) + "s" + std::to_string(seed), verifier_tapes(),
                             verifier_roles());
    MoveVec right = b.moves({{1, Move::R}});
    std::vector<std::array<StateId, 2>> par(p + 1);
    for (int i = 0; i <= p; ++i)
        for (int pi = 0; pi < 2; ++pi)
            par[i][pi] = b.add_state("p" + std::to_string(i) + "_" + std::to_string(pi), i == 0 ? MoveVec{} : right);
    StateId fin[2] = {b.add_state("f0", {}, true), b.add_state("f1", {}, true)};
    auto w = cell_symbols(b, 1);
    auto o = cell_symbols(b, 2);
    for (int i = 0; i < p; ++i)
        for (int pi = 0; pi < 2; ++pi) {
            auto u = random_unitary(2, rng);
            for (int r = 0; r < 2; ++r) {
                std::vector<MachineBuilder<Approx>::Out> outs;
                for (int v = 0; v < 2; ++v) outs.push_back({u[r][v], par[i + 1][pi ^ v], {{1, w[1 + v]}}});
                b.rule(par[i][pi], {{1, w[1 + r]}}, outs);
            }
        }
    for (int pi = 0; pi < 2; ++pi) {
        auto u = random_unitary(2, rng);
        for (int r = 0; r < 2; ++r) {
            std::vector<MachineBuilder<Approx>::Out> outs;
            for (int v = 0; v < 2; ++v) outs.push_back({u[r][v], fin[pi], {{2, o[1 + v]}}});
            b.rule(par[p][pi], {{2, o[r]}}, outs);
        }
    }
    b.set_initial(par[0][0]);
    return b.finish();
}

// Random unitaries on successive work cells, conditioned on the first input symbol,
// followed by one on the output cell. Every run halts at time layers + 1.
inline MachineSpec<Approx> random_layered(int layers, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Alphabet> tapes{Alphabet::make({"0", "1"}, {}), Alphabet::make({}, {"0", "1"}),
                                Alphabet::make({}, {"0", "1"})};
    TapeRoles roles;
    roles.input = 0;
    roles.output = 2;
    MachineBuilder<Approx> b("rand" + std::to_string(layers) + "s" + std::to_string(seed), tapes, roles);
    MoveVec right = b.moves({{1, Move::R}});
    std::vector<StateId> l;
    for (int i = 0; i <= layers; ++i) l.push_back(b.add_state("l" + std::to_string(i), i == 0 ? MoveVec{} : right));
    StateId f = b.add_state("qf", {}, true);
    auto in = cell_symbols(b, 0);
    for (int i = 0; i < layers; ++i)
        for (Symbol a : in) cell_op(b, l[i], 1, random_cell(rng), l[i + 1], {{0, a}});
    cell_op(b, l[layers], 2, random_cell(rng), f);
    b.set_initial(l[0]);
    return b.finish();
}

inline std::vector<Alphabet> predicate_tapes() {
    return {Alphabet::make({"0", "1"}, {}), Alphabet::make({}, kQuadSymbols), Alphabet::make({}, {"0", "1"})};
}

// Witness symbols as indices 0..3; the input symbol as 0 (#), 1 ('0') or 2 ('1').
using PredicateRule = std::function<bool(int, const std::vector<int> &)>;

// Deterministic permutation machine reading the first input cell and p witness cells.
template <class S = Exact>
MachineSpec<S> lookup_predicate(const std::string &name, int p, const PredicateRule &accept) {
    TapeRoles roles;
    roles.input = 0;
    roles.output = 2;
    MachineBuilder<S> b(name, predicate_tapes(), roles);
    const int W = 1;
    StateId init = b.add_state("start");
    StateId f = b.add_state("done", b.moves({{W, Move::R}}), true);
    std::vector<Symbol> quad;
    for (auto &s : kQuadSymbols) quad.push_back(b.sym(W, s));
    auto in = cell_symbols(b, 0);
    for (int a = 0; a < 3; ++a) {
        StateId entry = pattern_decide<S>(
            b, "x" + std::to_string(a) + "w", W, {}, p, quad, MoveVec{}, 2,
            [&](const std::vector<int> &y) { return accept(a, y); }, f, {{0, in[a]}});
        b.rule(init, {{0, in[a]}}, {{S(1), entry, {}}});
    }
    b.set_initial(init);
    return b.finish();
}

struct PredicateCase {
    std::string name;
    int p;
    PredicateRule rule;
};

inline std::vector<PredicateCase> predicate_cases() {
    auto count = [](const std::vector<int> &y, int s) { return std::count(y.begin(), y.end(), s); };
    return {
        {"pnone1", 1, [](int, const std::vector<int> &) { return false; }},
        {"plow1", 1, [](int, const std::vector<int> &y) { return y[0] < 2; }},
        {"pall1", 1, [](int, const std::vector<int> &) { return true; }},
        {"pmatch1", 1, [](int a, const std::vector<int> &y) { return y[0] == a; }},
        {"podd1", 1, [](int a, const std::vector<int> &y) { return (y[0] + a) % 2 == 1; }},
        {"pnone2", 2, [](int, const std::vector<int> &) { return false; }},
        {"pall2", 2, [](int, const std::vector<int> &) { return true; }},
        {"peq2", 2, [](int, const std::vector<int> &y) { return y[0] == y[1]; }},
        {"pthree2", 2, [count](int, const std::vector<int> &y) { return count(y, 3) > 0; }},
        {"pgate2", 2, [](int a, const std::vector<int> &y) { return a == 2 ? y[0] < y[1] : y[0] + y[1] == 3; }},
    };
}

// Three single-row defects, each visible from a reachable initial configuration.
template <class S>
std::vector<std::pair<std::string, MachineSpec<S>>> defect_variants(const MachineSpec<S> &m) {
    auto sigma = [&](std::string_view x) { return initial_configuration(m, x).read(); };
    std::vector<std::pair<std::string, MachineSpec<S>>> out;
    auto scaled = m;
    for (auto &t : scaled.mutable_row(m.initial, sigma(""))) t.amplitude = t.amplitude * S(9) / S(10);
    out.emplace_back("rescale", std::move(scaled));
    auto dup = m;
    dup.mutable_row(m.initial, sigma("0")) = m.row(m.initial, sigma("1"));
    out.emplace_back("duplicate", std::move(dup));
    auto blank = m;
    blank.mutable_row(m.initial, sigma("0")) = m.row(m.initial, sigma(""));
    out.emplace_back("blank-row", std::move(blank));
    return out;
}

// Random unit vector over configurations near the start cell.
template <class S>
Superposition<Approx> random_superposition(const MachineSpec<S> &m, std::mt19937_64 &rng, std::size_t support,
                                           int radius = 1) {
    std::uniform_int_distribution<int> head(-radius, radius);
    std::uniform_int_distribution<StateId> state(0, static_cast<StateId>(m.state_count() - 1));
    Superposition<Approx> psi;
    while (psi.size() < support) {
        Configuration c;
        c.state = state(rng);
        c.heads.resize(m.tape_count());
        c.tapes.resize(m.tape_count());
        for (std::size_t t = 0; t < m.tape_count(); ++t) {
            c.heads[t] = head(rng);
            std::uniform_int_distribution<int> sym(0, static_cast<int>(m.tapes[t].size()) - 1);
            for (int pos = -radius; pos <= radius + 1; ++pos) c.tapes[t].set(pos, static_cast<Symbol>(sym(rng)));
        }
        psi.add(c, gaussian_complex(rng));
    }
    double n = std::sqrt(psi.norm2());
    psi.scale(Approx(1.0 / n, 0.0));
    return psi;
}

struct NamedFixture {
    std::string file;
    MachineSpec<Exact> machine;
};

// Machines shipped under fixtures/ in the description format.
inline std::vector<NamedFixture> bundled() {
    return {
        {"had.qtm", had()},
        {"hh.qtm", hh()},
        {"one.qtm", one()},
        {"zero.qtm", zero()},
        {"bias.qtm", bias()},
        {"copy.qtm", copy_bit()},
        {"desync.qtm", desync()},
        {"q1.qtm", q1()},
        {"q2.qtm", q2()},
        {"adapt.qtm", adapt()},
        {"lister.qtm", lister()},
        {"dj1.qtm", dj_machine<Exact>(1)},
        {"dj2.qtm", dj_machine<Exact>(2)},
        {"dj4.qtm", dj_machine<Exact>(4)},
        {"vbit.qtm", verifier_bit()},
        {"vplus.qtm", verifier_plus()},
        {"vblind.qtm", verifier_blind()},
        {"mix_had_zero.qtm", mixture_machine(had(), zero())},
        {"had2.qtm", seq_repeat(had(), 2)},
        {"pmatch1.qtm", lookup_predicate("pmatch1", 1, predicate_cases()[3].rule)},
    };
}

// Oracle files shipped next to the machines.
inline std::vector<std::pair<std::string, Oracle>> bundled_oracles() {
    Oracle zero_word, all4, half4, empty;
    zero_word.insert("0");
    for (auto &w : binary_words(4)) {
        all4.insert(w);
        if (w[0] == '0') half4.insert(w);
    }
    return {{"a_zero.txt", zero_word}, {"a_empty.txt", empty}, {"a_all4.txt", all4}, {"a_half4.txt", half4}};
}

}  // namespace qtm::fixtures
