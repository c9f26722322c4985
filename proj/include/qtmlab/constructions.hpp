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
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "qtmlab/derived.hpp"
#include "qtmlab/oracle.hpp"

namespace qtm {

inline constexpr int kMaxAncilla = 10;
inline constexpr int kMaxDjWidth = 2;

template <class S>
struct GapSquareResult {
    S amplitude{};
    RealOf<S> squared{};
    RealOf<S> rho{};
    std::size_t halt_time = 0;
};

// Sign flip on final configurations whose output start cell holds 0.
template <class S>
Superposition<S> phase_on_output(const MachineSpec<S> &m, const Superposition<S> &psi) {
    auto zero = m.output_alphabet().find("0"), one = m.output_alphabet().find("1");
    Superposition<S> out;
    out.time = psi.time;
    for (auto &[c, a] : psi.entries()) {
        Symbol s = c.tapes[m.roles.output].get(0);
        if (zero && s == *zero) {
            out.set(c, -a);
        } else if (one && s == *one) {
            out.set(c, a);
        } else {
            throw OutputFormError("final output cell is not binary in " + describe(m, c));
        }
    }
    return out;
}

template <class S>
void require_single_final(const MachineSpec<S> &m) {
    if (m.final_states().size() != 1) throw RolePrereqError("machine '" + m.name + "' must have a single final state");
}

template <class S>
GapSquareResult<S> gap_square(const MachineSpec<S> &m, std::string_view x, const RunOptions &opts = {}) {
    require_single_final(m);
    auto res = run(m, x, opts);
    Evolver<S> ev(m, nullptr, opts);
    auto back = evolve_inverse(ev, phase_on_output(m, res.final), res.halt_time);
    GapSquareResult<S> g;
    g.amplitude = amplitude_of(back, initial_configuration(m, x));
    if constexpr (is_exact_v<S>) {
        g.squared = norm2(g.amplitude);
    } else {
        g.squared = std::norm(g.amplitude);
    }
    g.rho = res.accept;
    g.halt_time = res.halt_time;
    return g;
}

struct EstimationRow {
    std::size_t ell;
    double probability;
    std::size_t folded;
    double estimate;
};

struct EstimationOutcome {
    int k = 0;
    double accuracy = 0;
    double rho = 0;
    double theta = 0;
    std::vector<EstimationRow> table;
    double success_prob = 0;
    double total = 0;
};

inline std::size_t fold_outcome(std::size_t ell, std::size_t n) { return ell <= n / 2 ? ell : n - ell; }

inline double grid_estimate(std::size_t folded, std::size_t n) {
    double s = std::sin(std::numbers::pi * static_cast<double>(folded) / static_cast<double>(n));
    return s * s;
}

// Phase estimation of Q = U^T S_x U^-T (-P) at register level.
template <class S>
EstimationOutcome amplitude_estimate(const MachineSpec<S> &m, std::string_view x, int k, double accuracy,
                                     int max_k = kMaxAncilla, const RunOptions &opts = {}) {
    if (k < 1 || k > max_k)
        throw AncillaWidthError("ancilla width " + std::to_string(k) + " outside 1.." + std::to_string(max_k));
    require_single_final(m);
    auto res = run(m, x, opts);
    Evolver<S> ev(m, nullptr, opts);
    const std::size_t t = res.halt_time;
    const Configuration init = initial_configuration(m, x);
    auto apply_q = [&](const Superposition<S> &v) {
        auto w = evolve_inverse(ev, phase_on_output(m, v), t);
        auto it = w.entries().find(init);
        if (it != w.entries().end()) it->second = -it->second;
        return evolve(ev, std::move(w), t);
    };
    const std::size_t n = std::size_t(1) << k;
    std::vector<Superposition<S>> powers;
    powers.reserve(n);
    powers.push_back(res.final);
    for (std::size_t j = 1; j < n; ++j) powers.push_back(apply_q(powers.back()));
    std::unordered_map<Configuration, std::size_t, ConfigurationHash> basis;
    for (auto &p : powers)
        for (auto &[c, a] : p.entries()) basis.try_emplace(c, basis.size());
    std::vector<std::vector<std::complex<double>>> cols(basis.size(), std::vector<std::complex<double>>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (auto &[c, a] : powers[j].entries()) cols[basis[c]][j] = to_complex(a);
    EstimationOutcome out;
    out.k = k;
    out.accuracy = accuracy;
    out.rho = res.rho();
    out.theta = std::asin(std::sqrt(std::clamp(out.rho, 0.0, 1.0)));
    std::vector<std::complex<double>> omega(n);
    for (std::size_t j = 0; j < n; ++j) omega[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    for (std::size_t ell = 0; ell < n; ++ell) {
        double p = 0;
        for (auto &col : cols) {
            std::complex<double> acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += omega[(j * ell) % n] * col[j];
            p += std::norm(acc);
        }
        p /= static_cast<double>(n) * static_cast<double>(n);
        std::size_t folded = fold_outcome(ell, n);
        double est = grid_estimate(folded, n);
        out.table.push_back({ell, p, folded, est});
        out.total += p;
        if (std::abs(est - out.rho) < accuracy) out.success_prob += p;
    }
    return out;
}

inline int ancilla_width_for(int p) {
    int lg = 0;
    while ((1 << lg) < p) ++lg;
    return lg + 3;
}

// Reads cells 0..len-1 of `tape` into control, xors decide(pattern) into the output cell,
// uncomputes the pattern and leaves through `exit` (which must arrive with R on the moving tapes).
template <class S>
StateId pattern_decide(MachineBuilder<S> &b, const std::string &prefix, int tape, std::vector<int> moving, int len,
                       const std::vector<Symbol> &alphabet, const MoveVec &entry_arrival, int out_tape,
                       const std::function<bool(const std::vector<int> &)> &decide, StateId exit,
                       const typename MachineBuilder<S>::Writes &guard = {}) {
    moving.push_back(tape);
    MoveVec right(b.tape_count(), Move::N), left(b.tape_count(), Move::N);
    for (int t : moving) {
        right[t] = Move::R;
        left[t] = Move::L;
    }
    const int base = static_cast<int>(alphabet.size());
    auto label = [&](const std::vector<int> &s) {
        std::string n = prefix;
        for (int c : s) n += std::to_string(c);
        return n;
    };
    std::map<std::vector<int>, StateId> scan, undo;
    std::vector<std::vector<int>> layer{{}};
    std::vector<std::vector<int>> all{{}};
    scan[{}] = b.add_state(label({}) + "s", entry_arrival);
    for (int i = 0; i < len; ++i) {
        std::vector<std::vector<int>> next;
        for (auto &s : layer)
            for (int c = 0; c < base; ++c) {
                auto t = s;
                t.push_back(c);
                scan[t] = b.add_state(label(t) + "s", right);
                next.push_back(t);
                all.push_back(t);
            }
        layer = std::move(next);
    }
    for (auto &s : all) undo[s] = b.add_state(label(s) + "u", left);
    Symbol zero = b.sym(out_tape, "0"), one = b.sym(out_tape, "1");
    auto with_guard = [&](typename MachineBuilder<S>::Writes r) {
        r.insert(r.end(), guard.begin(), guard.end());
        return r;
    };
    for (auto &s : all) {
        if (static_cast<int>(s.size()) < len) {
            for (int c = 0; c < base; ++c) {
                auto t = s;
                t.push_back(c);
                b.rule(scan[s], with_guard({{tape, alphabet[c]}}), {{S(1), scan[t], {}}});
            }
        } else {
            bool bit = decide(s);
            for (Symbol o : {kBlank, zero, one}) {
                Symbol w = bit ? (o == kBlank ? one : o == one ? kBlank : o) : (o == kBlank ? zero : o == zero ? kBlank : o);
                b.rule(scan[s], with_guard({{out_tape, o}}), {{S(1), undo[s], {{out_tape, w}}}});
            }
        }
        if (!s.empty()) {
            auto t = s;
            t.pop_back();
            b.rule(undo[s], with_guard({{tape, alphabet[s.back()]}}), {{S(1), undo[t], {}}});
        }
    }
    b.rule(undo[{}], guard, {{S(1), exit, {}}});
    return scan[{}];
}

template <class S>
void require_permutation(const MachineSpec<S> &m) {
    for (std::size_t ri = 0; ri < m.row_count(); ++ri) {
        auto &row = m.row_at(ri);
        bool ok = row.size() == 1 && near(row[0].amplitude, S(1));
        if (!ok) throw NotPermutationError("row " + m.row_label(ri) + " is not a 0/1 permutation row");
    }
}

template <class S>
int default_witness_tape(const MachineSpec<S> &m) {
    for (int i = 0; i < static_cast<int>(m.tape_count()); ++i) {
        if (i == m.roles.input || i == m.roles.output) continue;
        if ((m.roles.query && *m.roles.query == i) || (m.roles.qlist && *m.roles.qlist == i)) continue;
        return i;
    }
    throw RolePrereqError("predicate has no witness tape");
}

// H2 on p fresh four-symbol cells, copy of the observed word onto the witness tape, then the predicate.
template <class S>
MachineSpec<S> sharp_p_embed(const MachineSpec<S> &pred, int p, int witness_tape = -1) {
    require_permutation(pred);
    if (p < 1) throw UsageError("witness length must be positive");
    int w = witness_tape < 0 ? default_witness_tape(pred) : witness_tape;
    if (w < 0 || w >= static_cast<int>(pred.tape_count()) || w == pred.roles.input || w == pred.roles.output)
        throw RoleError("bad witness tape");
    auto tapes = pred.tapes;
    for (auto &s : kQuadSymbols)
        if (!pred.tapes[w].find(s)) throw AlphabetError("witness tape lacks symbol '" + s + "'");
    tapes.push_back(Alphabet::make({}, kQuadSymbols));
    int z = static_cast<int>(tapes.size()) - 1;
    MachineBuilder<S> b("embed." + pred.name + "." + std::to_string(p), tapes, pred.roles);
    auto cp = b.add_copy(pred, "p.", identity_tape_map(pred));
    MoveVec right = b.moves({{z, Move::R}, {w, Move::R}}), left = b.moves({{z, Move::L}, {w, Move::L}});
    std::vector<StateId> split(p), copy(p), back(p);
    for (int i = 0; i < p; ++i) {
        split[i] = b.add_state("h" + std::to_string(i), i == 0 ? MoveVec{} : right);
        copy[i] = b.add_state("c" + std::to_string(i));
    }
    for (int i = 0; i < p; ++i) back[i] = b.add_state("ret" + std::to_string(i), i == p - 1 ? MoveVec{} : left);
    StateId fin = b.add_state("done", {}, true);
    Symbol zq[4], wq[4];
    for (int j = 0; j < 4; ++j) {
        zq[j] = b.sym(z, kQuadSymbols[j]);
        wq[j] = b.sym(w, kQuadSymbols[j]);
    }
    const int h2[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
    Symbol row_in[4] = {kBlank, zq[1], zq[2], zq[3]};
    S half = S(1) / S(2);
    for (int i = 0; i < p; ++i) {
        for (int r = 0; r < 4; ++r) {
            std::vector<typename MachineBuilder<S>::Out> outs;
            for (int j = 0; j < 4; ++j) outs.push_back({h2[r][j] > 0 ? half : S(-half), copy[i], {{z, zq[j]}}});
            b.rule(split[i], {{z, row_in[r]}}, outs);
        }
        StateId next = i + 1 < p ? split[i + 1] : back[p - 1];
        for (int j = 0; j < 4; ++j) b.rule(copy[i], {{z, zq[j]}, {w, kBlank}}, {{S(1), next, {{w, wq[j]}}}});
    }
    for (int i = p - 1; i >= 1; --i) b.pass(back[i], back[i - 1]);
    b.pass(back[0], cp.entry);
    b.pass(cp.final, fin);
    b.set_initial(split[0]);
    return b.finish();
}

// Deutsch-Jozsa style machine over words of length len; tapes: input, query, query list, output.
template <class S>
MachineSpec<S> dj_machine(int len) {
    if (len < 1) throw WidthError("word length must be positive");
    std::vector<Alphabet> tapes{Alphabet::make({"0", "1"}, {}), Alphabet::make({}, {"0", "1"}),
                                Alphabet::make({}, {"0", "1", "/"}), Alphabet::make({}, {"0", "1"})};
    TapeRoles roles;
    roles.input = 0;
    roles.query = 1;
    roles.qlist = 2;
    roles.output = 3;
    const int Q = 1, QL = 2, O = 3;
    MachineBuilder<S> b("dj" + std::to_string(len), tapes, roles);
    MoveVec right = b.moves({{Q, Move::R}, {QL, Move::R}}), left = b.moves({{Q, Move::L}, {QL, Move::L}});
    Symbol q0 = b.sym(Q, "0"), q1 = b.sym(Q, "1"), l0 = b.sym(QL, "0"), l1 = b.sym(QL, "1");
    const S r = inv_sqrt2<S>();
    std::vector<StateId> prep(len + 1), copy(len + 1), erase(len + 1), had(len + 1);
    for (int i = 0; i <= len; ++i) prep[i] = b.add_state("prep" + std::to_string(i), i == 0 ? MoveVec{} : right);
    for (int i = len; i >= 0; --i) copy[i] = b.add_state("copy" + std::to_string(i), left);
    StateId pre = b.add_state("qp", right);
    StateId post = b.add_state("qa");
    for (int i = 1; i <= len; ++i) erase[i] = b.add_state("erase" + std::to_string(i), right);
    erase[0] = post;
    for (int i = len; i >= 0; --i) had[i] = b.add_state("had" + std::to_string(i), left);
    StateId done = b.add_state("done", right, true);
    // copy[i] and had[i] sit on cell i-1; index 0 is the cell left of the word.
    for (int i = 0; i < len; ++i) {
        b.rule(prep[i], {{Q, kBlank}}, {{r, prep[i + 1], {{Q, q0}}}, {r, prep[i + 1], {{Q, q1}}}});
        b.rule(prep[i], {{Q, q0}}, {{r, prep[i + 1], {{Q, q0}}}, {-r, prep[i + 1], {{Q, q1}}}});
    }
    b.rule(prep[len], {{Q, kBlank}}, {{r, copy[len], {{Q, q0}}}, {-r, copy[len], {{Q, q1}}}});
    b.rule(prep[len], {{Q, q0}}, {{r, copy[len], {{Q, q0}}}, {r, copy[len], {{Q, q1}}}});
    for (int i = len; i >= 1; --i) {
        b.rule(copy[i], {{Q, q0}, {QL, kBlank}}, {{S(1), copy[i - 1], {{QL, l0}}}});
        b.rule(copy[i], {{Q, q1}, {QL, kBlank}}, {{S(1), copy[i - 1], {{QL, l1}}}});
    }
    b.pass(copy[0], pre);
    b.pass(pre, post);
    b.set_query_states(pre, post);
    for (int i = 0; i < len; ++i) {
        b.rule(erase[i], {{Q, q0}, {QL, l0}}, {{S(1), erase[i + 1], {{QL, kBlank}}}});
        b.rule(erase[i], {{Q, q1}, {QL, l1}}, {{S(1), erase[i + 1], {{QL, kBlank}}}});
    }
    b.pass(erase[len], had[len]);
    for (int i = len; i >= 1; --i) {
        b.rule(had[i], {{Q, q0}}, {{r, had[i - 1], {{Q, q0}}}, {r, had[i - 1], {{Q, q1}}}});
        b.rule(had[i], {{Q, q1}}, {{r, had[i - 1], {{Q, q0}}}, {-r, had[i - 1], {{Q, q1}}}});
    }
    StateId scan = pattern_decide<S>(
        b, "z", Q, {QL}, len, {q0, q1}, right, O,
        [](const std::vector<int> &s) { return std::all_of(s.begin(), s.end(), [](int c) { return c == 0; }); }, done);
    b.pass(had[0], scan);
    b.set_initial(prep[0]);
    return b.finish();
}

struct DjResult {
    double value = 0;
    int width = 0;
    std::size_t members = 0;
    std::size_t words = 0;
    bool deterministic = false;
    RunResult<Exact> run;
};

inline std::vector<std::string> binary_words(int len) {
    std::vector<std::string> out;
    for (std::size_t v = 0; v < (std::size_t(1) << len); ++v) {
        std::string w(len, '0');
        for (int i = 0; i < len; ++i)
            if (v >> (len - 1 - i) & 1) w[i] = '1';
        out.push_back(w);
    }
    return out;
}

inline DjResult dj_value_for_width(const Oracle &a, int len) {
    static std::map<int, MachineSpec<Exact>> cache;
    auto it = cache.find(len);
    if (it == cache.end()) it = cache.emplace(len, dj_machine<Exact>(len)).first;
    Oracle restricted;
    for (auto &y : a.members())
        if (static_cast<int>(y.size()) == len) restricted.insert(y);
    DjResult r;
    r.width = len;
    r.members = restricted.members().size();
    r.words = std::size_t(1) << len;
    auto [res, trace] = run_with_oracle(it->second, restricted, "");
    r.value = res.rho();
    r.deterministic = is_zero(res.accept) || is_zero(res.reject);
    r.run = std::move(res);
    return r;
}

inline DjResult dj_oracle_value(const Oracle &a, int n, int bound = kMaxDjWidth) {
    if (n < 1 || n > bound) throw WidthError("n = " + std::to_string(n) + " outside 1.." + std::to_string(bound));
    return dj_value_for_width(a, n * n);
}

inline std::string pair_strings(const std::string &x, const std::string &y) {
    return std::string(x.size(), '1') + "0" + x + y;
}

struct BvOutcome {
    std::string hidden;
    std::map<std::string, double> distribution;
    double hidden_prob = 0;
    double total = 0;
};

inline void walsh_hadamard(std::vector<double> &v) {
    for (std::size_t h = 1; h < v.size(); h <<= 1)
        for (std::size_t i = 0; i < v.size(); i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                double a = v[j], b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
    double s = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (auto &x : v) x *= s;
}

inline BvOutcome bv_recover(const Oracle &b, const std::string &x, int p, double fidelity) {
    if (p < 1 || p > 20) throw WidthError("output length outside 1..20");
    if (fidelity < 0 || fidelity > 1) throw UsageError("fidelity outside [0,1]");
    auto words = binary_words(p);
    auto bit = [&](const std::string &z) { return b.contains(pair_strings(x, z)); };
    std::string hidden(p, '0');
    for (int i = 0; i < p; ++i) {
        std::string e(p, '0');
        e[i] = '1';
        if (bit(e)) hidden[i] = '1';
    }
    auto dotp = [&](const std::string &z) {
        int s = 0;
        for (int i = 0; i < p; ++i) s ^= (hidden[i] == '1') & (z[i] == '1');
        return s;
    };
    for (auto &z : words)
        if (bit(z) != (dotp(z) == 1))
            throw EncodingError("oracle is not the dot product with a single hidden string");
    const std::size_t n = words.size();
    // Amplitudes over (z, target, junk); the target is |->.
    double amp0 = 1.0 / std::sqrt(static_cast<double>(n));
    double rm = std::sqrt(0.5);
    std::vector<double> reg[2][2];
    for (auto &t : reg)
        for (auto &v : t) v.assign(n, 0.0);
    for (std::size_t z = 0; z < n; ++z) {
        int f = dotp(words[z]);
        for (int t = 0; t < 2; ++t) {
            double in = amp0 * (t == 0 ? rm : -rm);
            reg[t ^ f][0][z] += fidelity * in;
            reg[t][1][z] += std::sqrt(std::max(0.0, 1.0 - fidelity * fidelity)) * in;
        }
    }
    BvOutcome out;
    out.hidden = hidden;
    std::vector<double> prob(n, 0.0);
    for (auto &t : reg)
        for (auto &v : t) {
            walsh_hadamard(v);
            for (std::size_t z = 0; z < n; ++z) prob[z] += v[z] * v[z];
        }
    for (std::size_t z = 0; z < n; ++z) {
        out.distribution[words[z]] = prob[z];
        out.total += prob[z];
    }
    out.hidden_prob = out.distribution[hidden];
    return out;
}

inline Oracle bv_oracle(const std::string &x, const std::string &hidden) {
    Oracle a;
    for (auto &z : binary_words(static_cast<int>(hidden.size()))) {
        int s = 0;
        for (std::size_t i = 0; i < z.size(); ++i) s ^= (hidden[i] == '1') & (z[i] == '1');
        if (s) a.insert(pair_strings(x, z));
    }
    return a;
}

}  // namespace qtm
