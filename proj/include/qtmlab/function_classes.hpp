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
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "qtmlab/derived.hpp"
#include "qtmlab/parse.hpp"

namespace qtm {

enum class ClassTag { SharpQP, GapQP, FEQP, FBQP, QMASV };

inline const char *class_tag_name(ClassTag t) {
    switch (t) {
        case ClassTag::SharpQP: return "#QP";
        case ClassTag::GapQP: return "GapQP";
        case ClassTag::FEQP: return "FEQP";
        case ClassTag::FBQP: return "FBQP";
        case ClassTag::QMASV: return "QMASV-verifier";
    }
    return "?";
}

inline ClassTag parse_class_tag(std::string_view s) {
    for (auto t : {ClassTag::SharpQP, ClassTag::GapQP, ClassTag::FEQP, ClassTag::FBQP, ClassTag::QMASV})
        if (s == class_tag_name(t)) return t;
    throw UsageError("unknown class tag '" + std::string(s) + "'");
}

template <class S>
struct FunctionWitness {
    MachineSpec<S> machine;
    ClassTag tag = ClassTag::SharpQP;
    std::map<std::string, long> params;
};

template <class S>
FunctionWitness<S> make_witness(MachineSpec<S> m, ClassTag tag, std::map<std::string, long> params = {}) {
    auto rep = check_well_formed(m);
    if (!rep.passed)
        throw RolePrereqError("machine '" + m.name + "' is not well-formed (" +
                              condition_name(rep.violations.front().condition) + ")");
    return {std::move(m), tag, std::move(params)};
}

// Manifest lines: `machine <path>`, `class <tag>`, `param <key> <integer>`; `%` starts a comment.
struct Manifest {
    std::string machine_path;
    ClassTag tag = ClassTag::SharpQP;
    std::map<std::string, long> params;
};

inline Manifest parse_manifest(std::string_view text) {
    Manifest m;
    bool saw_machine = false, saw_class = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto p = line.find('%'); p != std::string::npos) line.erase(p);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "machine" && ls >> m.machine_path) {
            saw_machine = true;
        } else if (std::string tag; kw == "class" && ls >> tag) {
            m.tag = parse_class_tag(tag);
            saw_class = true;
        } else if (std::string key; kw == "param" && ls >> key) {
            long v;
            if (!(ls >> v)) throw SyntaxError(no, 1, "param needs an integer value");
            m.params[key] = v;
        } else {
            throw SyntaxError(no, 1, "unrecognized manifest line");
        }
    }
    if (!saw_machine || !saw_class) throw SyntaxError(no, 1, "manifest needs machine and class lines");
    return m;
}

inline std::string write_manifest(const Manifest &m) {
    std::ostringstream out;
    out << "machine " << m.machine_path << "\nclass " << class_tag_name(m.tag) << "\n";
    for (auto &[k, v] : m.params) out << "param " << k << " " << v << "\n";
    return out.str();
}

template <class S>
FunctionWitness<S> load_witness(const std::filesystem::path &manifest_file) {
    auto man = parse_manifest(read_text_file(manifest_file.string()));
    auto path = std::filesystem::path(man.machine_path);
    if (path.is_relative()) path = manifest_file.parent_path() / path;
    return make_witness(parse_machine<S>(read_text_file(path.string())), man.tag, man.params);
}

template <class S>
RealOf<S> eval_sharpqp(const FunctionWitness<S> &w, std::string_view x, const RunOptions &opts = {}) {
    return run(w.machine, x, opts).accept;
}

template <class S>
RealOf<S> eval_gapqp(const FunctionWitness<S> &w, std::string_view x, const RunOptions &opts = {}) {
    auto rho = eval_sharpqp(w, x, opts);
    return RealOf<S>(2) * rho - RealOf<S>(1);
}

template <class S>
struct ModalOutput {
    std::string output;
    RealOf<S> probability{};
};

// Modal output with ties going to the lexicographically smallest string.
template <class S>
ModalOutput<S> modal_output(const RunResult<S> &r) {
    ModalOutput<S> best;
    bool first = true;
    for (auto &[out, p] : r.output_distribution) {
        bool better;
        if constexpr (is_exact_v<S>) {
            better = first || p > best.probability;
        } else {
            better = first || p > best.probability + kAmpTolerance;
        }
        if (better) best = {out, p};
        first = false;
    }
    return best;
}

template <class S>
std::string eval_feqp(const FunctionWitness<S> &w, std::string_view x, const RunOptions &opts = {}) {
    auto best = modal_output(run(w.machine, x, opts));
    bool certain;
    if constexpr (is_exact_v<S>) {
        certain = best.probability == RealOf<S>(1);
    } else {
        certain = best.probability >= kCertainty;
    }
    if (!certain)
        throw CertaintyViolation("modal output '" + best.output + "' has probability " +
                                 format_double(to_double(best.probability)));
    return best.output;
}

template <class S>
ModalOutput<S> eval_fbqp(const FunctionWitness<S> &w, std::string_view x, const RunOptions &opts = {}) {
    return modal_output(run(w.machine, x, opts));
}

// P[Bin(n, s) > n/2], summed term by term.
template <class R>
R majority_tail(const R &s, int n) {
    R total(0);
    R binom(1);
    for (int j = 0; j <= n; ++j) {
        if (j > 0) binom = binom * R(n - j + 1) / R(j);
        if (2 * j <= n) continue;
        R term = binom;
        for (int i = 0; i < j; ++i) term = term * s;
        for (int i = 0; i < n - j; ++i) term = term * (R(1) - s);
        total = total + term;
    }
    return total;
}

template <class R>
struct AmplifyResult {
    std::string output;
    R single{};
    int runs = 0;
    R probability{};
    double bound = 0;
    bool meets_bound = false;
};

template <class R>
AmplifyResult<R> amplify_probability(const R &s, int q, std::string output = "") {
    if (q < 1) throw UsageError("q must be positive");
    bool low;
    if constexpr (std::is_same_v<R, double>) {
        low = s < 0.75 - kAmpTolerance;
    } else {
        low = s < R(3) / R(4);
    }
    if (low)
        throw BiasTooLow("per-run success probability " + format_double(to_double(s)) + " is below 3/4");
    AmplifyResult<R> a;
    a.output = std::move(output);
    a.single = s;
    a.runs = 6 * q + 1;
    a.probability = majority_tail(s, a.runs);
    a.bound = 1.0 - std::ldexp(1.0, -q);
    R exact_bound = R(1) - R(1) / R(static_cast<long>(1) << q);
    if constexpr (std::is_same_v<R, double>) {
        a.meets_bound = a.probability >= exact_bound - kAmpTolerance;
    } else {
        a.meets_bound = !(a.probability < exact_bound);
    }
    return a;
}

template <class S>
AmplifyResult<RealOf<S>> amplify(const FunctionWitness<S> &w, int q, std::string_view x, const RunOptions &opts = {}) {
    auto r = run(w.machine, x, opts);
    for (auto &[out, p] : r.output_distribution)
        if (out != "0" && out != "1") throw OutputFormError("output '" + out + "' is not a single bit");
    auto best = modal_output(r);
    return amplify_probability(best.probability, q, best.output);
}

inline constexpr std::size_t kMaxWitnessDim = 64;

using ComplexMatrix = std::vector<std::vector<std::complex<double>>>;

struct QmaResult {
    double max_prob = 0;
    std::vector<std::complex<double>> witness;
    ComplexMatrix form;
    int witness_tape = 1;
};

template <class S>
int witness_tape_of(const FunctionWitness<S> &v) {
    if (auto it = v.params.find("witness-tape"); it != v.params.end()) return static_cast<int>(it->second) - 1;
    for (int i = 0; i < static_cast<int>(v.machine.tape_count()); ++i)
        if (i != v.machine.roles.input && i != v.machine.roles.output) return i;
    throw DimensionError("verifier has no witness tape");
}

template <class S>
std::vector<Symbol> witness_basis_word(const MachineSpec<S> &m, int tape, std::size_t s, int p) {
    std::vector<Symbol> w(p);
    for (int i = 0; i < p; ++i) w[i] = m.tapes[tape].at(((s >> (p - 1 - i)) & 1) ? "1" : "0");
    return w;
}

template <class S>
void check_witness_dims(const FunctionWitness<S> &v, int p) {
    if (p < 1 || (std::size_t(1) << p) > kMaxWitnessDim)
        throw DimensionError("witness dimension 2^" + std::to_string(p) + " outside 2.." + std::to_string(kMaxWitnessDim));
    int t = witness_tape_of(v);
    if (t < 0 || t >= static_cast<int>(v.machine.tape_count())) throw DimensionError("witness tape out of range");
    if (!v.machine.tapes[t].find("0") || !v.machine.tapes[t].find("1"))
        throw DimensionError("witness tape lacks the symbols 0 and 1");
}

// E[s][s'] = sum over accepting c of amp(s -> c) conj(amp(s' -> c)).
template <class S>
ComplexMatrix acceptance_form(const FunctionWitness<S> &v, std::string_view x, int p, const RunOptions &opts = {}) {
    check_witness_dims(v, p);
    int t = witness_tape_of(v);
    const std::size_t d = std::size_t(1) << p;
    std::vector<std::unordered_map<Configuration, std::complex<double>, ConfigurationHash>> acc(d);
    for (std::size_t s = 0; s < d; ++s) {
        auto init = initial_configuration(v.machine, x, {{t, witness_basis_word(v.machine, t, s, p)}});
        auto r = run(v.machine, Superposition<S>(init, S(1)), opts);
        for (auto &[c, a] : r.final.entries())
            if (is_accepting(v.machine, c)) acc[s][c] = to_complex(a);
    }
    ComplexMatrix e(d, std::vector<std::complex<double>>(d));
    for (std::size_t s = 0; s < d; ++s)
        for (std::size_t u = 0; u < d; ++u)
            for (auto &[c, a] : acc[s])
                if (auto it = acc[u].find(c); it != acc[u].end()) e[s][u] += a * std::conj(it->second);
    return e;
}

inline ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
    std::size_t n = a.size();
    ComplexMatrix c(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k] != 0.0)
                for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline std::vector<std::complex<double>> matvec(const ComplexMatrix &a, const std::vector<std::complex<double>> &v) {
    std::vector<std::complex<double>> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

inline double vnorm(const std::vector<std::complex<double>> &v) {
    double n = 0;
    for (auto &x : v) n += std::norm(x);
    return std::sqrt(n);
}

// Top eigenpair of a Hermitian positive semidefinite matrix: repeated squaring, then power steps.
inline std::pair<double, std::vector<std::complex<double>>> top_eigenpair(const ComplexMatrix &e, double tol = 1e-8) {
    const std::size_t n = e.size();
    ComplexMatrix a = e;
    for (int sq = 0; sq < 40; ++sq) {
        double mx = 0;
        for (auto &r : a)
            for (auto &x : r) mx = std::max(mx, std::abs(x));
        if (mx == 0) break;
        for (auto &r : a)
            for (auto &x : r) x /= mx;
        a = matmul(a, a);
    }
    std::size_t best = 0;
    double bn = -1;
    for (std::size_t j = 0; j < n; ++j) {
        double cn = 0;
        for (std::size_t i = 0; i < n; ++i) cn += std::norm(a[i][j]);
        if (cn > bn) {
            bn = cn;
            best = j;
        }
    }
    std::vector<std::complex<double>> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a[i][best];
    if (vnorm(v) == 0) v.assign(n, 0.0), v[0] = 1.0;
    double lambda = 0;
    for (int it = 0; it < 1000; ++it) {
        double nv = vnorm(v);
        for (auto &x : v) x /= nv;
        auto w = matvec(e, v);
        std::complex<double> rq = 0;
        for (std::size_t i = 0; i < n; ++i) rq += std::conj(v[i]) * w[i];
        double next = rq.real();
        bool done = std::abs(next - lambda) < tol * 1e-3 && it > 0;
        lambda = next;
        if (vnorm(w) == 0) break;
        v = std::move(w);
        if (done) break;
    }
    double nv = vnorm(v);
    for (auto &x : v) x /= nv;
    auto w = matvec(e, v);
    std::complex<double> rq = 0;
    for (std::size_t i = 0; i < n; ++i) rq += std::conj(v[i]) * w[i];
    return {rq.real(), v};
}

template <class S>
QmaResult qma_best_witness(const FunctionWitness<S> &v, std::string_view x, int p, const RunOptions &opts = {}) {
    QmaResult r;
    r.form = acceptance_form(v, x, p, opts);
    r.witness_tape = witness_tape_of(v);
    auto [lambda, vec] = top_eigenpair(r.form);
    r.max_prob = std::clamp(lambda, 0.0, 1.0);
    for (auto &z : vec) z = std::conj(z);
    r.witness = std::move(vec);
    return r;
}

// Acceptance probability with the witness register prepared in `witness`.
template <class S>
double acceptance_with_witness(const FunctionWitness<S> &v, std::string_view x, int p,
                               const std::vector<std::complex<double>> &witness, const RunOptions &opts = {}) {
    check_witness_dims(v, p);
    int t = witness_tape_of(v);
    auto m = to_approx(v.machine);
    Superposition<Approx> psi;
    for (std::size_t s = 0; s < witness.size(); ++s)
        if (witness[s] != 0.0) psi.add(initial_configuration(m, x, {{t, witness_basis_word(m, t, s, p)}}), witness[s]);
    return run(m, psi, opts).rho();
}

template <class S>
std::pair<FunctionWitness<S>, FunctionWitness<S>> gapqp_as_difference(const FunctionWitness<S> &w) {
    return {make_witness(w.machine, ClassTag::SharpQP), make_witness(complement_machine(w.machine), ClassTag::SharpQP)};
}

}  // namespace qtm
