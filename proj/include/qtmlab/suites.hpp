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

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qtmlab/completion.hpp"
#include "qtmlab/constructions.hpp"
#include "qtmlab/derived.hpp"
#include "qtmlab/fixtures.hpp"
#include "qtmlab/function_classes.hpp"
#include "qtmlab/oracle.hpp"
#include "qtmlab/reference/dense.hpp"
#include "qtmlab/well_formed.hpp"

namespace qtm {

struct SuiteCase {
    std::string id;
    std::string lemma;
    bool pass = false;
    double lhs = 0;
    double rhs = 0;
    double tolerance = 0;
    std::string relation;
    double elapsed_ms = 0;
    std::string error;
};

struct SuiteResult {
    std::string name;
    std::vector<SuiteCase> cases;
    double elapsed_ms = 0;

    std::size_t passed() const {
        return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](auto &c) { return c.pass; }));
    }
    std::size_t failed() const { return cases.size() - passed(); }
    bool ok() const { return failed() == 0; }
};

// One comparison. `verdict` overrides the numeric test for exact comparisons.
struct Check {
    Check(double l, std::string rel, double r, double tol, std::optional<bool> v = std::nullopt)
        : lhs(l), relation(std::move(rel)), rhs(r), tolerance(tol), verdict(v) {}

    double lhs = 0;
    std::string relation = "<=";
    double rhs = 0;
    double tolerance = 0;
    std::optional<bool> verdict;
};

inline bool check_holds(const Check &c) {
    if (c.verdict) return *c.verdict;
    if (c.relation == "<=") return c.lhs <= c.rhs + c.tolerance;
    if (c.relation == ">=") return c.lhs >= c.rhs - c.tolerance;
    return std::abs(c.lhs - c.rhs) <= c.tolerance;
}

class SuiteRecorder {
public:
    explicit SuiteRecorder(std::string name) { result_.name = std::move(name); }

    void add(const std::string &id, const std::string &lemma, const std::function<Check()> &f) {
        auto t0 = std::chrono::steady_clock::now();
        SuiteCase c;
        c.id = id;
        c.lemma = lemma;
        try {
            Check k = f();
            c.lhs = k.lhs;
            c.rhs = k.rhs;
            c.tolerance = k.tolerance;
            c.relation = k.relation;
            c.pass = check_holds(k);
        } catch (const std::exception &e) {
            c.error = e.what();
        }
        c.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        result_.elapsed_ms += c.elapsed_ms;
        result_.cases.push_back(std::move(c));
    }

    SuiteResult take() { return std::move(result_); }

private:
    SuiteResult result_;
};

inline Check exact_equal(double lhs, double rhs, bool same) { return {lhs, "==", rhs, 0.0, same}; }
inline double as_bit(bool b) { return b ? 1.0 : 0.0; }

namespace suites {

inline constexpr double kStrict = 1e-9;
inline constexpr std::uint64_t kSeed = 20260314;

inline const std::vector<std::string> &short_words() {
    static const std::vector<std::string> w{"0", "1", "00", "01", "10", "11"};
    return w;
}

// Single-final machines with a bit on the output cell for every nonempty input.
inline std::vector<std::pair<std::string, MachineSpec<Exact>>> exact_matrix() {
    using namespace fixtures;
    return {{"had", had()},
            {"one", one()},
            {"zero", zero()},
            {"bias", bias()},
            {"copy", copy_bit()},
            {"complement(had)", complement_machine(had())},
            {"mix(had,zero)", mixture_machine(had(), zero())},
            {"had^2", seq_repeat(had(), 2)},
            {"embed(pmatch1)", sharp_p_embed(lookup_predicate("pmatch1", 1, predicate_cases()[3].rule), 1)}};
}

inline SuiteResult well_formedness() {
    SuiteRecorder r("well-formedness");
    for (auto &f : fixtures::bundled()) {
        std::vector<std::pair<std::string, MachineSpec<Exact>>> variants{{"original", f.machine}};
        for (auto &v : fixtures::defect_variants(f.machine)) variants.push_back(std::move(v));
        for (auto &[tag, m] : variants) {
            auto &mm = m;
            r.add(f.file + " " + tag, "well-formedness", [&] {
                bool local = check_well_formed(mm).passed;
                auto cols = reference::reachable(mm, 2, 4);
                bool brute = reference::unitarity_defect(mm, cols) <= kStrict;
                return Check{as_bit(local), "==", as_bit(brute), 0.0};
            });
        }
    }
    return r.take();
}

inline SuiteResult unitarity() {
    SuiteRecorder r("unitarity");
    for (int layers = 1; layers <= 4; ++layers)
        for (std::uint64_t s = 1; s <= 3; ++s)
            r.add("random layered " + std::to_string(layers) + " seed " + std::to_string(s), "well-formedness", [&] {
                auto m = fixtures::random_layered(layers, kSeed + s);
                if (!check_well_formed(m).passed) return Check{1.0, "<=", kStrict, 0.0, false};
                return Check{reference::unitarity_defect(m, reference::reachable(m, 2, layers + 2)), "<=", kStrict, 0.0};
            });
    for (int p = 1; p <= 3; ++p)
        r.add("random verifier p=" + std::to_string(p), "well-formedness", [&] {
            auto m = fixtures::random_verifier(p, kSeed + p);
            if (!check_well_formed(m).passed) return Check{1.0, "<=", kStrict, 0.0, false};
            return Check{reference::unitarity_defect(m, reference::reachable(m, 1, p + 3)), "<=", kStrict, 0.0};
        });
    r.add("completion of had without (q0,#)", "unidirectional-completion", [] {
        auto m = fixtures::had();
        auto sigma = initial_configuration(m, "").read();
        auto partial = m;
        partial.mutable_row(m.initial, sigma).clear();
        auto done = complete_unidirectional(partial);
        bool kept = true;
        for (std::size_t ri = 0; ri < partial.row_count(); ++ri)
            if (!partial.row_at(ri).empty()) kept = kept && partial.row_at(ri) == done.row_at(ri);
        return Check{as_bit(check_well_formed(done).passed && kept), "==", 1.0, 0.0};
    });
    return r.take();
}

inline MachineSpec<Approx> reversal_machine(std::size_t i) {
    using namespace fixtures;
    switch (i % 6) {
        case 0: return to_approx(had());
        case 1: return to_approx(bias());
        case 2: return to_approx(copy_bit());
        case 3: return to_approx(q2());
        case 4: return to_approx(mixture_machine(had(), bias()));
        default: return random_layered(3, kSeed + i);
    }
}

inline SuiteResult reversal() {
    SuiteRecorder r("reversal");
    std::mt19937_64 rng(kSeed);
    std::vector<MachineSpec<Approx>> machines;
    for (std::size_t i = 0; i < 6; ++i) machines.push_back(reversal_machine(i));
    for (std::size_t i = 0; i < 100; ++i) {
        auto &m = machines[i % machines.size()];
        auto psi = fixtures::random_superposition(m, rng, 1 + i % 6);
        r.add("vector " + std::to_string(i) + " on " + m.name, "reversibility", [&] {
            Evolver<Approx> ev(m);
            return Check{distance(ev.step_inverse(ev.step(psi)), psi), "<=", 0.0, kStrict};
        });
    }
    return r.take();
}

inline SuiteResult prob_lipschitz() {
    SuiteRecorder r("prob-lipschitz");
    std::mt19937_64 rng(kSeed + 1);
    const std::vector<std::string> inputs{"", "0", "1", "01", "10"};
    for (int i = 0; i < 50; ++i) {
        int layers = 1 + static_cast<int>(rng() % 3);
        std::uint64_t sa = rng() % 1000, sb = i % 5 == 0 ? sa : rng() % 1000;
        std::string x = inputs[rng() % inputs.size()], y = inputs[rng() % inputs.size()];
        r.add("pair " + std::to_string(i), "probability-inequality", [&] {
            auto ma = fixtures::random_layered(layers, sa), mb = fixtures::random_layered(layers, sb);
            auto ra = run(ma, x), rb = run(mb, y);
            if (ra.halt_time != rb.halt_time) throw TimingViolation("unequal halting times");
            return Check{std::abs(ra.rho() - rb.rho()), "<=", distance(ra.final, rb.final), kStrict};
        });
    }
    return r.take();
}

inline SuiteResult gap_squaring() {
    SuiteRecorder r("gap-squaring");
    for (auto &[name, m] : exact_matrix())
        for (auto &x : short_words()) {
            auto &mm = m;
            r.add(name + " on '" + x + "'", "gap-squaring", [&] {
                auto g = gap_square(mm, x);
                Exact gap = Exact(2) * g.rho - Exact(1);
                bool same = g.amplitude == gap && g.squared == gap * gap;
                return exact_equal(g.amplitude.to_double(), gap.to_double(), same);
            });
        }
    for (auto &[name, em] : exact_matrix())
        for (auto &x : {"0", "1"}) {
            auto m = to_approx(em);
            r.add(name + " on '" + std::string(x) + "' in approx mode", "gap-squaring", [&] {
                auto g = gap_square(m, x);
                double gap = 2 * to_double(g.rho) - 1;
                double dev = std::max(std::abs(g.amplitude - Approx(gap)), std::abs(g.squared - gap * gap));
                return Check{dev, "<=", 0.0, kStrict};
            });
        }
    return r.take();
}

struct RhoMachine {
    std::string label;
    MachineSpec<Exact> machine;
};

inline std::vector<RhoMachine> estimation_machines() {
    using namespace fixtures;
    return {{"0", zero()},
            {"1/4", seq_repeat(had(), 2)},
            {"1/2", had()},
            {"3/4", complement_machine(seq_repeat(had(), 2))},
            {"1", one()}};
}

inline const double kEightOverPiSq = 8.0 / (std::numbers::pi * std::numbers::pi);

inline SuiteResult estimation() {
    SuiteRecorder r("estimation");
    auto machines = estimation_machines();
    r.add("rho=1/4, k=3: success_prob >= 8/pi^2", "estimation-success", [&] {
        auto e = amplitude_estimate(machines[1].machine, "0", 3, 0.25);
        return Check{e.success_prob, ">=", kEightOverPiSq, 0.0};
    });
    for (auto &rm : machines)
        for (int p : {2, 4, 8}) {
            int k = ancilla_width_for(p);
            r.add("rho=" + rm.label + ", p=" + std::to_string(p) + ", k=" + std::to_string(k) +
                      ": success_prob >= 8/pi^2",
                  "estimation-success", [&] {
                      auto e = amplitude_estimate(rm.machine, "0", k, 1.0 / (4.0 * p));
                      return Check{e.success_prob, ">=", kEightOverPiSq, 0.0};
                  });
        }
    for (auto &rm : machines)
        for (int k = 3; k <= 6; ++k) {
            auto deviation = [&] {
                double theta = amplitude_estimate(rm.machine, "0", 1, 1.0).theta;
                double n = std::ldexp(1.0, k), pos = n * theta / std::numbers::pi;
                if (std::abs(pos - std::round(pos)) < 1e-9) pos = std::round(pos);
                double worst = 0;
                for (double l : {std::floor(pos), std::ceil(pos)}) {
                    double s = std::sin(std::numbers::pi * l / n);
                    double t = std::sin(theta);
                    worst = std::max(worst, std::abs(t * t - s * s));
                }
                return worst;
            };
            std::string base = "rho=" + rm.label + ", k=" + std::to_string(k);
            r.add(base + ": adjacent grid within pi^2/4^k", "adjacent-grid", [&] {
                return Check{deviation(), "<=", std::pow(std::numbers::pi, 2) / std::ldexp(1.0, 2 * k), 1e-12};
            });
            r.add(base + ": adjacent grid within pi/2^k", "adjacent-grid-linear", [&] {
                return Check{deviation(), "<=", std::numbers::pi / std::ldexp(1.0, k), 1e-12};
            });
        }
    return r.take();
}

inline std::size_t brute_force_count(const fixtures::PredicateRule &rule, int a, int p) {
    std::size_t count = 0, total = std::size_t(1) << (2 * p);
    for (std::size_t v = 0; v < total; ++v) {
        std::vector<int> y(p);
        for (int i = 0; i < p; ++i) y[i] = static_cast<int>((v >> (2 * (p - 1 - i))) & 3);
        count += rule(a, y);
    }
    return count;
}

inline SuiteResult embedding() {
    SuiteRecorder r("embedding");
    const std::vector<std::string> inputs{"", "0", "1"};
    for (auto &pc : fixtures::predicate_cases())
        for (int a = 0; a < 3; ++a) {
            r.add(pc.name + " on '" + inputs[a] + "'", "sharp-p-embedding", [&] {
                auto m = sharp_p_embed(fixtures::lookup_predicate(pc.name, pc.p, pc.rule), pc.p);
                auto res = run(m, inputs[a]);
                Exact scaled = res.accept * Exact(1L << (2 * pc.p));
                long count = static_cast<long>(brute_force_count(pc.rule, a, pc.p));
                return exact_equal(scaled.to_double(), static_cast<double>(count), scaled == Exact(count));
            });
        }
    return r.take();
}

inline SuiteResult closure() {
    SuiteRecorder r("closure");
    using namespace fixtures;
    std::vector<std::pair<std::string, MachineSpec<Exact>>> base{
        {"had", had()}, {"one", one()}, {"zero", zero()}, {"bias", bias()}, {"copy", copy_bit()}};
    for (auto &[gn, g] : base)
        for (auto &[hn, h] : base) {
            auto &gg = g;
            auto &hm = h;
            r.add("mix(" + gn + "," + hn + ")", "gap-character", [&] {
                auto n = mixture_machine(gg, hm);
                bool same = true;
                double worst = 0;
                for (auto &x : {"0", "1"}) {
                    Exact lhs = Exact(2) * run(n, x).accept - Exact(1);
                    Exact rhs = run(gg, x).accept - run(hm, x).accept;
                    same = same && lhs == rhs;
                    worst = std::max(worst, std::abs((lhs - rhs).to_double()));
                }
                return Check{worst, "==", 0.0, kStrict, same};
            });
        }
    for (auto &[name, m] : base)
        for (int count = 1; count <= 3; ++count) {
            auto &mm = m;
            r.add(name + " repeated " + std::to_string(count), "operators", [&] {
                auto rep = seq_repeat(mm, count);
                bool same = true;
                double worst = 0;
                for (auto &x : {"0", "1"}) {
                    Exact rho = run(mm, x).accept, pw(1);
                    for (int i = 0; i < count; ++i) pw = pw * rho;
                    Exact got = run(rep, x).accept;
                    same = same && got == pw;
                    worst = std::max(worst, std::abs((got - pw).to_double()));
                }
                return Check{worst, "==", 0.0, kStrict, same};
            });
        }
    return r.take();
}

inline std::vector<std::string> words_up_to(int n) {
    std::vector<std::string> out;
    for (int len = 0; len <= n; ++len)
        for (auto &w : binary_words(len)) out.push_back(w);
    return out;
}

inline SuiteResult oracle_bbbv() {
    SuiteRecorder r("oracle-bbbv");
    using namespace fixtures;
    std::vector<std::pair<MachineSpec<Exact>, std::string>> machines{{q1(), "1"}, {adapt(), "0"}, {dj_machine<Exact>(2), ""}};
    auto words = words_up_to(4);
    std::mt19937_64 rng(kSeed + 2);
    for (auto &[m, x] : machines)
        for (int i = 0; i < 20; ++i) {
            Oracle a, b;
            for (auto &w : words) {
                bool in = rng() % 2;
                if (in) a.insert(w);
                if (in != (rng() % 4 == 0)) b.insert(w);
            }
            auto &mm = m;
            auto &xx = x;
            r.add(m.name + " pair " + std::to_string(i), "query-magnitude", [&, a, b] {
                auto res = bbbv_bound(mm, a, b, xx, xx);
                return Check{res.lhs, "<=", res.rhs, kAmpTolerance};
            });
        }
    return r.take();
}

inline SuiteResult nonadaptive() {
    SuiteRecorder r("nonadaptive");
    using namespace fixtures;
    Oracle zero_word({"0"}), none;
    Oracle half4, all2({"00", "01", "10", "11"});
    for (auto &w : binary_words(4))
        if (w[0] == '0') half4.insert(w);
    struct Row {
        std::string id;
        MachineSpec<Exact> m;
        Oracle a;
        bool expected;
    };
    std::vector<Row> rows{{"dj1 with {0}", dj_machine<Exact>(1), zero_word, true},
                          {"dj2 with all words", dj_machine<Exact>(2), all2, true},
                          {"dj4 with half", dj_machine<Exact>(4), half4, true},
                          {"lister without queries", lister(), none, true},
                          {"adapt with {}", adapt(), none, true},
                          {"adapt with {0}", adapt(), zero_word, false}};
    for (auto &row : rows)
        r.add(row.id, "nonadaptive-audit", [&] {
            auto rep = nonadaptive_audit(row.m, row.a, "");
            return Check{as_bit(rep.passed), "==", as_bit(row.expected), 0.0};
        });
    return r.take();
}

inline Exact dj_exact(std::size_t members, int len) {
    long total = 1L << len;
    Exact d = Exact(2 * static_cast<long>(members) - total) / Exact(total);
    return d * d;
}

inline SuiteResult dj() {
    SuiteRecorder r("dj");
    auto check = [](const Oracle &a, int len) {
        auto res = dj_value_for_width(a, len);
        Exact want = dj_exact(res.members, len);
        bool good = res.members == 0 || res.members == res.words || 2 * res.members == res.words;
        bool same = res.run.accept == want && (!good || res.deterministic);
        return exact_equal(res.value, want.to_double(), same);
    };
    auto w2 = binary_words(2);
    for (int mask = 0; mask < 16; ++mask) {
        Oracle a;
        std::string label;
        for (int i = 0; i < 4; ++i)
            if (mask >> i & 1) {
                a.insert(w2[i]);
                label += (label.empty() ? "" : ",") + w2[i];
            }
        r.add("length 2 oracle {" + label + "}", "dj-separation", [&, a] { return check(a, 2); });
    }
    std::mt19937_64 rng(kSeed + 3);
    auto w4 = binary_words(4);
    for (int i = 0; i < 200; ++i) {
        Oracle a;
        int kind = i % 4;
        std::vector<std::string> shuffled = w4;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::size_t take = kind == 0 ? 8 : kind == 1 ? (i % 8 == 1 ? 0 : 16) : rng() % 17;
        for (std::size_t j = 0; j < take; ++j) a.insert(shuffled[j]);
        r.add("length 4 sample " + std::to_string(i), "dj-separation", [&, a] { return check(a, 4); });
    }
    return r.take();
}

inline SuiteResult bv() {
    SuiteRecorder r("bv");
    const std::string x = "1";
    const double f = std::sqrt(79.0 / 80.0);
    const double bound = std::pow(f - std::sqrt(1.0 / 80.0), 2);
    for (int p = 1; p <= 4; ++p)
        for (auto &u : binary_words(p)) {
            r.add("hidden " + u + " at fidelity 1", "bv-recovery", [&] {
                auto o = bv_recover(bv_oracle(x, u), x, p, 1.0);
                return Check{o.hidden == u ? o.hidden_prob : 0.0, "==", 1.0, kStrict};
            });
            r.add("hidden " + u + " at fidelity sqrt(79/80)", "bv-recovery", [&] {
                auto o = bv_recover(bv_oracle(x, u), x, p, f);
                return Check{o.hidden == u ? o.hidden_prob : 0.0, ">=", bound, kStrict};
            });
        }
    r.add("displayed bound >= 3/4", "bv-recovery", [&] { return Check{bound, ">=", 0.75, 0.0}; });
    return r.take();
}

inline SuiteResult amplify() {
    SuiteRecorder r("amplify");
    const std::vector<std::pair<std::string, Exact>> biases{{"3/4", Exact(3) / Exact(4)},
                                                             {"4/5", Exact(4) / Exact(5)},
                                                             {"7/8", Exact(7) / Exact(8)},
                                                             {"1", Exact(1)}};
    for (auto &[label, s] : biases)
        for (int q = 1; q <= 4; ++q) {
            auto &ss = s;
            r.add("s=" + label + ", q=" + std::to_string(q), "amplification", [&] {
                auto a = amplify_probability(ss, q);
                return exact_equal(a.probability.to_double(), a.bound, a.meets_bound);
            });
        }
    auto w = make_witness(complement_machine(seq_repeat(fixtures::had(), 2)), ClassTag::FBQP);
    for (int q = 1; q <= 4; ++q)
        r.add("complement(had^2) on '0', q=" + std::to_string(q), "amplification", [&] {
            auto a = amplify(w, q, "0");
            return exact_equal(a.probability.to_double(), a.bound, a.meets_bound);
        });
    return r.take();
}

inline double dense_top_eigenvalue(const ComplexMatrix &e) {
    Eigen::Index n = static_cast<Eigen::Index>(e.size());
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = e[i][j];
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(a, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

struct QmaCase {
    std::string id;
    FunctionWitness<Approx> v;
    std::string x;
    int p;
};

inline std::vector<QmaCase> qma_cases() {
    using namespace fixtures;
    auto wit = [](MachineSpec<Approx> m) { return make_witness(std::move(m), ClassTag::QMASV); };
    std::vector<QmaCase> out{{"vbit", wit(to_approx(verifier_bit())), "", 1},
                             {"vplus", wit(to_approx(verifier_plus())), "", 1},
                             {"vblind", wit(to_approx(verifier_blind())), "", 1},
                             {"vbit p=3", wit(to_approx(verifier_bit())), "1", 3}};
    for (int p = 1; p <= 6; ++p) out.push_back({"random p=" + std::to_string(p), wit(random_verifier(p, kSeed + p)), "", p});
    return out;
}

inline SuiteResult qma() {
    SuiteRecorder r("qma");
    for (auto &c : qma_cases()) {
        std::optional<QmaResult> best;
        r.add(c.id + ": power iteration vs eigendecomposition", "qma-top-eigenvalue", [&] {
            best = qma_best_witness(c.v, c.x, c.p);
            return Check{best->max_prob, "==", dense_top_eigenvalue(best->form), 1e-8};
        });
        r.add(c.id + ": re-simulated witness", "qma-top-eigenvalue", [&] {
            if (!best) throw Error("no witness computed");
            return Check{acceptance_with_witness(c.v, c.x, c.p, best->witness), "==", best->max_prob, 1e-6};
        });
    }
    return r.take();
}

}  // namespace suites

inline const std::vector<std::pair<std::string, std::function<SuiteResult()>>> &suite_table() {
    static const std::vector<std::pair<std::string, std::function<SuiteResult()>>> table{
        {"well-formedness", suites::well_formedness},
        {"unitarity", suites::unitarity},
        {"reversal", suites::reversal},
        {"prob-lipschitz", suites::prob_lipschitz},
        {"gap-squaring", suites::gap_squaring},
        {"estimation", suites::estimation},
        {"embedding", suites::embedding},
        {"closure", suites::closure},
        {"oracle-bbbv", suites::oracle_bbbv},
        {"nonadaptive", suites::nonadaptive},
        {"dj", suites::dj},
        {"bv", suites::bv},
        {"amplify", suites::amplify},
        {"qma", suites::qma},
    };
    return table;
}

inline SuiteResult verify_suite(const std::string &name) {
    for (auto &[n, f] : suite_table())
        if (n == name) return f();
    throw UnknownSuite("unknown suite '" + name + "'");
}

}  // namespace qtm
