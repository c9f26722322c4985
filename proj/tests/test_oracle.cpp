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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "qtmlab/constructions.hpp"
#include "qtmlab/fixtures.hpp"
#include "qtmlab/oracle.hpp"
#include "qtmlab/reference/dense.hpp"

using namespace qtm;

namespace {

struct RefTrace {
    std::map<std::size_t, std::map<std::string, double>> q;
    double accept = 0;
    std::size_t halt = 0;
};

// Dense-map evolution with the oracle written out by hand: the query tape is read cell by cell from 0.
template <class S>
RefTrace reference_oracle_run(const MachineSpec<S> &m, const Oracle &a, const std::string &x) {
    using reference::Vec;
    Vec v;
    v[initial_configuration(m, x)] = 1.0;
    const int qt = *m.roles.query;
    Symbol s0 = m.tapes[qt].at("0"), s1 = m.tapes[qt].at("1");
    RefTrace r;
    for (std::size_t t = 0; t < 200; ++t) {
        bool all_final = true;
        for (auto &[c, amp] : v) all_final = all_final && m.is_final(c.state);
        if (all_final) {
            r.halt = t;
            Symbol one = m.output_alphabet().at("1");
            for (auto &[c, amp] : v)
                if (c.tapes[m.roles.output].get(0) == one) r.accept += std::norm(amp);
            return r;
        }
        Vec next;
        for (auto &[c, amp] : v) {
            if (std::norm(amp) < 1e-30) continue;
            if (c.state == m.query_states->pre) {
                std::string bits;
                for (std::int64_t p = 0;; ++p) {
                    Symbol s = c.tapes[qt].get(p);
                    if (s == s0) bits += '0';
                    else if (s == s1) bits += '1';
                    else break;
                }
                Configuration d = c;
                d.state = m.query_states->post;
                if (!bits.empty() && c.tapes[qt].get(-1) == kBlank) {
                    std::string y = bits.substr(0, bits.size() - 1);
                    r.q[t][y] += std::norm(amp);
                    if (a.contains(y)) {
                        auto pos = static_cast<std::int64_t>(bits.size()) - 1;
                        d.tapes[qt].set(pos, bits.back() == '1' ? s0 : s1);
                    }
                }
                next[d] += amp;
            } else {
                for (auto &[d, w] : reference::apply_delta(m, c)) next[d] += amp * w;
            }
        }
        v = std::move(next);
    }
    ADD_FAILURE() << "reference run did not halt";
    return r;
}

template <class S>
void expect_trace_matches(const MachineSpec<S> &m, const Oracle &a, const std::string &x) {
    auto ref = reference_oracle_run(m, a, x);
    auto [res, trace] = run_with_oracle(m, a, x);
    EXPECT_EQ(res.halt_time, ref.halt) << m.name;
    EXPECT_NEAR(res.rho(), ref.accept, 1e-12) << m.name;
    ASSERT_EQ(trace.events.size(), ref.q.size()) << m.name;
    for (auto &e : trace.events) {
        ASSERT_TRUE(ref.q.count(e.t)) << m.name << " t=" << e.t;
        auto &want = ref.q.at(e.t);
        EXPECT_EQ(e.magnitudes.size(), want.size());
        for (auto &[y, q] : want) EXPECT_NEAR(to_double(trace.magnitude(e.t, y)), q, 1e-12) << y;
    }
}

}  // namespace

TEST(OracleSet, ParseAndWrite) {
    auto a = parse_oracle("% words\n0\n\n01  % trailing\n");
    EXPECT_EQ(a.members(), (std::set<std::string>{"0", "01"}));
    EXPECT_EQ(parse_oracle(write_oracle(a)).members(), a.members());
    EXPECT_THROW(Oracle({"02"}), Error);
    Oracle b({"1", "01"});
    EXPECT_EQ(a.symmetric_difference(b), (std::set<std::string>{"0", "1"}));
}

TEST(OracleRun, Q1AnswersMembership) {
    auto m = fixtures::q1();
    auto [yes, ty] = run_with_oracle(m, Oracle({"0"}), "");
    EXPECT_EQ(yes.accept, Exact(1));
    ASSERT_EQ(ty.events.size(), 1u);
    EXPECT_EQ(ty.events[0].t, 2u);
    EXPECT_EQ(ty.magnitude(2, "0"), Exact(1));
    auto [no, tn] = run_with_oracle(m, Oracle(), "");
    EXPECT_EQ(no.accept, Exact());
    ASSERT_EQ(tn.events.size(), 1u);
    EXPECT_EQ(tn.events[0].magnitudes, ty.events[0].magnitudes);
    EXPECT_EQ(yes.halt_time, no.halt_time);
}

TEST(OracleRun, Budget) {
    auto m = fixtures::q1();
    EXPECT_THROW(run_with_oracle(m, Oracle(), "", 0), BudgetExceeded);
    EXPECT_NO_THROW(run_with_oracle(m, Oracle(), "", 1));
    EXPECT_THROW(run_with_oracle(fixtures::q2(), Oracle(), "", 1), BudgetExceeded);
    EXPECT_THROW(run_with_oracle(fixtures::had(), Oracle(), "0"), RolePrereqError);
}

TEST(OracleRun, DoubleQueryUndoes) {
    for (auto a : {Oracle(), Oracle({"0"})}) {
        auto [res, trace] = run_with_oracle(fixtures::q2(), a, "");
        EXPECT_EQ(res.accept, Exact(1));
        EXPECT_EQ(trace.total_query_times, 2u);
    }
}

TEST(OracleRun, MatchesHandWrittenOracle) {
    for (auto &[name, a] : fixtures::bundled_oracles()) {
        expect_trace_matches(fixtures::q1(), a, "");
        expect_trace_matches(fixtures::q2(), a, "");
        expect_trace_matches(fixtures::adapt(), a, "");
        expect_trace_matches(dj_machine<Exact>(1), a, "");
        expect_trace_matches(dj_machine<Exact>(2), a, "");
    }
}

TEST(OracleRun, DjMagnitudesAreUniform) {
    for (int len = 1; len <= 3; ++len) {
        auto m = dj_machine<Exact>(len);
        auto trace = query_magnitudes(m, Oracle(), "");
        ASSERT_EQ(trace.events.size(), 1u);
        auto &e = trace.events[0];
        EXPECT_EQ(e.magnitudes.size(), std::size_t(1) << len);
        Exact sum;
        for (auto &[y, q] : e.magnitudes) {
            EXPECT_EQ(q, Exact::rational(1, 1L << len)) << y;
            sum += q;
        }
        EXPECT_EQ(sum, Exact(1));
    }
}

TEST(OracleRun, Locality) {
    // Oracles differing only outside the queried words give identical runs.
    auto m = fixtures::q1();
    auto [a, ta] = run_with_oracle(m, Oracle({"0"}), "1");
    auto [b, tb] = run_with_oracle(m, Oracle({"0", "1", "0110"}), "1");
    EXPECT_EQ(distance2(a.final, b.final), Exact());
    EXPECT_EQ(ta.events[0].magnitudes, tb.events[0].magnitudes);
    auto d1 = dj_machine<Exact>(1);
    auto [c, tc] = run_with_oracle(d1, Oracle({"1"}), "");
    auto [d, td] = run_with_oracle(d1, Oracle({"1", "00", "11"}), "");
    EXPECT_EQ(distance2(c.final, d.final), Exact());
}

TEST(Audit, Nonadaptive) {
    auto dj = nonadaptive_audit(dj_machine<Exact>(2), Oracle({"01"}), "");
    EXPECT_TRUE(dj.passed);
    ASSERT_TRUE(dj.first_query_time);
    auto ad = nonadaptive_audit(fixtures::adapt(), Oracle({"0"}), "");
    EXPECT_FALSE(ad.passed);
    ASSERT_FALSE(ad.failures.empty());
    EXPECT_NE(ad.failures.front().reason.find("'1'"), std::string::npos);
    auto ok = nonadaptive_audit(fixtures::adapt(), Oracle(), "");
    EXPECT_TRUE(ok.passed);
    auto li = nonadaptive_audit(fixtures::lister(), Oracle(), "");
    EXPECT_TRUE(li.passed);
    EXPECT_FALSE(li.first_query_time);
    EXPECT_THROW(nonadaptive_audit(fixtures::q1(), Oracle(), ""), RolePrereqError);
    EXPECT_EQ(split_query_list("0/01/"), (std::vector<std::string>{"0", "01", ""}));
}

TEST(Bbbv, Q1Values) {
    auto m = fixtures::q1();
    auto r = bbbv_bound(m, Oracle({"0"}), Oracle(), "", "");
    EXPECT_EQ(r.lhs, 1.0);
    EXPECT_EQ(r.t, run(m, "").halt_time);
    EXPECT_EQ(r.magnitude_sum, 1.0);
    EXPECT_NEAR(r.rhs, 2.0 * std::sqrt(double(r.t)), 1e-12);
    EXPECT_TRUE(r.holds);
    auto same = bbbv_bound(m, Oracle({"0"}), Oracle({"0"}), "", "");
    EXPECT_EQ(same.lhs, 0.0);
    EXPECT_EQ(same.rhs, 0.0);
}

TEST(Bbbv, DjHalfMagnitude) {
    auto m = dj_machine<Exact>(1);
    auto r = bbbv_bound(m, Oracle({"0"}), Oracle(), "", "");
    EXPECT_DOUBLE_EQ(r.magnitude_sum, 0.5);
    EXPECT_NEAR(r.rhs, 2.0 * std::sqrt(r.t * 0.5), 1e-12);
    // f = [0 in A] gives a balanced oracle at length 1: acceptance zero versus one for A empty.
    EXPECT_DOUBLE_EQ(r.lhs, 1.0);
    EXPECT_TRUE(r.holds);
}

TEST(Bbbv, RandomPairsRecomputed) {
    std::mt19937_64 rng(21);
    auto words = binary_words(1);
    for (auto w : binary_words(2)) words.push_back(w);
    auto m = dj_machine<Exact>(2);
    for (int i = 0; i < 30; ++i) {
        Oracle a, b;
        for (auto &w : words) {
            if (rng() & 1) a.insert(w);
            if (rng() & 1) b.insert(w);
        }
        auto r = bbbv_bound(m, a, b, "", "");
        auto ra = reference_oracle_run(m, a, ""), rb = reference_oracle_run(m, b, "");
        double sum = 0;
        auto diff = a.symmetric_difference(b);
        for (auto &[t, qs] : ra.q)
            if (t >= 1 && t + 1 <= ra.halt)
                for (auto &[y, q] : qs)
                    if (diff.count(y)) sum += q;
        EXPECT_NEAR(r.lhs, std::abs(ra.accept - rb.accept), 1e-12);
        EXPECT_NEAR(r.rhs, 2.0 * std::sqrt(ra.halt * sum), 1e-12);
        EXPECT_TRUE(r.holds);
    }
}

TEST(Bbbv, TimingMismatch) {
    auto m = fixtures::q1();
    auto phi = initial_superposition(m, "");
    auto late = step(m, Superposition<Exact>(phi));
    late.time = 0;
    EXPECT_THROW(bbbv_bound(m, Oracle(), Oracle(), Superposition<Exact>(phi), late), OracleTimingError);
}
