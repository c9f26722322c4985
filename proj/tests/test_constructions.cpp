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
#include <numbers>
#include <random>

#include "qtmlab/constructions.hpp"
#include "qtmlab/derived.hpp"
#include "qtmlab/fixtures.hpp"
#include "qtmlab/oracle.hpp"
#include "reference/analytic.hpp"

using namespace qtm;

namespace {

std::vector<std::pair<std::string, MachineSpec<Exact>>> binary_fixtures() {
    using namespace fixtures;
    return {{"had", had()},   {"one", one()},   {"zero", zero()}, {"bias", bias()},
            {"had2", seq_repeat(had(), 2)},
            {"comp", complement_machine(bias())}};
}

long brute_count(const fixtures::PredicateRule &rule, int a, int p) {
    long n = 0;
    std::vector<int> y(p, 0);
    for (long v = 0; v < (1L << (2 * p)); ++v) {
        for (int i = 0; i < p; ++i) y[i] = (v >> (2 * (p - 1 - i))) & 3;
        n += rule(a, y);
    }
    return n;
}

Exact from_mpq(const mpq_class &q) { return Exact::rational(q.get_num().get_si(), q.get_den().get_si()); }

}  // namespace

TEST(GapSquare, AmplitudeIsAcceptanceGap) {
    for (auto &[name, m] : binary_fixtures())
        for (auto &x : {"0", "1", "01"}) {
            auto g = gap_square(m, x);
            Exact rho = run(m, x).accept;
            EXPECT_EQ(g.amplitude, Exact(2) * rho - Exact(1)) << name << " " << x;
            EXPECT_EQ(g.squared, (Exact(2) * rho - Exact(1)) * (Exact(2) * rho - Exact(1)));
            EXPECT_EQ(g.rho, rho);
        }
}

TEST(GapSquare, ApproxAgrees) {
    for (auto &[name, m] : binary_fixtures()) {
        auto g = gap_square(to_approx(m), "1");
        double rho = run(m, "1").rho();
        EXPECT_NEAR(std::abs(g.amplitude - (2 * rho - 1)), 0.0, 1e-12) << name;
    }
}

TEST(GapSquare, Rejections) {
    EXPECT_THROW(gap_square(fixtures::hh(), "0"), OutputFormError);
    auto mixed = mixture_machine(fixtures::had(), fixtures::zero());
    if (mixed.final_states().size() != 1) {
        EXPECT_THROW(gap_square(mixed, "0"), RolePrereqError);
    }
}

TEST(Estimation, TableMatchesFejerKernel) {
    for (auto &[name, m] : binary_fixtures())
        for (int k = 1; k <= 6; ++k) {
            auto out = amplitude_estimate(m, "1", k, 0.1);
            double rho = run(m, "1").rho();
            auto want = reference::phase_estimation_distribution(rho, k);
            ASSERT_EQ(out.table.size(), want.size());
            for (std::size_t l = 0; l < want.size(); ++l)
                EXPECT_NEAR(out.table[l].probability, want[l], 1e-9) << name << " k=" << k << " l=" << l;
            EXPECT_NEAR(out.total, 1.0, 1e-9);
        }
}

TEST(Estimation, GridAndSuccess) {
    auto out = amplitude_estimate(fixtures::had(), "0", 3, 0.25);
    EXPECT_DOUBLE_EQ(out.rho, 0.5);
    EXPECT_NEAR(out.theta, std::numbers::pi / 4, 1e-12);
    EXPECT_GE(out.success_prob, 8 / (std::numbers::pi * std::numbers::pi));
    for (auto &row : out.table) {
        EXPECT_EQ(row.folded, row.ell <= 4 ? row.ell : 8 - row.ell);
        double s = std::sin(std::numbers::pi * row.folded / 8.0);
        EXPECT_DOUBLE_EQ(row.estimate, s * s);
    }
    // rho = 1/2 sits on the grid at l = 2 and 6: the readout is exact.
    EXPECT_NEAR(out.table[2].probability + out.table[6].probability, 1.0, 1e-12);
}

TEST(Estimation, Errors) {
    EXPECT_THROW(amplitude_estimate(fixtures::had(), "0", 0, 0.1), AncillaWidthError);
    EXPECT_THROW(amplitude_estimate(fixtures::had(), "0", kMaxAncilla + 1, 0.1), AncillaWidthError);
    EXPECT_EQ(ancilla_width_for(1), 3);
    EXPECT_EQ(ancilla_width_for(4), 5);
    EXPECT_EQ(ancilla_width_for(5), 6);
}

TEST(Embedding, CountsWitnesses) {
    const char *inputs[] = {"", "0", "1"};
    for (auto &pc : fixtures::predicate_cases()) {
        auto pred = fixtures::lookup_predicate(pc.name, pc.p, pc.rule);
        auto m = sharp_p_embed(pred, pc.p);
        EXPECT_TRUE(check_well_formed(m).passed) << pc.name;
        for (int a = 0; a < 3; ++a) {
            Exact rho = run(m, inputs[a]).accept;
            EXPECT_EQ(rho * Exact(1L << (2 * pc.p)), Exact(brute_count(pc.rule, a, pc.p))) << pc.name << " " << a;
        }
    }
}

TEST(Embedding, Errors) {
    auto pred = fixtures::lookup_predicate("pall1", 1, [](int, const std::vector<int> &) { return true; });
    EXPECT_THROW(sharp_p_embed(fixtures::had(), 1), NotPermutationError);
    EXPECT_THROW(sharp_p_embed(pred, 0), UsageError);
    EXPECT_THROW(sharp_p_embed(pred, 1, 0), RoleError);
    EXPECT_THROW(sharp_p_embed(pred, 1, 2), RoleError);
}

TEST(DeutschJozsa, ExhaustiveSmallWidths) {
    for (int len = 1; len <= 2; ++len) {
        auto words = binary_words(len);
        for (std::size_t mask = 0; mask < (std::size_t(1) << words.size()); ++mask) {
            Oracle a;
            for (std::size_t i = 0; i < words.size(); ++i)
                if (mask >> i & 1) a.insert(words[i]);
            auto r = dj_value_for_width(a, len);
            auto want = reference::dj_closed_form(a.members().size(), len);
            EXPECT_EQ(r.run.accept, from_mpq(want)) << len << " " << mask;
            bool balanced = 2 * a.members().size() == words.size();
            bool constant = a.members().empty() || a.members().size() == words.size();
            if (balanced) {
                EXPECT_EQ(r.run.accept, Exact());
            }
            if (constant) {
                EXPECT_EQ(r.run.accept, Exact(1));
            }
            EXPECT_EQ(r.deterministic, balanced || constant);
        }
    }
}

TEST(DeutschJozsa, OracleValueUsesSquareWidth) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        Oracle a;
        for (auto &w : binary_words(4))
            if (rng() & 1) a.insert(w);
        a.insert("1");
        auto r = dj_oracle_value(a, 2);
        EXPECT_EQ(r.width, 4);
        EXPECT_EQ(r.words, 16u);
        EXPECT_DOUBLE_EQ(r.value, reference::dj_closed_form(r.members, 4).get_d());
    }
    EXPECT_THROW(dj_oracle_value(Oracle(), 0), WidthError);
    EXPECT_THROW(dj_oracle_value(Oracle(), 3), WidthError);
    EXPECT_THROW(dj_machine<Exact>(0), WidthError);
}

TEST(DeutschJozsa, MachineIsWellFormed) {
    for (int len = 1; len <= 3; ++len) EXPECT_TRUE(check_well_formed(dj_machine<Exact>(len)).passed) << len;
}

TEST(BernsteinVazirani, MatchesDenseTransform) {
    for (std::string u : {"0", "1", "01", "110", "1011", "00000"}) {
        for (std::string x : {"", "1", "011"}) {
            auto out = bv_recover(bv_oracle(x, u), x, static_cast<int>(u.size()), 1.0);
            EXPECT_EQ(out.hidden, u);
            auto want = reference::bv_dense(u);
            auto words = binary_words(static_cast<int>(u.size()));
            for (std::size_t i = 0; i < words.size(); ++i)
                EXPECT_NEAR(out.distribution.at(words[i]), want[i], 1e-12) << u << " " << words[i];
            EXPECT_NEAR(out.hidden_prob, 1.0, 1e-12);
        }
    }
}

TEST(BernsteinVazirani, ReducedFidelity) {
    for (double f : {0.0, 0.3, 0.8}) {
        auto out = bv_recover(bv_oracle("1", "101"), "1", 3, f);
        EXPECT_NEAR(out.hidden_prob, f * f, 1e-12);
        EXPECT_NEAR(out.distribution.at("000"), 1 - f * f, 1e-12);
        EXPECT_NEAR(out.total, 1.0, 1e-12);
    }
    auto z = bv_recover(bv_oracle("1", "00"), "1", 2, 0.5);
    EXPECT_NEAR(z.hidden_prob, 1.0, 1e-12);
}

TEST(BernsteinVazirani, Errors) {
    EXPECT_THROW(bv_recover(Oracle({pair_strings("1", "11")}), "1", 2, 1.0), EncodingError);
    EXPECT_THROW(bv_recover(Oracle(), "1", 0, 1.0), WidthError);
    EXPECT_THROW(bv_recover(Oracle(), "1", 2, 1.5), UsageError);
    EXPECT_EQ(pair_strings("10", "1"), "110101");
}
