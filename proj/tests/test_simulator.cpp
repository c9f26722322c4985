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

#include <cstdlib>
#include <random>

#include "qtmlab/derived.hpp"
#include "qtmlab/fixtures.hpp"
#include "qtmlab/reference/dense.hpp"
#include "qtmlab/simulator.hpp"

using namespace qtm;

namespace {

Configuration with_output(Configuration c, const MachineSpec<Exact> &m, const char *sym) {
    c.tapes[m.roles.output].set(0, m.tapes[m.roles.output].at(sym));
    return c;
}

// Random integer-amplitude vector; exact mode needs no normalization for the identities tested.
Superposition<Exact> random_exact(const MachineSpec<Exact> &m, std::mt19937_64 &rng, std::size_t support) {
    auto psi = fixtures::random_superposition(m, rng, support);
    Superposition<Exact> out;
    std::uniform_int_distribution<long> amp(-5, 5);
    for (auto &[c, a] : psi.entries()) {
        long v = amp(rng);
        out.add(c, Exact(v == 0 ? 1 : v));
    }
    return out;
}

}  // namespace

TEST(Initial, HadConfigurations) {
    auto m = fixtures::had();
    auto psi = initial_superposition(m, "0");
    ASSERT_EQ(psi.size(), 1u);
    auto &[c, a] = *psi.entries().begin();
    EXPECT_EQ(a, Exact(1));
    EXPECT_EQ(psi.norm2(), Exact(1));
    EXPECT_EQ(c.state, m.initial);
    EXPECT_EQ(c.tapes[0].get(0), m.tapes[0].at("0"));
    EXPECT_EQ(amplitude_of(psi, c), Exact(1));
    EXPECT_EQ(amplitude_of(psi, with_output(c, m, "1")), Exact());
    EXPECT_THROW(initial_superposition(m, "2"), AlphabetError);
    auto empty = initial_configuration(m, "");
    EXPECT_TRUE(empty.tapes[0].cells().empty());
}

TEST(Step, HadBranches) {
    auto m = fixtures::had();
    auto psi = initial_superposition(m, "0");
    auto c0 = psi.entries().begin()->first;
    auto one = step(m, psi);
    ASSERT_EQ(one.size(), 2u);
    EXPECT_EQ(one.time, 1u);
    for (auto sym : {"0", "1"}) {
        auto c = with_output(c0, m, sym);
        c.state = m.state("q1");
        EXPECT_EQ(amplitude_of(one, c), Exact::rt2_pow(-1)) << sym;
    }
    // The two branches are orthogonal unit-norm halves.
    Superposition<Exact> b0, b1;
    for (auto &[c, a] : one.entries()) (c.tapes[1].get(0) == m.tapes[1].at("0") ? b0 : b1).set(c, a * Exact::rt2_pow(1));
    EXPECT_EQ(inner_product(b0, b1), Exact());
    EXPECT_EQ(distance(one, one), 0.0);
    auto back = step_inverse(m, one);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(amplitude_of(back, c0), Exact(1));
}

TEST(Step, InterferenceCancelsBranches) {
    auto m = fixtures::hh();
    auto psi = initial_superposition(m, "0");
    auto c0 = psi.entries().begin()->first;
    auto two = step(m, step(m, psi));
    ASSERT_EQ(two.size(), 1u);
    auto c = with_output(c0, m, "1");
    c.state = m.state("q2");
    EXPECT_EQ(amplitude_of(two, c), Exact());
    auto blank = c0;
    blank.state = m.state("q2");
    EXPECT_EQ(amplitude_of(two, blank), Exact(1));
}

TEST(Step, NormAndReversalExact) {
    std::mt19937_64 rng(11);
    std::vector<MachineSpec<Exact>> machines{fixtures::had(), fixtures::bias(), fixtures::copy_bit(), fixtures::q2(),
                                             mixture_machine(fixtures::had(), fixtures::zero())};
    for (int i = 0; i < 100; ++i) {
        auto &m = machines[i % machines.size()];
        auto psi = random_exact(m, rng, 1 + i % 7);
        auto next = step(m, psi);
        EXPECT_EQ(next.norm2(), psi.norm2()) << m.name;
        auto back = step_inverse(m, next);
        EXPECT_EQ(distance2(back, psi), Exact()) << m.name;
        EXPECT_EQ(step(m, step_inverse(m, psi)).norm2(), psi.norm2());
    }
}

TEST(Step, NormApprox) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
        auto m = fixtures::random_layered(1 + i % 4, i);
        auto psi = fixtures::random_superposition(m, rng, 1 + i % 5);
        EXPECT_NEAR(step(m, psi).norm2(), 1.0, 1e-9);
        EXPECT_NEAR(step_inverse(m, psi).norm2(), 1.0, 1e-9);
        EXPECT_LE(distance(step_inverse(m, step(m, psi)), psi), 1e-9);
    }
}

TEST(Step, AgreesWithDenseMatrix) {
    std::vector<MachineSpec<Approx>> machines{to_approx(fixtures::had()), to_approx(fixtures::bias()),
                                              to_approx(mixture_machine(fixtures::had(), fixtures::bias())),
                                              fixtures::random_layered(3, 5)};
    for (auto &m : machines)
        for (auto &x : {"0", "1"}) {
            auto start = initial_configuration(m, x);
            auto sys = reference::dense_system(m, {start}, 6);
            ASSERT_LE(sys.basis.size(), 2048u);
            std::vector<std::complex<double>> v(sys.basis.size());
            for (std::size_t i = 0; i < sys.basis.size(); ++i)
                if (sys.basis[i] == start) v[i] = 1;
            auto psi = initial_superposition(m, x);
            for (int t = 0; t < 6; ++t) {
                v = reference::dense_apply(sys, v);
                psi = step(m, psi);
                for (std::size_t i = 0; i < sys.basis.size(); ++i)
                    EXPECT_NEAR(std::abs(amplitude_of(psi, sys.basis[i]) - v[i]), 0.0, 1e-9) << m.name << " t=" << t;
            }
            for (int t = 0; t < 6; ++t) {
                v = reference::dense_apply(sys, v, true);
                psi = step_inverse(m, psi);
            }
            for (std::size_t i = 0; i < sys.basis.size(); ++i)
                EXPECT_NEAR(std::abs(amplitude_of(psi, sys.basis[i]) - v[i]), 0.0, 1e-9);
            EXPECT_NEAR(std::abs(amplitude_of(psi, start) - 1.0), 0.0, 1e-9);
        }
}

TEST(Run, HadHandValues) {
    auto r = run(fixtures::had(), "0");
    EXPECT_EQ(r.halt_time, 2u);
    EXPECT_EQ(r.accept, Exact::rational(1, 2));
    EXPECT_EQ(r.reject, Exact::rational(1, 2));
    ASSERT_EQ(r.output_distribution.size(), 2u);
    EXPECT_EQ(r.output_distribution.at("0"), Exact::rational(1, 2));
    EXPECT_EQ(r.output_distribution.at("1"), Exact::rational(1, 2));
    EXPECT_EQ(r.support_sizes, (std::vector<std::size_t>{1, 2, 2}));
}

TEST(Run, DeterministicAcceptor) {
    for (auto &x : {"", "0", "1", "0110"}) {
        auto r = run(fixtures::one(), x);
        EXPECT_EQ(r.accept, Exact(1)) << x;
        EXPECT_EQ(run(fixtures::zero(), x).accept, Exact());
    }
}

TEST(Run, ProbabilitiesSumToOne) {
    for (auto &f : fixtures::bundled()) {
        // desync violates timing; pmatch1 only halts on a witness tape of b0..b3 symbols.
        if (f.file == "desync.qtm" || f.file == "pmatch1.qtm") continue;
        for (auto &x : {"", "0", "1"}) {
            auto r = run(f.machine, x);
            EXPECT_EQ(r.accept + r.reject, Exact(1)) << f.file << " " << x;
        }
    }
}

TEST(Run, Failures) {
    EXPECT_THROW(run(fixtures::desync(), "0"), TimingViolation);
    RunOptions few;
    few.max_steps = 1;
    EXPECT_THROW(run(fixtures::had(), "0", few), MaxStepsExceeded);
    RunOptions narrow;
    narrow.max_support = 1;
    EXPECT_THROW(run(fixtures::had(), "0", narrow), SupportLimitError);
}

TEST(Run, SupportLimitFromEnvironment) {
    ::setenv("QTMLAB_MAX_SUPPORT", "1", 1);
    RunOptions o;
    ::unsetenv("QTMLAB_MAX_SUPPORT");
    EXPECT_EQ(o.max_support, 1u);
    EXPECT_EQ(RunOptions{}.max_support, 1000000u);
}

TEST(Run, ProbabilityInequality) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        int layers = 1 + i % 3;
        auto a = fixtures::random_layered(layers, rng() % 100), b = fixtures::random_layered(layers, rng() % 100);
        const char *inputs[] = {"0", "1", "01"};
        auto ra = run(a, inputs[i % 3]), rb = run(b, inputs[(i / 3) % 3]);
        ASSERT_EQ(ra.halt_time, rb.halt_time);
        // Independent recomputation of both sides from the final vectors.
        double pa = 0, pb = 0, d2 = 0;
        for (auto &[c, x] : ra.final.entries()) {
            if (is_accepting(a, c)) pa += std::norm(x);
            d2 += std::norm(x - amplitude_of(rb.final, c));
        }
        for (auto &[c, x] : rb.final.entries()) {
            if (is_accepting(b, c)) pb += std::norm(x);
            if (!ra.final.entries().count(c)) d2 += std::norm(x);
        }
        EXPECT_NEAR(pa, ra.rho(), 1e-12);
        EXPECT_NEAR(std::sqrt(d2), distance(ra.final, rb.final), 1e-12);
        EXPECT_LE(std::abs(pa - pb), std::sqrt(d2) + 1e-9);
    }
}
