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

#include "qtmlab/scalar.hpp"

using namespace qtm;

TEST(Exact, FieldArithmetic) {
    Exact r2 = Exact::rt2_pow(1);
    EXPECT_EQ(r2 * r2, Exact(2));
    EXPECT_EQ((Exact(1) + r2) * (Exact(1) - r2), Exact(-1));
    EXPECT_EQ(Exact(1) / (Exact(1) + r2), r2 - Exact(1));
    EXPECT_EQ(Exact::rt2_pow(-3), r2 / Exact(4));
    EXPECT_THROW(Exact(1) / Exact(), Error);
}

TEST(Exact, SignAndOrder) {
    Exact r2 = Exact::rt2_pow(1);
    EXPECT_GT(Exact(3, -2), Exact());  // 3 - 2 rt2 = 0.17
    EXPECT_LT(Exact(1, -1), Exact());
    EXPECT_EQ(Exact(7, -5).sign(), -1);  // 7 - 7.07
    EXPECT_GE(r2, Exact::rational(7, 5));
    EXPECT_LE(r2, Exact::rational(3, 2));
}

TEST(Exact, SquareRoots) {
    EXPECT_EQ(*Exact::sqrt(Exact::rational(1, 2)), Exact::rt2_pow(-1));
    EXPECT_EQ(*Exact::sqrt(Exact::rational(9, 4)), Exact::rational(3, 2));
    // (1 + rt2)^2 = 3 + 2 rt2
    EXPECT_EQ(*Exact::sqrt(Exact(3, 2)), Exact(1, 1));
    EXPECT_FALSE(Exact::sqrt(Exact(3)).has_value());
    EXPECT_FALSE(Exact::sqrt(Exact(-1)).has_value());
}

TEST(Literal, Grammar) {
    EXPECT_EQ(parse_literal("1 rt2^-1").value, Exact::rt2_pow(-1));
    EXPECT_EQ(parse_literal("-1/2").value, Exact::rational(-1, 2));
    EXPECT_EQ(parse_literal("1/2 + 1/4 rt2").value, Exact(mpq_class(1, 2), mpq_class(1, 4)));
    EXPECT_EQ(parse_literal("0.25").value, Exact::rational(1, 4));
    EXPECT_EQ(parse_literal("-rt2^-2").value, Exact::rational(-1, 2));
    auto p = parse_literal("1/2 cis(1/4)");
    EXPECT_FALSE(p.exact);
    EXPECT_NEAR(p.approx.imag(), 0.5, 1e-15);
    EXPECT_NEAR(p.approx.real(), 0.0, 1e-15);
    EXPECT_THROW(resolve_literal<Exact>(p), ModeError);
    EXPECT_THROW(parse_literal(""), Error);
    EXPECT_THROW(parse_literal("1/2 +"), Error);
    EXPECT_THROW(parse_literal("abc"), Error);
}

TEST(Literal, FormatRoundTrip) {
    for (auto x : {Exact(3, -2), Exact::rt2_pow(-5), Exact::rational(-7, 9), Exact(mpq_class(1, 3), mpq_class(-1, 6))})
        EXPECT_EQ(parse_literal(format_literal(x)).value, x) << x;
    Approx z(0.1, -0.3);
    auto back = parse_literal(format_literal(z)).approx;
    EXPECT_NEAR(std::abs(back - z), 0.0, 1e-15);
}

TEST(Scalar, InvSqrt2) {
    EXPECT_EQ(inv_sqrt2<Exact>() * inv_sqrt2<Exact>(), Exact::rational(1, 2));
    EXPECT_NEAR(std::abs(inv_sqrt2<Approx>() - Approx(std::sqrt(0.5))), 0.0, 1e-16);
}
