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

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qtmlab/errors.hpp"

namespace qtm {

inline constexpr double kAmpTolerance = 1e-9;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kApproxPrune = 1e-12;
inline constexpr double kCertainty = 1.0 - 1e-9;

// Element a + b*sqrt(2) of the real field Q(sqrt 2).
class Exact {
public:
    Exact() = default;
    Exact(long v) : a_(v) {}
    Exact(mpq_class a, mpq_class b = 0) : a_(std::move(a)), b_(std::move(b)) {
        a_.canonicalize();
        b_.canonicalize();
    }

    static Exact rational(long num, long den) {
        mpq_class q(num, den);
        q.canonicalize();
        return Exact(q);
    }

    // 2^(k/2) for any integer k.
    static Exact rt2_pow(long k) {
        long h = k >= 0 ? k / 2 : -((-k + 1) / 2);
        bool odd = (k - 2 * h) != 0;
        mpq_class p = 1;
        if (h >= 0) {
            mpz_class z = 1;
            z <<= static_cast<mp_bitcnt_t>(h);
            p = z;
        } else {
            mpz_class z = 1;
            z <<= static_cast<mp_bitcnt_t>(-h);
            p = mpq_class(mpz_class(1), z);
        }
        return odd ? Exact(0, p) : Exact(p, 0);
    }

    const mpq_class &rational_part() const { return a_; }
    const mpq_class &sqrt2_part() const { return b_; }

    int sign() const {
        int sa = sgn(a_);
        int sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
        mpq_class a2 = a_ * a_;
        mpq_class b2 = 2 * b_ * b_;
        int c = cmp(a2, b2);
        return c > 0 ? sa : sb;
    }

    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

    double to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(2.0); }

    // Field norm a^2 - 2 b^2.
    mpq_class field_norm() const { return a_ * a_ - 2 * b_ * b_; }

    Exact operator-() const { return Exact(-a_, -b_); }
    Exact &operator+=(const Exact &o) {
        a_ += o.a_;
        b_ += o.b_;
        return *this;
    }
    Exact &operator-=(const Exact &o) {
        a_ -= o.a_;
        b_ -= o.b_;
        return *this;
    }
    Exact &operator*=(const Exact &o) {
        mpq_class na = a_ * o.a_ + 2 * b_ * o.b_;
        mpq_class nb = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(na);
        b_ = std::move(nb);
        return *this;
    }
    Exact &operator/=(const Exact &o) {
        if (o.is_zero()) throw Error("division by zero in Q(sqrt2)");
        mpq_class n = o.field_norm();
        Exact inv(o.a_ / n, -o.b_ / n);
        return *this *= inv;
    }
    friend Exact operator+(Exact x, const Exact &y) { return x += y; }
    friend Exact operator-(Exact x, const Exact &y) { return x -= y; }
    friend Exact operator*(Exact x, const Exact &y) { return x *= y; }
    friend Exact operator/(Exact x, const Exact &y) { return x /= y; }
    friend bool operator==(const Exact &x, const Exact &y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const Exact &x, const Exact &y) { return !(x == y); }
    friend bool operator<(const Exact &x, const Exact &y) { return (x - y).sign() < 0; }
    friend bool operator>(const Exact &x, const Exact &y) { return (x - y).sign() > 0; }
    friend bool operator<=(const Exact &x, const Exact &y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const Exact &x, const Exact &y) { return (x - y).sign() >= 0; }

    // Nonnegative square root if it lies in Q(sqrt 2).
    static std::optional<Exact> sqrt(const Exact &x) {
        int s = x.sign();
        if (s < 0) return std::nullopt;
        if (s == 0) return Exact();
        auto rat_sqrt = [](const mpq_class &q) -> std::optional<mpq_class> {
            if (sgn(q) < 0) return std::nullopt;
            mpz_class n = q.get_num(), d = q.get_den();
            if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
            mpz_class rn, rd;
            mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
            mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
            mpq_class r(rn, rd);
            r.canonicalize();
            return r;
        };
        // (c + d rt2)^2 = c^2 + 2 d^2 + 2 c d rt2
        if (sgn(x.b_) == 0) {
            if (auto r = rat_sqrt(x.a_)) return Exact(*r);
            if (auto r = rat_sqrt(x.a_ / 2)) return Exact(0, *r);
            return std::nullopt;
        }
        auto disc = rat_sqrt(x.field_norm());
        if (!disc) return std::nullopt;
        for (int pm : {1, -1}) {
            mpq_class c2 = (x.a_ + pm * *disc) / 2;
            auto c = rat_sqrt(c2);
            if (!c || sgn(*c) == 0) continue;
            mpq_class d = x.b_ / (2 * *c);
            Exact z(*c, d);
            if (z.sign() < 0) z = -z;
            if (z * z == x) return z;
        }
        return std::nullopt;
    }

    std::string str() const {
        if (sgn(b_) == 0) return a_.get_str();
        std::string bs = (b_ == 1 ? std::string() : b_ == -1 ? std::string("-") : b_.get_str() + "*") + "rt2";
        if (sgn(a_) == 0) return bs;
        if (sgn(b_) < 0) {
            mpq_class nb = -b_;
            return a_.get_str() + "-" + (nb == 1 ? std::string() : nb.get_str() + "*") + "rt2";
        }
        return a_.get_str() + "+" + bs;
    }

    friend std::ostream &operator<<(std::ostream &os, const Exact &x) { return os << x.str(); }

private:
    mpq_class a_ = 0;
    mpq_class b_ = 0;
};

using Approx = std::complex<double>;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Exact> {
    using Real = Exact;
    static constexpr bool exact = true;
    static constexpr const char *mode_name = "exact";
    static constexpr double default_prune = 0.0;
};

template <>
struct ScalarTraits<Approx> {
    using Real = double;
    static constexpr bool exact = false;
    static constexpr const char *mode_name = "approx";
    static constexpr double default_prune = kApproxPrune;
};

template <class S>
using RealOf = typename ScalarTraits<S>::Real;

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

inline Exact conj(const Exact &x) { return x; }
inline Approx conj(const Approx &x) { return std::conj(x); }
inline Exact norm2(const Exact &x) { return x * x; }
inline double norm2(const Approx &x) { return std::norm(x); }
inline bool is_zero(const Exact &x) { return x.is_zero(); }
inline bool is_zero(const Approx &x) { return x == Approx(0.0, 0.0); }
inline double to_double(const Exact &x) { return x.to_double(); }
inline double to_double(double x) { return x; }
inline std::complex<double> to_complex(const Exact &x) { return {x.to_double(), 0.0}; }
inline std::complex<double> to_complex(const Approx &x) { return x; }
inline std::string to_string(const Exact &x) { return x.str(); }

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    std::string s = os.str();
    return s == "-0" ? "0" : s;
}

inline std::string to_string(double x) { return format_double(x); }
inline std::string to_string(const Approx &x) {
    if (x.imag() == 0.0) return format_double(x.real());
    return format_double(x.real()) + (x.imag() < 0 ? "-" : "+") + format_double(std::abs(x.imag())) + "i";
}

template <class S>
S scalar_from_real(const RealOf<S> &r) {
    if constexpr (is_exact_v<S>) {
        return r;
    } else {
        return S(r, 0.0);
    }
}

template <class S>
S inv_sqrt2() {
    if constexpr (is_exact_v<S>) {
        return Exact::rt2_pow(-1);
    } else {
        return S(std::sqrt(0.5), 0.0);
    }
}

// Equality for scalars: exact in exact mode, componentwise tolerance otherwise.
inline bool near(const Exact &a, const Exact &b, double = kAmpTolerance) { return a == b; }
inline bool near(const Approx &a, const Approx &b, double tol = kAmpTolerance) {
    return std::abs(a.real() - b.real()) <= tol && std::abs(a.imag() - b.imag()) <= tol;
}
inline bool near(double a, double b, double tol = kAmpTolerance) { return std::abs(a - b) <= tol; }

// Parsed amplitude literal before mode resolution.
struct Literal {
    bool exact = true;
    Exact value;
    std::complex<double> approx;
};

namespace detail {

inline mpq_class parse_rational_token(std::string_view tok, std::string_view whole) {
    auto bad = [&]() { return Error("bad amplitude literal '" + std::string(whole) + "'"); };
    if (tok.empty()) throw bad();
    std::string t(tok);
    bool neg = false;
    size_t i = 0;
    if (t[0] == '+' || t[0] == '-') {
        neg = t[0] == '-';
        i = 1;
    }
    std::string body = t.substr(i);
    if (body.empty()) throw bad();
    mpq_class q;
    auto slash = body.find('/');
    if (slash != std::string::npos) {
        std::string n = body.substr(0, slash), d = body.substr(slash + 1);
        auto digits = [](const std::string &s) {
            return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
        };
        if (!digits(n) || !digits(d)) throw bad();
        mpz_class dz(d, 10);
        if (dz == 0) throw bad();
        q = mpq_class(mpz_class(n, 10), dz);
    } else {
        // decimal with optional exponent
        std::string mant = body, expo;
        auto e = body.find_first_of("eE");
        if (e != std::string::npos) {
            mant = body.substr(0, e);
            expo = body.substr(e + 1);
        }
        auto dot = mant.find('.');
        std::string ip = dot == std::string::npos ? mant : mant.substr(0, dot);
        std::string fp = dot == std::string::npos ? "" : mant.substr(dot + 1);
        if ((ip + fp).empty() || (ip + fp).find_first_not_of("0123456789") != std::string::npos) throw bad();
        mpz_class num(ip + fp, 10);
        long ex = -static_cast<long>(fp.size());
        if (!expo.empty()) {
            size_t used = 0;
            long v = 0;
            try {
                v = std::stol(expo, &used);
            } catch (...) {
                throw bad();
            }
            if (used != expo.size()) throw bad();
            ex += v;
        }
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(ex < 0 ? -ex : ex));
        q = ex < 0 ? mpq_class(num, p10) : mpq_class(num * p10);
    }
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

// One product term: [rational] [rt2^k] [cis(a/b)], any subset, at least one.
inline Literal parse_term(std::string_view term, std::string_view whole) {
    auto bad = [&]() { return Error("bad amplitude literal '" + std::string(whole) + "'"); };
    Literal lit;
    lit.value = Exact(1);
    bool any = false;
    bool neg = false;
    std::string s(term);
    size_t pos = 0;
    auto skip_ws = [&]() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '*')) ++pos;
    };
    skip_ws();
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        bool only_sign = pos + 1 < s.size() && (s.compare(pos + 1, 3, "rt2") == 0 || s.compare(pos + 1, 3, "cis") == 0);
        if (only_sign) {
            neg = s[pos] == '-';
            ++pos;
        }
    }
    double phase = 0.0;
    bool has_phase = false;
    while (true) {
        skip_ws();
        if (pos >= s.size()) break;
        if (s.compare(pos, 4, "rt2^") == 0) {
            pos += 4;
            size_t end = pos;
            if (end < s.size() && (s[end] == '-' || s[end] == '+')) ++end;
            while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
            std::string k = s.substr(pos, end - pos);
            if (k.empty() || k == "-" || k == "+") throw bad();
            lit.value *= Exact::rt2_pow(std::stol(k));
            pos = end;
            any = true;
        } else if (s.compare(pos, 3, "rt2") == 0) {
            pos += 3;
            lit.value *= Exact::rt2_pow(1);
            any = true;
        } else if (s.compare(pos, 4, "cis(") == 0) {
            pos += 4;
            auto close = s.find(')', pos);
            if (close == std::string::npos) throw bad();
            mpq_class f = parse_rational_token(s.substr(pos, close - pos), whole);
            phase += 2.0 * M_PI * f.get_d();
            has_phase = true;
            pos = close + 1;
            any = true;
        } else {
            size_t end = pos;
            while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '*') ++end;
            lit.value *= Exact(parse_rational_token(s.substr(pos, end - pos), whole));
            pos = end;
            any = true;
        }
    }
    if (!any) throw bad();
    if (neg) lit.value = -lit.value;
    if (has_phase) {
        lit.exact = false;
        lit.approx = lit.value.to_double() * std::polar(1.0, phase);
    } else {
        lit.approx = {lit.value.to_double(), 0.0};
    }
    return lit;
}

}  // namespace detail

// Sum of terms joined by " + " / " - " (whitespace-separated operators).
inline Literal parse_literal(std::string_view text) {
    std::string s(text);
    std::vector<std::pair<int, std::string>> terms;
    int sign = 1;
    std::string cur;
    std::istringstream is(s);
    std::string tok;
    std::vector<std::string> toks;
    while (is >> tok) toks.push_back(tok);
    if (toks.empty()) throw Error("empty amplitude literal");
    for (auto &t : toks) {
        if (t == "+" || t == "-") {
            if (cur.empty()) throw Error("bad amplitude literal '" + s + "'");
            terms.emplace_back(sign, cur);
            cur.clear();
            sign = t == "+" ? 1 : -1;
        } else {
            cur += (cur.empty() ? "" : " ") + t;
        }
    }
    if (cur.empty()) throw Error("bad amplitude literal '" + s + "'");
    terms.emplace_back(sign, cur);
    Literal out;
    out.value = Exact();
    out.approx = {0.0, 0.0};
    for (auto &[sg, t] : terms) {
        Literal l = detail::parse_term(t, s);
        out.exact = out.exact && l.exact;
        out.value += sg < 0 ? -l.value : l.value;
        out.approx += static_cast<double>(sg) * l.approx;
    }
    return out;
}

template <class S>
S resolve_literal(const Literal &lit) {
    if constexpr (is_exact_v<S>) {
        if (!lit.exact) throw ModeError("phase literal requires approximate mode");
        return lit.value;
    } else {
        return lit.approx;
    }
}

// Inverse of parse_literal for exact values: "p/q", "p/q rt2^-1", or their sum.
inline std::string format_literal(const Exact &x) {
    const mpq_class &a = x.rational_part();
    const mpq_class &b = x.sqrt2_part();
    mpq_class twob = 2 * b;
    std::string bs = twob.get_str() + " rt2^-1";
    if (sgn(b) == 0) return a.get_str();
    if (sgn(a) == 0) return bs;
    if (sgn(twob) < 0) return a.get_str() + " - " + mpq_class(-twob).get_str() + " rt2^-1";
    return a.get_str() + " + " + bs;
}

inline std::string format_literal(const Approx &x) {
    auto dec = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        std::string s = os.str();
        if (s.find_first_of("na") != std::string::npos) throw OutputFormError("non-finite amplitude");
        return s;
    };
    if (x.imag() == 0.0) return dec(x.real());
    double r = std::abs(x);
    double t = std::arg(x) / (2.0 * M_PI);
    // cis needs a rational argument; phases off a fine dyadic grid are written as re + im cis(1/4).
    const double grid = 1 << 20;
    double k = std::round(t * grid);
    if (std::abs(k / grid - t) > 1e-15) {
        std::string im = dec(std::abs(x.imag())) + " cis(1/4)";
        if (x.real() == 0.0) return (x.imag() < 0 ? "-" : "") + im;
        return dec(x.real()) + (x.imag() < 0 ? " - " : " + ") + im;
    }
    mpq_class f(static_cast<long>(k), static_cast<unsigned long>(grid));
    f.canonicalize();
    return dec(r) + " cis(" + f.get_str() + ")";
}

}  // namespace qtm
