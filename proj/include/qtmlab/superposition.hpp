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

#include <cmath>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qtmlab/config.hpp"
#include "qtmlab/scalar.hpp"

namespace qtm {

template <class S>
class Superposition {
public:
    using Map = std::unordered_map<Configuration, S, ConfigurationHash>;

    std::size_t time = 0;

    Superposition() = default;
    Superposition(const Configuration &c, S amp) { entries_.emplace(c, std::move(amp)); }

    void add(const Configuration &c, const S &amp) {
        auto [it, inserted] = entries_.try_emplace(c, amp);
        if (!inserted) it->second += amp;
    }
    void set(const Configuration &c, const S &amp) { entries_[c] = amp; }
    void erase(const Configuration &c) { entries_.erase(c); }

    const Map &entries() const { return entries_; }
    Map &entries() { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    RealOf<S> norm2() const {
        RealOf<S> n{};
        for (auto &[c, a] : entries_) n += qtm::norm2(a);
        return n;
    }

    // Drops exact zeros, or entries with |a|^2 < floor when floor > 0.
    void prune(double floor) {
        for (auto it = entries_.begin(); it != entries_.end();) {
            bool drop = floor > 0 ? to_double(qtm::norm2(it->second)) < floor : is_zero(it->second);
            it = drop ? entries_.erase(it) : std::next(it);
        }
    }

    void scale(const S &f) {
        for (auto &[c, a] : entries_) a *= f;
    }

    std::vector<std::pair<Configuration, S>> sorted() const {
        std::vector<std::pair<Configuration, S>> out(entries_.begin(), entries_.end());
        std::sort(out.begin(), out.end(), [](auto &x, auto &y) { return config_less(x.first, y.first); });
        return out;
    }

private:
    Map entries_;
};

template <class S>
S amplitude_of(const Superposition<S> &psi, const Configuration &c) {
    auto it = psi.entries().find(c);
    return it == psi.entries().end() ? S{} : it->second;
}

// <a|b>, conjugate-linear in the first argument.
template <class S>
S inner_product(const Superposition<S> &a, const Superposition<S> &b) {
    const auto &small = a.size() <= b.size() ? a : b;
    const auto &large = a.size() <= b.size() ? b : a;
    S acc{};
    for (auto &[c, x] : small.entries()) {
        auto it = large.entries().find(c);
        if (it == large.entries().end()) continue;
        const S &ax = &small == &a ? x : it->second;
        const S &bx = &small == &a ? it->second : x;
        acc += conj(ax) * bx;
    }
    return acc;
}

template <class S>
RealOf<S> distance2(const Superposition<S> &a, const Superposition<S> &b) {
    RealOf<S> acc{};
    for (auto &[c, x] : a.entries()) {
        auto it = b.entries().find(c);
        acc += qtm::norm2(it == b.entries().end() ? x : S(x - it->second));
    }
    for (auto &[c, y] : b.entries())
        if (!a.entries().count(c)) acc += qtm::norm2(y);
    return acc;
}

template <class S>
double distance(const Superposition<S> &a, const Superposition<S> &b) {
    return std::sqrt(std::max(0.0, to_double(distance2(a, b))));
}

template <class S>
Superposition<Approx> to_approx(const Superposition<S> &psi) {
    Superposition<Approx> out;
    out.time = psi.time;
    for (auto &[c, a] : psi.entries()) out.set(c, to_complex(a));
    return out;
}

}  // namespace qtm
