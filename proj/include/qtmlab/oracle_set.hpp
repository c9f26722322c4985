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

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qtmlab/config.hpp"
#include "qtmlab/parse.hpp"

namespace qtm {

class Oracle {
public:
    Oracle() = default;
    explicit Oracle(std::set<std::string> members) : members_(std::move(members)) {
        for (auto &y : members_) check_word(y);
    }

    bool contains(const std::string &y) const { return members_.count(y) > 0; }
    const std::set<std::string> &members() const { return members_; }
    void insert(const std::string &y) {
        check_word(y);
        members_.insert(y);
    }

    std::set<std::string> symmetric_difference(const Oracle &o) const {
        std::set<std::string> out;
        for (auto &y : members_)
            if (!o.contains(y)) out.insert(y);
        for (auto &y : o.members_)
            if (!contains(y)) out.insert(y);
        return out;
    }

    static void check_word(const std::string &y) {
        if (y.find_first_not_of("01") != std::string::npos) throw Error("oracle word '" + y + "' is not binary");
    }

private:
    std::set<std::string> members_;
};

inline Oracle parse_oracle(std::string_view text) {
    Oracle a;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto pct = raw.find('%');
        if (pct != std::string::npos) raw = raw.substr(0, pct);
        std::string w(detail::trim(raw));
        if (w.empty()) continue;
        if (w == "-") {
            a.insert("");
            continue;
        }
        if (w.find_first_not_of("01") != std::string::npos) throw SyntaxError(line, 1, "oracle line is not a binary string");
        a.insert(w);
    }
    return a;
}

inline std::string write_oracle(const Oracle &a) {
    std::string out;
    for (auto &y : a.members()) out += (y.empty() ? "-" : y) + "\n";
    return out;
}

// Query tape content |y>|b> read from cell 0; nullopt for empty or malformed tapes.
struct QueryContent {
    std::string word;
    std::int64_t answer_pos;
    bool answer;
};

template <class S>
std::optional<QueryContent> read_query_tape(const MachineSpec<S> &m, const Configuration &c) {
    if (!m.roles.query) return std::nullopt;
    int qt = *m.roles.query;
    auto &tape = c.tapes[qt];
    if (tape.empty()) return std::nullopt;
    auto &alpha = m.tapes[qt];
    auto zero = alpha.find("0"), one = alpha.find("1");
    auto &cells = tape.cells();
    if (cells.front().first != 0 || cells.back().first != static_cast<std::int64_t>(cells.size()) - 1)
        return std::nullopt;
    std::string bits;
    for (auto &[p, s] : cells) {
        if (zero && s == *zero) {
            bits += '0';
        } else if (one && s == *one) {
            bits += '1';
        } else {
            return std::nullopt;
        }
    }
    QueryContent q;
    q.answer = bits.back() == '1';
    q.answer_pos = static_cast<std::int64_t>(bits.size()) - 1;
    bits.pop_back();
    q.word = bits;
    return q;
}

// The oracle map on one pre-query configuration (without the state change).
template <class S>
Configuration apply_oracle(const MachineSpec<S> &m, const Configuration &c, const Oracle &a) {
    Configuration out = c;
    out.state = m.query_states->post;
    auto q = read_query_tape(m, c);
    if (q && a.contains(q->word)) {
        auto &alpha = m.tapes[*m.roles.query];
        out.tapes[*m.roles.query].set(q->answer_pos, alpha.at(q->answer ? "0" : "1"));
    }
    return out;
}

}  // namespace qtm
