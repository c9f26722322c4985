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

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qtmlab/machine.hpp"

namespace qtm {

struct ParseOptions {
    // Leave undefined rows empty instead of raising TotalityError.
    bool allow_partial = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool valid_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '~' || c == '\'' || c == '-' ||
              c == '+'))
            return false;
    return true;
}

inline bool valid_symbol(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';' || c == '(' || c == ')' || c == '{' ||
            c == '}' || c == '%' || c == '=')
            return false;
    return true;
}

class LineCursor {
public:
    LineCursor(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

    [[noreturn]] void fail(std::size_t col, const std::string &what) const {
        throw SyntaxError(line_no_, static_cast<int>(col) + 1, what);
    }
    [[noreturn]] void fail(const std::string &what) const { fail(pos_, what); }

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }
    std::size_t pos() const { return pos_; }
    char peek() {
        skip_ws();
        return pos_ < line_.size() ? line_[pos_] : '\0';
    }
    void expect(char c) {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < line_.size() && line_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    // Reads up to (not including) any of the stop characters or whitespace.
    std::string word(std::string_view stops = "") {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' && line_[pos_] != '\r' &&
               stops.find(line_[pos_]) == std::string_view::npos)
            ++pos_;
        return std::string(line_.substr(start, pos_ - start));
    }
    std::string until(std::string_view marker) {
        std::size_t f = line_.find(marker, pos_);
        if (f == std::string_view::npos) fail("expected '" + std::string(marker) + "'");
        std::string out(trim(line_.substr(pos_, f - pos_)));
        pos_ = f + marker.size();
        return out;
    }
    std::string_view rest() const { return line_.substr(pos_); }

private:
    std::string_view line_;
    int line_no_;
    std::size_t pos_ = 0;
};

inline std::vector<std::string> split_symbols(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace detail

template <class S>
MachineSpec<S> parse_machine(std::string_view text, const ParseOptions &opts = {}) {
    using detail::LineCursor;
    std::string name;
    int k = -1;
    std::vector<std::optional<Alphabet>> tapes;
    std::optional<TapeRoles> roles;
    std::vector<std::string> states;
    std::optional<std::string> initial;
    std::vector<std::string> finals;
    std::optional<std::pair<std::string, std::string>> query_names;
    struct PendingEntry {
        int line, col;
        Literal amp;
        std::string next;
        std::vector<std::string> write;
        std::string moves;
    };
    struct PendingBlock {
        int line, col;
        std::string state;
        std::vector<std::string> read;
        std::vector<PendingEntry> entries;
    };
    std::vector<PendingBlock> blocks;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    bool saw_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        auto pct = raw.find('%');
        std::string_view line(raw);
        if (pct != std::string::npos) line = line.substr(0, pct);
        if (detail::trim(line).empty()) continue;
        bool indented = line.front() == ' ' || line.front() == '\t';
        LineCursor cur(line, line_no);
        if (indented && !blocks.empty() && detail::trim(line).find("->") != std::string_view::npos) {
            PendingEntry e;
            e.line = line_no;
            cur.skip_ws();
            e.col = static_cast<int>(cur.pos()) + 1;
            std::string amp = cur.until("->");
            try {
                e.amp = parse_literal(amp);
            } catch (const SyntaxError &) {
                throw;
            } catch (const Error &err) {
                cur.fail(static_cast<std::size_t>(e.col - 1), err.what());
            }
            cur.expect('(');
            e.next = cur.word(";");
            if (!detail::valid_identifier(e.next)) cur.fail("bad state name");
            cur.expect(';');
            std::size_t save = cur.pos();
            std::string syms = cur.until(";");
            e.write = detail::split_symbols(syms);
            if (static_cast<int>(e.write.size()) != k) cur.fail(save, "expected " + std::to_string(k) + " symbols");
            std::string dirs = cur.until(")");
            for (char c : dirs) {
                if (c == 'L' || c == 'N' || c == 'R') {
                    e.moves += c;
                } else if (c != ' ' && c != ',' && c != '\t') {
                    cur.fail("bad direction '" + std::string(1, c) + "'");
                }
            }
            if (static_cast<int>(e.moves.size()) != k) cur.fail("expected " + std::to_string(k) + " directions");
            if (!cur.at_end()) cur.fail("trailing text");
            blocks.back().entries.push_back(std::move(e));
            continue;
        }
        std::string kw = cur.word("(");
        if (!saw_header) {
            if (kw != "qtm") cur.fail(0, "expected 'qtm <name>' header");
            name = cur.word();
            if (!detail::valid_identifier(name)) cur.fail("bad machine name");
            if (!cur.at_end()) cur.fail("trailing text");
            saw_header = true;
            continue;
        }
        if (kw == "tapes") {
            std::string n = cur.word();
            try {
                k = std::stoi(n);
            } catch (...) {
                cur.fail("bad tape count");
            }
            if (k <= 0 || k > 16) cur.fail("tape count out of range");
            tapes.assign(k, std::nullopt);
        } else if (kw == "tape") {
            if (k < 0) cur.fail(0, "'tape' before 'tapes'");
            std::size_t ipos = cur.pos();
            std::string n = cur.word();
            int idx = 0;
            try {
                idx = std::stoi(n);
            } catch (...) {
                cur.fail(ipos, "bad tape index");
            }
            if (idx < 1 || idx > k) cur.fail(ipos, "tape index out of range");
            if (tapes[idx - 1]) cur.fail(ipos, "duplicate tape declaration");
            std::vector<std::string> input, work;
            for (int part = 0; part < 2; ++part) {
                std::string w = cur.word("{");
                if (w != (part == 0 ? "input" : "work")) cur.fail(part == 0 ? "expected 'input'" : "expected 'work'");
                cur.expect('{');
                std::string body = cur.until("}");
                auto syms = detail::split_symbols(body);
                for (auto &s : syms)
                    if (!detail::valid_symbol(s)) cur.fail("bad symbol '" + s + "'");
                (part == 0 ? input : work) = syms;
            }
            if (std::find(input.begin(), input.end(), kBlankName) != input.end())
                cur.fail("blank symbol in input alphabet");
            try {
                tapes[idx - 1] = Alphabet::make(input, work);
            } catch (const Error &e) {
                cur.fail(e.what());
            }
        } else if (kw == "roles") {
            TapeRoles r;
            std::set<std::string> seen;
            bool has_in = false, has_out = false;
            while (!cur.at_end()) {
                std::size_t p = cur.pos();
                std::string kv = cur.word();
                auto eq = kv.find('=');
                if (eq == std::string::npos) cur.fail(p, "expected role=index");
                std::string role = kv.substr(0, eq);
                int v = 0;
                try {
                    v = std::stoi(kv.substr(eq + 1)) - 1;
                } catch (...) {
                    cur.fail(p, "bad role index");
                }
                if (!seen.insert(role).second) throw RoleError("duplicate role '" + role + "'");
                if (role == "input") {
                    r.input = v;
                    has_in = true;
                } else if (role == "output") {
                    r.output = v;
                    has_out = true;
                } else if (role == "query") {
                    r.query = v;
                } else if (role == "qlist") {
                    r.qlist = v;
                } else {
                    throw RoleError("unknown role '" + role + "'");
                }
            }
            if (!has_in || !has_out) throw RoleError("roles require input and output");
            roles = r;
        } else if (kw == "states") {
            while (!cur.at_end()) {
                std::size_t p = cur.pos();
                std::string s = cur.word();
                if (!detail::valid_identifier(s)) cur.fail(p, "bad state name");
                if (std::find(states.begin(), states.end(), s) != states.end()) cur.fail(p, "duplicate state");
                states.push_back(s);
            }
        } else if (kw == "initial") {
            initial = cur.word();
        } else if (kw == "final") {
            while (!cur.at_end()) finals.push_back(cur.word());
        } else if (kw == "query-states") {
            std::string a = cur.word(), b = cur.word();
            if (a.empty() || b.empty()) cur.fail("expected two states");
            query_names = {a, b};
        } else if (kw == "on") {
            if (k < 0) cur.fail(0, "'on' before 'tapes'");
            PendingBlock b;
            b.line = line_no;
            cur.expect('(');
            b.col = static_cast<int>(cur.pos()) + 1;
            b.state = cur.word(";");
            cur.expect(';');
            std::size_t p = cur.pos();
            std::string syms = cur.until(")");
            b.read = detail::split_symbols(syms);
            if (static_cast<int>(b.read.size()) != k) cur.fail(p, "expected " + std::to_string(k) + " symbols");
            cur.expect(':');
            if (!cur.at_end()) cur.fail("trailing text");
            blocks.push_back(std::move(b));
            continue;
        } else {
            cur.fail(0, "unknown directive '" + kw + "'");
        }
        if (!cur.at_end()) cur.fail("trailing text");
    }
    if (!saw_header) throw SyntaxError(1, 1, "missing 'qtm' header");
    if (k < 0) throw SyntaxError(line_no, 1, "missing 'tapes'");
    std::vector<Alphabet> alphas;
    for (int i = 0; i < k; ++i) {
        if (!tapes[i]) throw SyntaxError(line_no, 1, "tape " + std::to_string(i + 1) + " not declared");
        alphas.push_back(*tapes[i]);
    }
    if (!roles) throw RoleError("missing roles");
    if (states.empty()) throw SyntaxError(line_no, 1, "missing 'states'");
    if (!initial) throw SyntaxError(line_no, 1, "missing 'initial'");
    auto sid = [&](const std::string &s, int ln, int col) -> StateId {
        auto it = std::find(states.begin(), states.end(), s);
        if (it == states.end()) throw SyntaxError(ln, col, "unknown state '" + s + "'");
        return static_cast<StateId>(it - states.begin());
    };
    std::vector<bool> fin(states.size(), false);
    for (auto &f : finals) fin[sid(f, line_no, 1)] = true;
    MachineSpec<S> m(name, alphas, *roles, states, sid(*initial, line_no, 1), fin);
    if (query_names) m.query_states = QueryStates{sid(query_names->first, line_no, 1), sid(query_names->second, line_no, 1)};
    m.validate_roles();
    try {
        m.validate_states();
    } catch (const Error &e) {
        throw SyntaxError(line_no, 1, e.what());
    }
    auto sym = [&](int tape, const std::string &s, int ln, int col) -> Symbol {
        auto v = alphas[tape].find(s);
        if (!v) throw SyntaxError(ln, col, "symbol '" + s + "' not in alphabet of tape " + std::to_string(tape + 1));
        return *v;
    };
    std::vector<bool> seen(m.row_count(), false);
    for (auto &b : blocks) {
        StateId p = sid(b.state, b.line, b.col);
        SymbolVec sigma(k);
        for (int i = 0; i < k; ++i) sigma[i] = sym(i, b.read[i], b.line, b.col);
        std::size_t ri = m.row_index(p, sigma);
        if (seen[ri]) throw SyntaxError(b.line, b.col, "duplicate row " + m.row_label(ri));
        seen[ri] = true;
        if (b.entries.empty()) throw SyntaxError(b.line, b.col, "row without entries");
        Row<S> row;
        for (auto &e : b.entries) {
            Transition<S> t;
            try {
                t.amplitude = resolve_literal<S>(e.amp);
            } catch (const ModeError &) {
                throw;
            }
            t.next = sid(e.next, e.line, e.col);
            t.write.resize(k);
            t.move.resize(k);
            for (int i = 0; i < k; ++i) {
                t.write[i] = sym(i, e.write[i], e.line, e.col);
                t.move[i] = e.moves[i] == 'L' ? Move::L : e.moves[i] == 'R' ? Move::R : Move::N;
            }
            row.push_back(std::move(t));
        }
        normalize_row(row);
        m.mutable_row(ri) = std::move(row);
    }
    // Pre-query rows are implicit: the identity into the post-query state.
    if (m.query_states) {
        StateId pre = m.query_states->pre, post = m.query_states->post;
        for (std::size_t s = 0; s < m.symbol_space(); ++s) {
            SymbolVec sigma = m.decode_symbols(s);
            std::size_t ri = m.row_index(pre, sigma);
            Row<S> ident{{S(1), post, sigma, MoveVec(k, Move::N)}};
            auto &row = m.mutable_row(ri);
            if (!row.empty()) {
                if (row.size() != 1 || !same_target(row[0], ident[0]) || row[0].amplitude != S(1))
                    throw RoleError("pre-query state rows must be omitted or the identity into the post-query state");
            }
            row = ident;
        }
    }
    if (!opts.allow_partial) {
        auto missing = m.undefined_rows();
        if (!missing.empty()) throw TotalityError("missing row " + m.row_label(missing.front()));
    }
    return m;
}

template <class S>
std::string write_machine(const MachineSpec<S> &m) {
    std::ostringstream os;
    os << "qtm " << m.name << "\n";
    os << "tapes " << m.tape_count() << "\n";
    for (std::size_t i = 0; i < m.tape_count(); ++i) {
        auto &a = m.tapes[i];
        os << "tape " << i + 1 << " input {";
        for (std::size_t j = 1; j <= a.input_count; ++j) os << (j > 1 ? "," : "") << a.names[j];
        os << "} work {";
        for (std::size_t j = a.input_count + 1; j < a.size(); ++j) os << (j > a.input_count + 1 ? "," : "") << a.names[j];
        os << "}\n";
    }
    os << "roles input=" << m.roles.input + 1 << " output=" << m.roles.output + 1;
    if (m.roles.query) os << " query=" << *m.roles.query + 1;
    if (m.roles.qlist) os << " qlist=" << *m.roles.qlist + 1;
    os << "\nstates";
    for (auto &s : m.states) os << " " << s;
    os << "\ninitial " << m.states[m.initial] << "\nfinal";
    for (auto q : m.final_states()) os << " " << m.states[q];
    os << "\n";
    if (m.query_states) os << "query-states " << m.states[m.query_states->pre] << " " << m.states[m.query_states->post] << "\n";
    for (std::size_t ri = 0; ri < m.row_count(); ++ri) {
        auto &row = m.row_at(ri);
        if (row.empty()) continue;
        if (m.query_states && m.row_state(ri) == m.query_states->pre) continue;
        auto sigma = m.row_symbols(ri);
        os << "on (" << m.states[m.row_state(ri)] << ";";
        for (std::size_t i = 0; i < sigma.size(); ++i) os << (i ? "," : " ") << m.tapes[i].names[sigma[i]];
        os << "):\n";
        for (auto &t : row) {
            os << "  " << format_literal(t.amplitude) << " -> (" << m.states[t.next] << ";";
            for (std::size_t i = 0; i < t.write.size(); ++i) os << (i ? "," : " ") << m.tapes[i].names[t.write[i]];
            os << "; ";
            for (auto d : t.move) os << move_char(d);
            os << ")\n";
        }
    }
    return os.str();
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// True when the text parses in exact mode (no phase literals).
inline bool text_supports_exact(std::string_view text) {
    try {
        parse_machine<Exact>(text, ParseOptions{true});
        return true;
    } catch (const ModeError &) {
        return false;
    }
}

}  // namespace qtm
