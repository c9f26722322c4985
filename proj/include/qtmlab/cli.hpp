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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qtmlab/fixtures.hpp"
#include "qtmlab/report.hpp"
#include "qtmlab/suites.hpp"

namespace qtm {

inline Json to_json(const SuiteResult &s, bool timing) {
    Json cases = Json::array();
    for (auto &c : s.cases) {
        Json j{{"id", c.id},   {"lemma", c.lemma},         {"status", c.pass ? "pass" : "fail"},
               {"lhs", c.lhs}, {"rhs", c.rhs},             {"tolerance", c.tolerance},
               {"relation", c.relation}};
        if (!c.error.empty()) j["error"] = c.error;
        if (timing) j["elapsed_ms"] = c.elapsed_ms;
        cases.push_back(std::move(j));
    }
    Json j{{"suite", s.name}, {"cases", cases}, {"passed", s.passed()}, {"failed", s.failed()}};
    if (timing) j["elapsed_ms"] = s.elapsed_ms;
    return j;
}

inline std::string render_suite(const SuiteResult &s, bool timing) {
    std::string out;
    for (auto &c : s.cases) {
        out += std::string(c.pass ? "PASS" : "FAIL") + "  " + c.id + "  [" + c.lemma + "]  ";
        if (c.error.empty()) {
            out += "lhs=" + format_double(c.lhs) + " " + c.relation + " rhs=" + format_double(c.rhs) +
                   " tol=" + format_double(c.tolerance);
        } else {
            out += "error: " + c.error;
        }
        if (timing) out += "  " + format_double(c.elapsed_ms) + "ms";
        out += "\n";
    }
    out += "suite: " + s.name + "\n";
    out += "passed: " + std::to_string(s.passed()) + "\n";
    out += "failed: " + std::to_string(s.failed()) + "\n";
    return out;
}

template <class S>
void put_scalar(Json &j, const std::string &key, const S &v) {
    if constexpr (is_exact_v<S>) {
        put_real(j, key, v);
    } else {
        j[key] = to_string(v);
    }
}

struct CliState {
    std::string mode = "auto";
    std::size_t max_steps = 10000;
    bool json = false;
    bool timing = false;
};

inline bool use_exact(const CliState &st, const std::string &text) {
    if (st.mode == "exact") return true;
    if (st.mode == "approx") return false;
    return text_supports_exact(text);
}

// Calls f with the machine parsed in the selected scalar mode.
template <class F>
int with_machine(const CliState &st, const std::string &path, F &&f) {
    auto text = read_text_file(path);
    if (use_exact(st, text)) return f(parse_machine<Exact>(text));
    return f(parse_machine<Approx>(text));
}

// Accepts a manifest (".manifest") or a bare machine file tagged with `tag`.
template <class F>
int with_witness(const CliState &st, const std::string &path, ClassTag tag, F &&f) {
    if (std::filesystem::path(path).extension() == ".manifest") {
        auto man = parse_manifest(read_text_file(path));
        auto mpath = std::filesystem::path(path).parent_path() / man.machine_path;
        if (use_exact(st, read_text_file(mpath.string()))) return f(load_witness<Exact>(path));
        return f(load_witness<Approx>(path));
    }
    return with_machine(st, path, [&](auto m) { return f(make_witness(std::move(m), tag)); });
}

inline Oracle load_oracle(const std::string &path) { return parse_oracle(read_text_file(path)); }

inline void write_file(const std::filesystem::path &p, const std::string &text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + p.string() + "'");
    f << text;
}

inline void generate_fixtures(const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    for (auto &f : fixtures::bundled()) write_file(dir / f.file, write_machine(f.machine));
    for (auto &[name, a] : fixtures::bundled_oracles()) write_file(dir / name, write_oracle(a));
    Manifest amp{"had2.qtm", ClassTag::FBQP, {}};
    write_file(dir / "had2.manifest", write_manifest(amp));
    Manifest ver{"vplus.qtm", ClassTag::QMASV, {{"witness-tape", 2}}};
    write_file(dir / "vplus.manifest", write_manifest(ver));
}

inline bool is_usage_error(const Error &e) {
    return dynamic_cast<const SyntaxError *>(&e) || dynamic_cast<const TotalityError *>(&e) ||
           dynamic_cast<const RoleError *>(&e) || dynamic_cast<const ModeError *>(&e) ||
           dynamic_cast<const AlphabetError *>(&e) || dynamic_cast<const UsageError *>(&e) ||
           dynamic_cast<const UnknownSuite *>(&e);
}

inline int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum Turing machine laboratory"};
    app.require_subcommand(1);
    CliState st;
    std::string file, input, input_b, oracle_path, oracle_b, hidden, x = "1", suite, dir, output;
    int k = 3, p = 1, q = 1, n = 0, length = 0, witness_tape = 0;
    double accuracy = 0.25, fidelity = 1.0;
    std::optional<std::size_t> budget;
    int code = 0;

    auto common = [&](CLI::App *s) {
        s->add_option("--mode", st.mode, "exact, approx or auto")->check(CLI::IsMember({"exact", "approx", "auto"}));
        s->add_option("--max-steps", st.max_steps, "step limit");
        s->add_flag("--json", st.json, "JSON report");
        s->add_flag("--timing", st.timing, "include elapsed times");
        return s;
    };
    auto with_file = [&](const char *name, const char *help) {
        auto s = common(app.add_subcommand(name, help));
        s->add_option("file", file, "machine file")->required();
        return s;
    };
    auto with_input = [&](const char *name, const char *help) {
        auto s = with_file(name, help);
        s->add_option("--input,-x", input, "input string");
        return s;
    };
    auto emit = [&](const Json &j) { out << render(j, st.json); };
    auto opts = [&] {
        RunOptions o;
        o.max_steps = st.max_steps;
        return o;
    };

    auto check = with_file("check", "check well-formedness");
    check->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            auto rep = check_well_formed(m);
            emit(to_json(rep, m.name));
            return rep.passed ? 0 : 1;
        });
    });

    auto runc = with_input("run", "simulate to the halting time");
    runc->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            emit(to_json(run(m, input, opts())));
            return 0;
        });
    });

    auto prob = with_input("prob", "acceptance probability");
    prob->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            auto r = run(m, input, opts());
            Json j{{"machine", m.name}, {"input", input}};
            put_real(j, "rho", r.accept);
            put_real(j, "rho_bar", r.reject);
            emit(j);
            return 0;
        });
    });

    auto gap = with_input("gap", "acceptance minus rejection probability");
    gap->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            auto r = run(m, input, opts());
            Json j{{"machine", m.name}, {"input", input}};
            put_real(j, "gap", r.accept - r.reject);
            emit(j);
            return 0;
        });
    });

    auto gapsq = with_input("gapsq", "gap squaring by run, phase and reversal");
    gapsq->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            auto g = gap_square(m, input, opts());
            Json j{{"machine", m.name}, {"input", input}, {"halt_time", g.halt_time}};
            put_scalar(j, "amplitude", g.amplitude);
            put_real(j, "squared", g.squared);
            put_real(j, "rho", g.rho);
            emit(j);
            return 0;
        });
    });

    auto est = with_input("estimate", "amplitude estimation readout");
    est->add_option("--k", k, "ancilla width")->required();
    est->add_option("--accuracy", accuracy, "success window half-width")->required();
    est->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            emit(to_json(amplitude_estimate(m, input, k, accuracy, kMaxAncilla, opts())));
            return 0;
        });
    });

    auto embed = with_file("embed", "counting embedding of a permutation predicate");
    embed->add_option("--p", p, "witness length")->required();
    embed->add_option("--witness-tape", witness_tape, "1-based witness tape (default: first work tape)");
    embed->add_option("--output,-o", output, "write the machine here instead of standard output");
    embed->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            auto e = sharp_p_embed(m, p, witness_tape > 0 ? witness_tape - 1 : -1);
            if (output.empty()) {
                out << write_machine(e);
            } else {
                write_file(output, write_machine(e));
            }
            return 0;
        });
    });

    auto orun = with_input("orun", "run with an oracle");
    orun->add_option("--oracle", oracle_path, "oracle file")->required();
    orun->add_option("--budget", budget, "query budget");
    orun->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            auto [res, trace] = run_with_oracle(m, load_oracle(oracle_path), input, budget, opts());
            Json j = to_json(res);
            j["queries"] = to_json(trace);
            emit(j);
            return 0;
        });
    });

    auto audit = with_input("audit-nonadaptive", "nonadaptivity audit");
    audit->add_option("--oracle", oracle_path, "oracle file")->required();
    audit->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            auto rep = nonadaptive_audit(m, load_oracle(oracle_path), input, opts());
            emit(to_json(rep));
            return rep.passed ? 0 : 1;
        });
    });

    auto qmag = with_input("qmag", "query magnitudes");
    qmag->add_option("--oracle", oracle_path, "oracle file")->required();
    qmag->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            emit(to_json(query_magnitudes(m, load_oracle(oracle_path), input, opts())));
            return 0;
        });
    });

    auto bbbv = with_input("bbbv", "query magnitude bound for two oracles");
    bbbv->add_option("--input-b", input_b, "input for the second run (default: --input)");
    bbbv->add_option("--oracle-a", oracle_path, "first oracle file")->required();
    bbbv->add_option("--oracle-b", oracle_b, "second oracle file")->required();
    bbbv->callback([&] {
        code = with_machine(st, file, [&](const auto &m) {
            auto y = bbbv->count("--input-b") ? input_b : input;
            auto r = bbbv_bound(m, load_oracle(oracle_path), load_oracle(oracle_b), input, y, opts());
            emit(to_json(r));
            return r.holds ? 0 : 1;
        });
    });

    auto dj = common(app.add_subcommand("dj", "oracle separation value"));
    auto dj_n = dj->add_option("--n", n, "word length n*n");
    dj->add_option("--length", length, "explicit word length")->excludes(dj_n);
    dj->add_option("--oracle", oracle_path, "oracle file")->required();
    dj->callback([&] {
        auto a = load_oracle(oracle_path);
        if (n == 0 && length == 0) throw UsageError("one of --n or --length is required");
        auto r = n > 0 ? dj_oracle_value(a, n) : dj_value_for_width(a, length);
        Json j{{"width", r.width}, {"members", r.members}, {"words", r.words}, {"deterministic", r.deterministic},
               {"halt_time", r.run.halt_time}};
        put_real(j, "value", r.run.accept);
        emit(j);
        code = 0;
    });

    auto bv = common(app.add_subcommand("bv", "hidden string recovery"));
    auto bv_h = bv->add_option("--hidden", hidden, "hidden string (builds the oracle)");
    auto bv_o = bv->add_option("--oracle", oracle_path, "oracle file")->excludes(bv_h);
    bv->add_option("--p", p, "output length (with --oracle)");
    bv->add_option("--x", x, "input string");
    bv->add_option("--fidelity", fidelity, "inner machine fidelity");
    bv->callback([&] {
        if (!bv->count("--hidden") && !bv_o->count()) throw UsageError("one of --hidden or --oracle is required");
        Oracle b = bv->count("--hidden") ? bv_oracle(x, hidden) : load_oracle(oracle_path);
        int width = bv->count("--hidden") ? static_cast<int>(hidden.size()) : p;
        emit(to_json(bv_recover(b, x, width, fidelity)));
        code = 0;
    });

    auto amp = with_input("amplify", "majority amplification");
    amp->add_option("--q", q, "target exponent")->required();
    amp->callback([&] {
        code = with_witness(st, file, ClassTag::FBQP, [&](const auto &w) {
            auto a = amplify(w, q, input, opts());
            Json j{{"output", a.output}, {"runs", a.runs}, {"bound", a.bound}, {"meets_bound", a.meets_bound}};
            put_real(j, "single", a.single);
            put_real(j, "probability", a.probability);
            emit(j);
            return a.meets_bound ? 0 : 1;
        });
    });

    auto qma = with_input("qma", "best witness acceptance");
    qma->add_option("--witness-qubits", p, "witness cells")->required();
    qma->callback([&] {
        code = with_witness(st, file, ClassTag::QMASV, [&](const auto &v) {
            emit(to_json(qma_best_witness(v, input, p, opts())));
            return 0;
        });
    });

    auto ver = common(app.add_subcommand("verify", "run an invariant suite"));
    ver->add_option("suite", suite, "suite name")->required();
    ver->callback([&] {
        auto r = verify_suite(suite);
        out << (st.json ? to_json(r, st.timing).dump(2) + "\n" : render_suite(r, st.timing));
        code = r.ok() ? 0 : 1;
    });

    auto gen = app.add_subcommand("gen-fixtures", "write the bundled machines and oracles");
    gen->add_option("dir", dir, "target directory")->required();
    gen->callback([&] {
        generate_fixtures(dir);
        code = 0;
    });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        err << e.what() << "\n";
        return is_usage_error(e) ? 2 : 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return code;
}

}  // namespace qtm
