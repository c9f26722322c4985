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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qtmlab/cli.hpp"

using namespace qtm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fx(const std::string &name) { return (fs::path(QTMLAB_FIXTURE_DIR) / name).string(); }

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

nlohmann::json json_of(const Outcome &o) { return nlohmann::json::parse(o.out); }

}  // namespace

TEST(Cli, CheckAndRun) {
    auto c = cli({"check", fx("had.qtm")});
    EXPECT_EQ(c.code, 0);
    EXPECT_NE(c.out.find("well-formed: yes"), std::string::npos);
    auto r = json_of(cli({"run", fx("had.qtm"), "-x", "0", "--json"}));
    EXPECT_EQ(r["halt_time"], 2);
    EXPECT_EQ(r["rho_exact"], "1/2");
    EXPECT_EQ(r["mode"], "exact");
    auto a = json_of(cli({"run", fx("had.qtm"), "-x", "0", "--json", "--mode", "approx"}));
    EXPECT_NEAR(a["rho"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, Probabilities) {
    auto p = json_of(cli({"prob", fx("bias.qtm"), "-x", "1", "--json"}));
    EXPECT_EQ(p["rho_exact"], "16/25");
    EXPECT_EQ(p["rho_bar_exact"], "9/25");
    auto g = json_of(cli({"gapsq", fx("had2.qtm"), "-x", "0", "--json"}));
    EXPECT_EQ(g["amplitude_exact"], "-1/2");
    EXPECT_EQ(g["halt_time"], json_of(cli({"run", fx("had2.qtm"), "-x", "0", "--json"}))["halt_time"]);
    auto e = json_of(cli({"estimate", fx("had2.qtm"), "-x", "0", "--k", "3", "--accuracy", "0.25", "--json"}));
    EXPECT_GE(e["success_prob"].get<double>(), 8 / (std::numbers::pi * std::numbers::pi));
}

TEST(Cli, OracleCommands) {
    auto o = json_of(cli({"orun", fx("q1.qtm"), "--oracle", fx("a_zero.txt"), "--json"}));
    EXPECT_EQ(o["rho"], 1.0);
    EXPECT_EQ(cli({"orun", fx("q1.qtm"), "--oracle", fx("a_zero.txt"), "--budget", "0"}).code, 1);
    auto audit = cli({"audit-nonadaptive", fx("adapt.qtm"), "--oracle", fx("a_zero.txt")});
    EXPECT_EQ(audit.code, 1);
    EXPECT_NE(audit.out.find("queried word '1'"), std::string::npos);
    EXPECT_EQ(cli({"audit-nonadaptive", fx("dj2.qtm"), "--oracle", fx("a_half4.txt")}).code, 0);
    auto b = json_of(cli({"bbbv", fx("q1.qtm"), "--oracle-a", fx("a_zero.txt"), "--oracle-b", fx("a_empty.txt"), "--json"}));
    EXPECT_EQ(b["lhs"], 1.0);
    EXPECT_TRUE(b["holds"].get<bool>());
}

TEST(Cli, Constructions) {
    auto dj = json_of(cli({"dj", "--n", "2", "--oracle", fx("a_half4.txt"), "--json"}));
    EXPECT_EQ(dj["value"], 0.0);
    EXPECT_TRUE(dj["deterministic"].get<bool>());
    auto all = json_of(cli({"dj", "--length", "4", "--oracle", fx("a_all4.txt"), "--json"}));
    EXPECT_EQ(all["value"], 1.0);
    auto bv = json_of(cli({"bv", "--hidden", "101", "--p", "3", "--json"}));
    EXPECT_EQ(bv["hidden"], "101");
    EXPECT_NEAR(bv["hidden_prob"].get<double>(), 1.0, 1e-12);
    auto dir = fs::temp_directory_path() / "qtmlab_cli_embed";
    fs::create_directories(dir);
    auto file = (dir / "embed.qtm").string();
    EXPECT_EQ(cli({"embed", fx("pmatch1.qtm"), "--p", "1", "-o", file}).code, 0);
    auto pr = json_of(cli({"prob", file, "-x", "1", "--json"}));
    EXPECT_EQ(pr["rho_exact"], "1/4");
    fs::remove_all(dir);
}

TEST(Cli, FunctionClasses) {
    auto a = json_of(cli({"amplify", fx("had2.manifest"), "-x", "0", "--q", "2", "--json"}));
    EXPECT_TRUE(a["meets_bound"].get<bool>());
    EXPECT_EQ(cli({"amplify", fx("had.qtm"), "-x", "0", "--q", "2"}).code, 1);
    auto q = json_of(cli({"qma", fx("vplus.manifest"), "--witness-qubits", "1", "--json"}));
    EXPECT_NEAR(q["max_prob"].get<double>(), 1.0, 1e-9);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"prob", fx("missing.qtm")}).code, 2);
    EXPECT_EQ(cli({"run", fx("had.qtm"), "-x", "2"}).code, 2);
    EXPECT_EQ(cli({"run", fx("desync.qtm"), "-x", "0"}).code, 1);
    EXPECT_EQ(cli({"run", fx("had.qtm"), "-x", "0", "--max-steps", "1"}).code, 1);
    EXPECT_EQ(cli({"verify", "no-such-suite"}).code, 2);
    auto dir = fs::temp_directory_path() / "qtmlab_cli_bad";
    fs::create_directories(dir);
    std::ofstream(dir / "bad.qtm") << "this is not a machine\n";
    auto bad = cli({"check", (dir / "bad.qtm").string()});
    EXPECT_EQ(bad.code, 2);
    EXPECT_FALSE(bad.err.empty());
    fs::remove_all(dir);
}

TEST(Cli, VerifyReports) {
    auto ok = cli({"verify", "gap-squaring"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("failed: 0"), std::string::npos);
    EXPECT_EQ(ok.out, cli({"verify", "gap-squaring"}).out);
    auto j = json_of(cli({"verify", "bv", "--json"}));
    EXPECT_EQ(j["failed"], 0);
    EXPECT_FALSE(j["cases"][0].contains("elapsed_ms"));
    auto t = json_of(cli({"verify", "bv", "--json", "--timing"}));
    EXPECT_TRUE(t["cases"][0].contains("elapsed_ms"));
}

TEST(Cli, EstimationSuiteFailsOnlyOnAdjacentGridBound) {
    auto r = cli({"verify", "estimation", "--json"});
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    int failed = 0;
    for (auto &c : j["cases"]) {
        if (c["status"] == "pass") continue;
        ++failed;
        auto id = c["id"].get<std::string>();
        EXPECT_TRUE(id.find("rho=1/4") != std::string::npos || id.find("rho=3/4") != std::string::npos) << id;
        EXPECT_NE(id.find("pi^2"), std::string::npos) << id;
    }
    EXPECT_EQ(failed, 8);
}

TEST(Cli, GeneratedFixturesMatchRepository) {
    auto dir = fs::temp_directory_path() / "qtmlab_cli_gen";
    fs::remove_all(dir);
    EXPECT_EQ(cli({"gen-fixtures", dir.string()}).code, 0);
    std::size_t n = 0;
    for (auto &e : fs::directory_iterator(dir)) {
        auto shipped = fs::path(QTMLAB_FIXTURE_DIR) / e.path().filename();
        ASSERT_TRUE(fs::exists(shipped)) << e.path();
        EXPECT_EQ(slurp(e.path()), slurp(shipped)) << e.path().filename();
        ++n;
    }
    EXPECT_EQ(n, 26u);
    fs::remove_all(dir);
}

TEST(Cli, BinaryRuns) {
    std::string cmd = std::string(QTMLAB_CLI) + " prob " + fx("bias.qtm") + " -x 1 > /dev/null";
    EXPECT_EQ(std::system(cmd.c_str()), 0);
    std::string bad = std::string(QTMLAB_CLI) + " verify nothing > /dev/null 2>&1";
    int st = std::system(bad.c_str());
    EXPECT_EQ(WEXITSTATUS(st), 2);
}
