// Copyright 2026 The mlqaoa Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "cli.hpp"
#include "generators.hpp"
#include "mlqaoa/instance.hpp"
#include "oracles.hpp"

using namespace mlqaoa;
using namespace mlqaoa::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("mlqaoa_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mlqaoa");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path write_graph(const fs::path& dir, const std::string& name, const WeightedGraph& g) {
    const fs::path p = dir / name;
    std::ofstream f(p);
    write_gset(f, g);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

WeightedGraph triangle() {
    const std::vector<Edge> e{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    return WeightedGraph(3, e);
}

}  // namespace

TEST_CASE("cli exit codes") {
    TempDir tmp;
    CHECK(run_cli({"--help"}).code == cli::kSuccess);
    CHECK(run_cli({}).code == cli::kInputError);
    CHECK(run_cli({"solve"}).code == cli::kInputError);
    CHECK(run_cli({"solve", (tmp.path / "missing.gset").string()}).code == cli::kInputError);
    CHECK(run_cli({"frobnicate"}).code == cli::kInputError);

    const fs::path bad = tmp.path / "bad.gset";
    std::ofstream(bad) << "3 1\n1 9 1\n";
    const Run r = run_cli({"solve", bad.string(), "--out-dir", tmp.path.string()});
    CHECK(r.code == cli::kInputError);
    CHECK(r.err.find("bad.gset:2:") != std::string::npos);

    const fs::path g = write_graph(tmp.path, "tri.gset", triangle());
    CHECK(run_cli({"baseline", g.string(), "--method", "simplex"}).code == cli::kInputError);

    const fs::path cfg = tmp.path / "cfg.json";
    std::ofstream(cfg) << R"({"no_such_key": 1})";
    CHECK(run_cli({"solve", g.string(), "--config", cfg.string()}).code == cli::kInputError);

    CHECK(run_cli({"verify", "--suite", "oracle", "--out-dir", tmp.path.string()}).code == cli::kSuccess);
    CHECK(run_cli({"verify", "--suite", "nonsense"}).code == cli::kInputError);
}

TEST_CASE("cli solve writes a result and leaves the input alone") {
    TempDir tmp;
    const auto graph = erdos_renyi(14, 0.4, Weights::plus_minus_one, 3);
    const fs::path g = write_graph(tmp.path, "g.gset", graph);
    const std::string before = slurp(g);
    const Run r = run_cli({"solve", g.string(), "--seed", "5", "--out-dir", tmp.path.string()});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(slurp(g) == before);

    const SolutionRecord rec = load_solution(tmp.path / "result.json");
    CHECK(rec.n == 14);
    CHECK(rec.seed == 5);
    CHECK(rec.objective == cut_value(graph, rec.assignment));
    const auto report = read_json_file(tmp.path / "report.json");
    CHECK(report["objective"] == rec.objective);
    CHECK(report.contains("levels"));
}

TEST_CASE("cli solve on a QUBO file") {
    TempDir tmp;
    const QuboInstance q(3, {{0, 0, -1.0}, {1, 1, -1.0}, {0, 1, 2.0}, {2, 2, 1.0}});
    const fs::path p = tmp.path / "q.json";
    write_json_file(p, qubo_to_json(q));
    const Run r = run_cli({"solve", p.string(), "--out-dir", tmp.path.string()});
    REQUIRE(r.code == cli::kSuccess);
    const SolutionRecord rec = load_solution(tmp.path / "result.json");
    CHECK(rec.n == 3);
    CHECK(rec.objective == 1.0);
    CHECK(qubo_value(q, rec.assignment) == rec.objective);
}

TEST_CASE("cli baselines") {
    TempDir tmp;
    const fs::path tri = write_graph(tmp.path, "tri.gset", triangle());
    const std::string out = tmp.path.string();
    REQUIRE(run_cli({"baseline", tri.string(), "--method", "brute_force", "--out-dir", out}).code == 0);
    CHECK(read_json_file(tmp.path / "baseline.json")["objective"] == 2.0);

    const auto graph = random_nm(60, 200, Weights::plus_minus_one, 4);
    const fs::path g = write_graph(tmp.path, "g.gset", graph);
    REQUIRE(run_cli({"baseline", g.string(), "--method", "random", "--seed", "9", "--out-dir", out}).code == 0);
    const auto first = read_json_file(tmp.path / "baseline.json");
    REQUIRE(run_cli({"baseline", g.string(), "--method", "random", "--seed", "9", "--out-dir", out}).code == 0);
    CHECK(read_json_file(tmp.path / "baseline.json")["assignment"] == first["assignment"]);

    // Warm start from a deliberately weak assignment.
    SolutionRecord warm;
    warm.instance = "g";
    warm.n = 60;
    warm.assignment = Bits(60, 0);
    for (std::size_t i = 0; i < 60; i += 3) warm.assignment[i] = 1;
    warm.objective = cut_value(graph, warm.assignment);
    save_solution(tmp.path / "warm.json", warm);
    REQUIRE(run_cli({"baseline", g.string(), "--method", "rank2", "--warm-start", (tmp.path / "warm.json").string(),
                     "--out-dir", out})
                .code == 0);
    const auto rank2 = read_json_file(tmp.path / "baseline.json");
    CHECK(rank2["objective"].get<double>() >= warm.objective);
    CHECK(run_cli({"baseline", g.string(), "--method", "random", "--warm-start", (tmp.path / "warm.json").string(),
                   "--out-dir", out})
              .code == cli::kInputError);
}

TEST_CASE("cli landscape and compare") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    const fs::path small = write_graph(tmp.path, "s.gset", erdos_renyi(10, 0.5, Weights::unit, 1));
    REQUIRE(run_cli({"landscape", small.string(), "--out-dir", out}).code == 0);
    CHECK(fs::exists(tmp.path / "landscape_level_0.csv"));
    const auto land = read_json_file(tmp.path / "landscape.json");
    CHECK(land["levels"].size() == 1);
    CHECK(land["consecutive_similarity"].empty());

    const fs::path big = write_graph(tmp.path, "b.gset", random_nm(120, 360, Weights::plus_minus_one, 2));
    REQUIRE(run_cli({"compare", big.string(), "--out-dir", out}).code == 0);
    std::ifstream csv(tmp.path / "variants.csv");
    std::string line;
    std::size_t rows = 0;
    std::getline(csv, line);
    while (std::getline(csv, line)) ++rows;
    CHECK(rows > 3);
    CHECK(rows % 3 == 0);
}
