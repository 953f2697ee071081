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

#include <algorithm>
#include <sstream>

#include "doctest.h"

#include "generators.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/pipeline.hpp"
#include "oracles.hpp"

using namespace mlqaoa;
using namespace mlqaoa::testing;

namespace {

bool contains(const std::vector<RetainedParam>& set, QaoaParams p) {
    return std::any_of(set.begin(), set.end(), [&](const RetainedParam& r) { return r.params == p; });
}

PipelineConfig quick_config(std::uint64_t seed) {
    PipelineConfig c;
    c.seed = seed;
    c.ga.generations = 40;
    return c;
}

}  // namespace

TEST_CASE("interpolate") {
    const Bits y{1, 0, 1, 1};
    CHECK(interpolate(y, std::vector<NodeId>{0, 1, 2, 3}) == y);
    CHECK(interpolate(Bits{1}, std::vector<NodeId>(5, 0)) == Bits(5, 1));
    CHECK_THROWS_AS(interpolate(Bits{1, 0}, std::vector<NodeId>{0, 2}), ArgumentError);
}

TEST_CASE("interpolation preserves cuts through a whole hierarchy") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = erdos_renyi(40, 0.2, Weights::small_integers, seed);
        CoarsenConfig cc;
        cc.coarsest_size = 8;
        const Hierarchy h = build_hierarchy(g, cc, seed);
        const std::size_t top = h.depth();
        const std::size_t cn = h.graphs[top].num_nodes();
        REQUIRE(cn <= 12);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cn); ++mask) {
            Bits y = mask_bits(mask, cn);
            const double coarse = cut_value(h.graphs[top], y);
            for (std::size_t l = top; l > 0; --l) y = interpolate(y, h.parents[l - 1]);
            REQUIRE(cut_value(g, y) == coarse);
        }
    }
}

TEST_CASE("config validation") {
    PipelineConfig c;
    CHECK_NOTHROW(c.validate());
    c.k_params = 0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = {};
    c.top_m = 0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = {};
    c.pool_size = 0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("solve_coarsest on a single edge") {
    const std::vector<Edge> e{{0, 1, 2.5}};
    const WeightedGraph g(2, e);
    const LevelOutcome out = solve_coarsest(g, quick_config(1));
    CHECK(out.objective == 2.5);
    CHECK(out.best[0] != out.best[1]);
}

TEST_CASE("solve_coarsest keeps only top-k parameters that fed the pool") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = erdos_renyi(20, 0.4, Weights::plus_minus_one, seed);
        PipelineConfig c = quick_config(seed);
        c.pool_size = 3;
        const LevelOutcome out = solve_coarsest(g, c);
        const auto top = top_k_params(grid_search(g, c.grid), c.k_params, c.separation);
        CHECK(!out.retained.empty());
        CHECK(out.retained.size() <= std::min(c.k_params, c.pool_size));
        for (const QaoaParams& p : out.retained) {
            CHECK(std::any_of(top.begin(), top.end(), [&](const ParamCandidate& t) { return t.params == p; }));
        }
        CHECK(out.report.best_after >= out.report.best_before);
        CHECK(out.objective == cut_value(g, out.best));
    }
}

TEST_CASE("solve_coarsest finds small optima") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = erdos_renyi(14, 0.5, Weights::plus_minus_one, 500 + seed);
        PipelineConfig c;
        c.seed = seed;
        if (solve_coarsest(g, c).objective == exhaustive_max_cut(g).value) ++hits;
    }
    CHECK(hits >= 8);
}

TEST_CASE("refine_level") {
    const auto g = erdos_renyi(40, 0.2, Weights::plus_minus_one, 3);
    PipelineConfig c = quick_config(3);
    const LevelOutcome coarse = solve_coarsest(g, c);
    Rng rng(3);
    Bits start(40);
    for (auto& b : start) b = static_cast<std::uint8_t>(rng.next() & 1);

    // Same graph as the previous level: the interpolated solution is in the
    // population, so nothing can get worse.
    const LevelOutcome same = refine_level(g, coarse.best, coarse.retained, c, 0);
    CHECK(same.objective >= coarse.objective);
    CHECK(same.report.best_after >= same.report.best_before);
    for (const RetainedParam& p : same.report.params) {
        CHECK(std::find(coarse.retained.begin(), coarse.retained.end(), p.params) != coarse.retained.end());
    }

    PipelineConfig tiny = c;
    tiny.max_qrr_size = 10;
    const LevelOutcome skipped = refine_level(g, start, coarse.retained, tiny, 0);
    CHECK(skipped.report.qrr_skipped);
    CHECK(skipped.objective >= cut_value(g, start));
    CHECK(skipped.retained == coarse.retained);

    CHECK_THROWS_AS(refine_level(g, start, std::vector<QaoaParams>{}, c, 0), ArgumentError);
    CHECK_THROWS_AS(refine_level(g, Bits(39, 0), coarse.retained, c, 0), ArgumentError);
}

TEST_CASE("solve on a graph below the coarsest-size target is one level") {
    const auto g = erdos_renyi(16, 0.4, Weights::unit, 4);
    const PipelineConfig c = quick_config(4);
    const SolveResult r = solve(g, c);
    const LevelOutcome direct = solve_coarsest(g, c);
    REQUIRE(r.levels.size() == 1);
    CHECK(r.assignment == direct.best);
    CHECK(r.objective == direct.objective);
}

TEST_CASE("multilevel solve invariants") {
    const auto g = random_nm(200, 600, Weights::plus_minus_one, 11);
    const PipelineConfig c = quick_config(11);
    const SolveResult r = solve(g, c);
    REQUIRE(r.levels.size() == r.hierarchy.depth() + 1);
    REQUIRE(r.levels.size() > 1);
    CHECK(r.objective == cut_value(g, r.assignment));
    CHECK(r.assignment.size() == 200);
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
        const LevelReport& rep = r.levels[k];
        CHECK(rep.level == r.levels.size() - 1 - k);
        CHECK(rep.best_after >= rep.best_before);
        if (k > 0) {
            CHECK(rep.best_before >= r.levels[k - 1].best_after);
            for (const RetainedParam& p : rep.params) CHECK(contains(r.levels[k - 1].params, p.params));
        }
    }

    const SolveResult again = solve(g, c);
    CHECK(again.assignment == r.assignment);
    PipelineConfig threaded = c;
    threaded.threads = 3;
    CHECK(solve(g, threaded).assignment == r.assignment);
}

TEST_CASE("variant comparison") {
    const auto g = random_nm(150, 450, Weights::plus_minus_one, 12);
    const auto series = run_variant_comparison(g, quick_config(12));
    REQUIRE(series.size() == 3);
    CHECK(series[0].variant == Variant::qrr_only);
    CHECK(series[1].variant == Variant::ga_only);
    CHECK(series[2].variant == Variant::qrr_plus_ga);
    const std::size_t levels = series[0].result.hierarchy.depth() + 1;
    for (const auto& s : series) {
        REQUIRE(s.result.levels.size() == levels);
        CHECK(s.result.levels.front().best_after == series[0].result.levels.front().best_after);
    }
    for (std::size_t k = 1; k < levels; ++k) {
        CHECK(!series[0].result.levels[k].ga_ran);
        CHECK(series[1].result.levels[k].qrr_skipped);
        CHECK(series[2].result.levels[k].ga_ran);
    }
    std::ostringstream out;
    write_variant_csv(out, series);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "level,variant,objective,runtime_seconds");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3 * levels);
}

TEST_CASE("pipeline config JSON") {
    PipelineConfig c;
    c.k_params = 7;
    c.coarsen.matcher = MatcherKind::logarithmic;
    c.ga.mutation_rate = 0.02;
    c.seed = 99;
    const nlohmann::json j = pipeline_config_to_json(c);
    const PipelineConfig back = pipeline_config_from_json(j);
    CHECK(pipeline_config_to_json(back) == j);
    CHECK(back.k_params == 7);
    CHECK(back.coarsen.matcher == MatcherKind::logarithmic);

    const PipelineConfig partial = pipeline_config_from_json({{"top_m", 3}});
    CHECK(partial.top_m == 3);
    CHECK(partial.k_params == PipelineConfig{}.k_params);

    CHECK_THROWS_AS(pipeline_config_from_json({{"bogus", 1}}), ArgumentError);
    CHECK_THROWS_AS(pipeline_config_from_json({{"top_m", "five"}}), ArgumentError);
    CHECK_THROWS_AS(pipeline_config_from_json({{"top_m", 0}}), ArgumentError);

    PipelineConfig threaded = c;
    threaded.threads = 8;
    CHECK(config_digest(threaded) == config_digest(c));
    PipelineConfig reseeded = c;
    reseeded.seed = 100;
    CHECK(config_digest(reseeded) != config_digest(c));
    CHECK(config_digest(c).size() == 16);
}

TEST_CASE("solve report JSON") {
    const auto g = erdos_renyi(12, 0.4, Weights::unit, 2);
    const PipelineConfig c = quick_config(2);
    const SolveResult r = solve(g, c);
    const nlohmann::json j = solve_report_to_json(r, c, "toy");
    for (const char* key : {"instance", "config_digest", "levels", "objective", "assignment", "seed", "runtime_seconds"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["objective"] == r.objective);
    CHECK(j["levels"].size() == r.levels.size());
    CHECK(j["levels"][0].contains("best_before"));
}
