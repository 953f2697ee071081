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

#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"

#include "generators.hpp"
#include "mlqaoa/coarsen.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/pipeline.hpp"
#include "oracles.hpp"

using namespace mlqaoa;
using namespace mlqaoa::testing;

namespace {

double norm(const Point3& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); }

WeightedGraph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return WeightedGraph(n, edges);
}

SphereEmbedding random_points(std::size_t n, std::uint64_t seed) {
    return init_embedding(WeightedGraph(n, std::span<const Edge>{}), seed);
}

void check_disjoint(const Matching& m, std::size_t n) {
    std::vector<int> seen(n, 0);
    for (auto [a, b] : m) {
        CHECK(a != b);
        CHECK(++seen[a] == 1);
        CHECK(++seen[b] == 1);
    }
}

}  // namespace

TEST_CASE("init_embedding") {
    const auto one = random_points(1, 3);
    REQUIRE(one.points.size() == 1);
    CHECK(norm(one.points[0]) == doctest::Approx(1.0).epsilon(1e-12));

    const auto a = random_points(50, 11), b = random_points(50, 11);
    CHECK(a.points == b.points);

    const auto many = random_points(10000, 5);
    Point3 mean{0, 0, 0};
    for (const auto& p : many.points) {
        CHECK(std::abs(norm(p) - 1.0) <= 1e-9);
        for (int k = 0; k < 3; ++k) mean[k] += p[k] / 10000.0;
    }
    for (int k = 0; k < 3; ++k) CHECK(std::abs(mean[k]) < 0.05);
}

TEST_CASE("relax_embedding single-neighbor moves") {
    for (double w : {1.0, -1.0}) {
        const std::vector<Edge> edge{{0, 1, w}};
        const WeightedGraph g(2, edge);
        SphereEmbedding emb{{Point3{1, 0, 0}, Point3{0, 0, 1}}};
        RelaxOptions opts;
        opts.max_iters = 1;
        const auto out = relax_embedding(g, emb, opts).embedding;
        const Point3 expected = w > 0 ? Point3{0, 0, -1} : Point3{0, 0, 1};
        for (int k = 0; k < 3; ++k) CHECK(out.points[0][k] == doctest::Approx(expected[k]));
    }
}

TEST_CASE("relax_embedding objective never drops on a triangle") {
    const std::vector<Edge> tri{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    const WeightedGraph g(3, tri);
    const SphereEmbedding start = init_embedding(g, 21);
    double previous = embedding_objective(g, start);
    for (std::size_t sweeps = 1; sweeps <= 20; ++sweeps) {
        RelaxOptions opts;
        opts.max_iters = sweeps;
        opts.displacement_tol = 0.0;
        const double now = embedding_objective(g, relax_embedding(g, start, opts).embedding);
        CHECK(now >= previous - 1e-12);
        previous = now;
    }
}

TEST_CASE("relax_embedding keeps unit norms and leaves isolated nodes alone") {
    const auto g = erdos_renyi(60, 0.1, Weights::small_integers, 4);
    const SphereEmbedding start = init_embedding(g, 8);
    const auto out = relax_embedding(g, start).embedding;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        CHECK(std::abs(norm(out.points[i]) - 1.0) <= 1e-9);
        if (g.degree(i) == 0) CHECK(out.points[i] == start.points[i]);
    }
}

TEST_CASE("candidate distances") {
    const SphereEmbedding antipodal{{Point3{0, 0, 1}, Point3{0, 0, -1}}};
    const auto c = pairwise_candidate_distances(antipodal, 1);
    REQUIRE(c.size() == 1);
    CHECK(c[0].d == doctest::Approx(2.0));

    const auto five = random_points(5, 2);
    const auto fast = pairwise_candidate_distances(five, 4);
    CHECK(fast.size() == 10);

    const SphereEmbedding coincident{{Point3{1, 0, 0}, Point3{0, 1, 0}, Point3{1, 0, 0}}};
    const auto cc = pairwise_candidate_distances(coincident, 1);
    REQUIRE(!cc.empty());
    CHECK(cc[0].i == 0);
    CHECK(cc[0].j == 2);
    CHECK(cc[0].d == 0.0);
}

TEST_CASE("k-d tree candidates equal the brute-force list") {
    for (std::size_t n : {5, 300, 1000}) {
        for (std::size_t k : {1, 4, 8}) {
            const auto emb = random_points(n, n * 31 + k);
            const auto fast = pairwise_candidate_distances(emb, k);
            const auto slow = brute_force_candidate_distances(emb, k);
            REQUIRE(fast.size() == slow.size());
            for (std::size_t t = 0; t < fast.size(); ++t) {
                CHECK(fast[t].i == slow[t].i);
                CHECK(fast[t].j == slow[t].j);
                CHECK(fast[t].d == slow[t].d);
            }
            for (std::size_t t = 1; t < fast.size(); ++t) CHECK(fast[t - 1].d <= fast[t].d);
        }
    }
}

TEST_CASE("all-pair brute force is the k = n-1 case, checked by a direct loop") {
    const auto emb = random_points(7, 9);
    const auto list = brute_force_candidate_distances(emb, 6);
    CHECK(list.size() == 21);
    for (const auto& c : list) {
        const auto& p = emb.points[c.i];
        const auto& q = emb.points[c.j];
        const double d = std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) +
                                   (p[2] - q[2]) * (p[2] - q[2]));
        CHECK(c.d == doctest::Approx(d).epsilon(1e-14));
    }
}

TEST_CASE("threshold matching: positive edges everywhere force a single merge") {
    const std::vector<Edge> k3{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    const WeightedGraph g(3, k3);
    const std::vector<Candidate> cands{{0, 1, 0.3}, {1, 2, 0.4}, {0, 2, 0.5}};
    const Matching m = threshold_matching(g, cands, {});
    REQUIRE(m.size() == 1);
    CHECK(m[0] == std::pair<NodeId, NodeId>{0, 1});
}

TEST_CASE("threshold matching with infinite thresholds is greedy over w <= 0 pairs") {
    const MergeThresholds inf{std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity()};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = erdos_renyi(40, 0.2, Weights::plus_minus_one, seed);
        const auto cands = pairwise_candidate_distances(init_embedding(g, seed), 6);
        const Matching m = threshold_matching(g, cands, inf);
        Matching expected;
        std::vector<char> used(40, 0);
        for (const auto& c : cands) {
            if (used[c.i] || used[c.j] || g.weight(c.i, c.j) > 0) continue;
            used[c.i] = used[c.j] = 1;
            expected.emplace_back(c.i, c.j);
        }
        CHECK(m == expected);
    }
}

TEST_CASE("threshold matching declines a far pair that logarithmic matching takes") {
    // Path 0-1-2-3-4: every maximum cut alternates, so 1 and 4 sit on opposite
    // sides and merging them loses the optimum.
    const WeightedGraph g = path_graph(5);
    const std::vector<Candidate> cands{{0, 2, 0.1}, {1, 4, 1.9}};
    const Matching thr = threshold_matching(g, cands, {});
    const Matching log = logarithmic_matching(g, cands);
    CHECK(thr.size() == 1);
    CHECK(log.size() == 2);
    const double fine = exhaustive_max_cut(g).value;
    CHECK(fine == 4);
    CHECK(exhaustive_max_cut(build_coarse_level(g, thr).graph).value == fine);
    CHECK(exhaustive_max_cut(build_coarse_level(g, log).graph).value < fine);
}

TEST_CASE("logarithmic matching pair counts") {
    const auto g4 = WeightedGraph(4, std::span<const Edge>{});
    const std::vector<Candidate> c4{{0, 1, 0.1}, {2, 3, 0.2}, {1, 2, 0.3}, {0, 3, 0.4}};
    CHECK(logarithmic_matching(g4, c4).size() == 2);
    const std::vector<Edge> e{{0, 1, 5.0}};
    const WeightedGraph g2(2, e);
    const std::vector<Candidate> c2{{0, 1, 2.0}};
    CHECK(logarithmic_matching(g2, c2).size() == 1);
}

TEST_CASE("build_coarse_level") {
    const auto g = erdos_renyi(10, 0.5, Weights::small_integers, 3);
    const CoarseLevel same = build_coarse_level(g, Matching{});
    CHECK(same.graph.num_nodes() == 10);
    CHECK(std::equal(g.edges().begin(), g.edges().end(), same.graph.edges().begin(),
                     same.graph.edges().end()));

    const std::vector<Edge> tri{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    const CoarseLevel merged = build_coarse_level(WeightedGraph(3, tri), Matching{{0, 1}});
    CHECK(merged.graph.num_nodes() == 2);
    REQUIRE(merged.graph.num_edges() == 1);
    CHECK(merged.graph.edges()[0].w == 2.0);
    CHECK(merged.parent == std::vector<NodeId>{0, 0, 1});

    CHECK_THROWS_AS(build_coarse_level(g, Matching{{0, 1}, {1, 2}}), ArgumentError);
}

TEST_CASE("coarse cuts equal interpolated fine cuts for every coarse assignment") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = erdos_renyi(10, 0.5, Weights::small_integers, seed);
        const auto cands = pairwise_candidate_distances(init_embedding(g, seed), 9);
        const Matching m = seed % 2 ? logarithmic_matching(g, cands)
                                    : threshold_matching(g, cands, {});
        check_disjoint(m, 10);
        const CoarseLevel level = build_coarse_level(g, m);
        const std::size_t cn = level.graph.num_nodes();
        CHECK(cn == 10 - m.size());
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cn); ++mask) {
            const Bits y = mask_bits(mask, cn);
            REQUIRE(cut_value(level.graph, y) == cut_value(g, interpolate(y, level.parent)));
        }
    }
}

TEST_CASE("hierarchy basics") {
    const auto small = erdos_renyi(20, 0.3, Weights::unit, 1);
    const Hierarchy one = build_hierarchy(small, {}, 0);
    CHECK(one.depth() == 0);
    CHECK(one.parents.empty());

    const auto g = random_nm(300, 900, Weights::plus_minus_one, 77);
    const Hierarchy a = build_hierarchy(g, {}, 5), b = build_hierarchy(g, {}, 5);
    CHECK(a.parents == b.parents);
    REQUIRE(a.depth() >= 1);
    CHECK(a.graphs.back().num_nodes() <= 30);

    // Parent maps compose into a total map onto the coarsest level.
    std::vector<NodeId> composed(g.num_nodes());
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        NodeId c = i;
        for (std::size_t l = 0; l < a.depth(); ++l) c = a.parents[l][c];
        composed[i] = c;
    }
    std::set<NodeId> image(composed.begin(), composed.end());
    CHECK(image.size() == a.graphs.back().num_nodes());

    const auto summary = hierarchy_summary_json(a);
    REQUIRE(summary.size() == a.graphs.size());
    CHECK(summary[0]["n"] == 300);
    CHECK(summary[0]["matcher"] == "threshold");
    CHECK(summary.back()["pairs_merged"] == 0);
}

TEST_CASE("logarithmic hierarchies are logarithmically deep; strict thresholds are deeper") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = random_nm(800, 3200, Weights::unit, seed);
        CoarsenConfig log;
        log.matcher = MatcherKind::logarithmic;
        const std::size_t log_depth = build_hierarchy(g, log, seed).depth();
        CHECK(log_depth <= static_cast<std::size_t>(std::ceil(std::log2(800.0 / 30.0))) + 3);
        CoarsenConfig strict;
        strict.thresholds = {0.1, 1.0};
        CHECK(build_hierarchy(g, strict, seed).depth() >= log_depth);
    }
}
