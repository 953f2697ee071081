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

#include "mlqaoa/coarsen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kdtree.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/rng.hpp"

namespace mlqaoa {

namespace {

constexpr std::size_t kBruteForceBelow = 256;

double distance(const Point3& a, const Point3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double norm(const Point3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

// Canonical (i < j) candidates with the distance recomputed in canonical
// order, deduplicated and sorted by (d, i, j).
std::vector<Candidate> finalize(const SphereEmbedding& emb,
                                std::vector<std::pair<NodeId, NodeId>> pairs) {
    for (auto& [a, b] : pairs) {
        if (a > b) std::swap(a, b);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<Candidate> out;
    out.reserve(pairs.size());
    for (const auto& [a, b] : pairs) out.push_back({a, b, distance(emb.points[a], emb.points[b])});
    std::stable_sort(out.begin(), out.end(),
                     [](const Candidate& x, const Candidate& y) { return x.d < y.d; });
    return out;
}

}  // namespace

SphereEmbedding init_embedding(const WeightedGraph& graph, std::uint64_t seed) {
    Rng rng(seed);
    SphereEmbedding emb;
    emb.points.resize(graph.num_nodes());
    for (auto& p : emb.points) {
        // Archimedes: z uniform on [-1, 1] gives uniform area on the sphere.
        const double z = rng.uniform(-1.0, 1.0);
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        p = {r * std::cos(phi), r * std::sin(phi), z};
        const double len = norm(p);
        for (double& c : p) c /= len;
    }
    return emb;
}

RelaxResult relax_embedding(const WeightedGraph& graph, SphereEmbedding emb,
                            const RelaxOptions& options) {
    if (emb.points.size() != graph.num_nodes()) {
        throw ArgumentError("embedding size does not match graph");
    }
    RelaxResult result;
    for (std::size_t sweep = 0; sweep < options.max_iters; ++sweep) {
        double max_move = 0.0;
        for (NodeId i = 0; i < graph.num_nodes(); ++i) {
            Point3 c{0, 0, 0};
            for (const Neighbor& nb : graph.neighbors(i)) {
                for (int k = 0; k < 3; ++k) c[k] += nb.w * emb.points[nb.node][k];
            }
            const double len = norm(c);
            if (len <= options.degenerate_tol) continue;
            const Point3 next{-c[0] / len, -c[1] / len, -c[2] / len};
            max_move = std::max(max_move, distance(next, emb.points[i]));
            emb.points[i] = next;
        }
        result.sweeps = sweep + 1;
        if (max_move < options.displacement_tol) break;
    }
    result.embedding = std::move(emb);
    return result;
}

double embedding_objective(const WeightedGraph& graph, const SphereEmbedding& emb) {
    double total = 0.0;
    for (const Edge& e : graph.edges()) total += e.w * distance(emb.points[e.u], emb.points[e.v]);
    return total;
}

std::vector<Candidate> brute_force_candidate_distances(const SphereEmbedding& emb,
                                                       std::size_t k_nn) {
    const std::size_t n = emb.points.size();
    const std::size_t k = std::min(k_nn, n > 0 ? n - 1 : 0);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::vector<std::pair<double, NodeId>> row;
    for (NodeId i = 0; i < n; ++i) {
        row.clear();
        for (NodeId j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = emb.points[i][0] - emb.points[j][0];
            const double dy = emb.points[i][1] - emb.points[j][1];
            const double dz = emb.points[i][2] - emb.points[j][2];
            row.emplace_back(dx * dx + dy * dy + dz * dz, j);
        }
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
        for (std::size_t t = 0; t < k; ++t) pairs.emplace_back(i, row[t].second);
    }
    return finalize(emb, std::move(pairs));
}

std::vector<Candidate> pairwise_candidate_distances(const SphereEmbedding& emb, std::size_t k_nn) {
    const std::size_t n = emb.points.size();
    if (n < 2 || k_nn == 0) return {};
    if (n < kBruteForceBelow) return brute_force_candidate_distances(emb, k_nn);
    const std::size_t k = std::min(k_nn, n - 1);
    detail::KdTree3 tree(emb.points);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(n * k);
    for (NodeId i = 0; i < n; ++i) {
        for (const auto& [d2, j] : tree.nearest(i, k)) pairs.emplace_back(i, j);
    }
    return finalize(emb, std::move(pairs));
}

Matching threshold_matching(const WeightedGraph& graph, std::span<const Candidate> candidates,
                            const MergeThresholds& thresholds) {
    Matching matching;
    if (candidates.empty()) return matching;
    double mean = 0.0, min_d = candidates.front().d;
    for (const Candidate& c : candidates) {
        mean += c.d;
        min_d = std::min(min_d, c.d);
    }
    mean /= static_cast<double>(candidates.size());
    const double limit = std::max(thresholds.delta1 * mean, thresholds.delta2 * min_d);

    std::vector<std::uint8_t> matched(graph.num_nodes(), 0);
    for (const Candidate& c : candidates) {
        if (matched[c.i] || matched[c.j]) continue;
        if (c.d > limit) continue;
        if (graph.weight(c.i, c.j) > 0.0) continue;
        matched[c.i] = matched[c.j] = 1;
        matching.emplace_back(c.i, c.j);
    }
    if (matching.empty()) {
        const Candidate* pick = &candidates.front();
        for (const Candidate& c : candidates) {
            if (graph.weight(c.i, c.j) <= 0.0) {
                pick = &c;
                break;
            }
        }
        matching.emplace_back(pick->i, pick->j);
    }
    return matching;
}

Matching logarithmic_matching(const WeightedGraph& graph, std::span<const Candidate> candidates) {
    Matching matching;
    const std::size_t target = graph.num_nodes() / 2;
    std::vector<std::uint8_t> matched(graph.num_nodes(), 0);
    for (const Candidate& c : candidates) {
        if (matching.size() >= target) break;
        if (matched[c.i] || matched[c.j]) continue;
        matched[c.i] = matched[c.j] = 1;
        matching.emplace_back(c.i, c.j);
    }
    return matching;
}

CoarseLevel build_coarse_level(const WeightedGraph& graph,
                               std::span<const std::pair<NodeId, NodeId>> matching) {
    const std::size_t n = graph.num_nodes();
    constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
    std::vector<NodeId> partner(n, kNone);
    for (const auto& [a, b] : matching) {
        if (a >= n || b >= n || a == b) throw ArgumentError("invalid matching pair");
        if (partner[a] != kNone || partner[b] != kNone) {
            throw ArgumentError("matching is not disjoint");
        }
        partner[a] = b;
        partner[b] = a;
    }
    CoarseLevel level;
    level.parent.assign(n, kNone);
    NodeId next = 0;
    for (NodeId i = 0; i < n; ++i) {
        if (partner[i] != kNone && partner[i] < i) {
            level.parent[i] = level.parent[partner[i]];
        } else {
            level.parent[i] = next++;
        }
    }
    std::vector<Edge> edges;
    edges.reserve(graph.num_edges());
    for (const Edge& e : graph.edges()) {
        const NodeId a = level.parent[e.u], b = level.parent[e.v];
        if (a != b) edges.push_back({a, b, e.w});
    }
    level.graph = WeightedGraph(next, edges);
    return level;
}

std::string to_string(MatcherKind kind) {
    return kind == MatcherKind::threshold ? "threshold" : "logarithmic";
}

MatcherKind matcher_from_string(const std::string& s) {
    if (s == "threshold") return MatcherKind::threshold;
    if (s == "logarithmic") return MatcherKind::logarithmic;
    throw ArgumentError("unknown matcher '" + s + "' (expected threshold|logarithmic)");
}

Hierarchy build_hierarchy(const WeightedGraph& graph, const CoarsenConfig& config,
                          std::uint64_t seed) {
    Hierarchy h;
    h.graphs.push_back(graph);
    h.summary.push_back({0, graph.num_nodes(), graph.num_edges(), config.matcher, 0});
    while (h.graphs.size() - 1 < config.max_levels) {
        const WeightedGraph& fine = h.graphs.back();
        const std::size_t level = h.graphs.size() - 1;
        if (fine.num_nodes() <= config.coarsest_size || fine.num_nodes() < 2) break;

        auto relaxed = relax_embedding(fine, init_embedding(fine, mix_seed(seed, level)),
                                       config.relax);
        const auto candidates = pairwise_candidate_distances(relaxed.embedding, config.k_nn);
        const Matching matching = config.matcher == MatcherKind::threshold
                                          ? threshold_matching(fine, candidates, config.thresholds)
                                          : logarithmic_matching(fine, candidates);
        CoarseLevel coarse = build_coarse_level(fine, matching);
        if (coarse.graph.num_nodes() >= fine.num_nodes()) break;

        h.summary.back().pairs_merged = matching.size();
        h.summary.push_back({level + 1, coarse.graph.num_nodes(), coarse.graph.num_edges(),
                             config.matcher, 0});
        h.parents.push_back(std::move(coarse.parent));
        h.graphs.push_back(std::move(coarse.graph));
    }
    return h;
}

nlohmann::json hierarchy_summary_json(const Hierarchy& h) {
    nlohmann::json levels = nlohmann::json::array();
    for (const LevelSummary& s : h.summary) {
        levels.push_back({{"level", s.level},
                          {"n", s.n},
                          {"m", s.m},
                          {"matcher", to_string(s.matcher)},
                          {"pairs_merged", s.pairs_merged}});
    }
    return levels;
}

}  // namespace mlqaoa
