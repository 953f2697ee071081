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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mlqaoa/instance.hpp"

namespace mlqaoa {

using Point3 = std::array<double, 3>;

/// One unit vector per node.
struct SphereEmbedding {
    std::vector<Point3> points;
};

/// Uniform points on S², deterministic per seed (z ~ U[-1,1], φ ~ U[0,2π)).
SphereEmbedding init_embedding(const WeightedGraph& graph, std::uint64_t seed);

struct RelaxOptions {
    std::size_t max_iters = 100;
    /// Sweeps stop once the largest point displacement drops below this.
    double displacement_tol = 1e-6;
    /// Nodes whose weighted neighbor sum is shorter than this are left alone.
    double degenerate_tol = 1e-12;
};

struct RelaxResult {
    SphereEmbedding embedding;
    std::size_t sweeps = 0;
};

/// Gauss-Seidel sweeps of p_i ← -c_i/‖c_i‖ with c_i = Σ_j w_ij p_j, in node order.
RelaxResult relax_embedding(const WeightedGraph& graph, SphereEmbedding emb,
                            const RelaxOptions& options = {});

/// Σ_{(i,j)∈E} w_ij ‖p_i - p_j‖.
double embedding_objective(const WeightedGraph& graph, const SphereEmbedding& emb);

struct Candidate {
    NodeId i;  // i < j
    NodeId j;
    double d;
};

/// Each node's k_nn nearest other nodes, symmetric duplicates collapsed,
/// sorted by (d, i, j). Uses a k-d tree for n ≥ 256, brute force below.
std::vector<Candidate> pairwise_candidate_distances(const SphereEmbedding& emb, std::size_t k_nn);

/// O(n²) reference for `pairwise_candidate_distances`.
std::vector<Candidate> brute_force_candidate_distances(const SphereEmbedding& emb,
                                                       std::size_t k_nn);

struct MergeThresholds {
    double delta1 = 0.5;
    double delta2 = 2.0;
};

using Matching = std::vector<std::pair<NodeId, NodeId>>;

/// Greedy ascending-distance matching under d ≤ max(Δ₁·mean d, Δ₂·min d) and
/// w_ij ≤ 0. If nothing qualifies, the closest pair with w ≤ 0 (or else the
/// closest pair) is merged so that every call makes progress.
Matching threshold_matching(const WeightedGraph& graph, std::span<const Candidate> candidates,
                            const MergeThresholds& thresholds);

/// Greedy ascending-distance matching until ⌊n/2⌋ pairs or candidates run out.
Matching logarithmic_matching(const WeightedGraph& graph, std::span<const Candidate> candidates);

/// Coarse graph plus the fine→coarse parent map.
struct CoarseLevel {
    WeightedGraph graph;
    std::vector<NodeId> parent;
};

/// Coarse ids are assigned in order of each cluster's smallest fine node.
CoarseLevel build_coarse_level(const WeightedGraph& graph, std::span<const std::pair<NodeId, NodeId>> matching);

enum class MatcherKind { threshold, logarithmic };

std::string to_string(MatcherKind kind);
MatcherKind matcher_from_string(const std::string& s);

struct CoarsenConfig {
    MatcherKind matcher = MatcherKind::threshold;
    MergeThresholds thresholds;
    std::size_t k_nn = 8;
    std::size_t coarsest_size = 30;
    RelaxOptions relax;
    /// Hard cap on hierarchy depth; unlimited by default.
    std::size_t max_levels = std::numeric_limits<std::size_t>::max();
};

struct LevelSummary {
    std::size_t level = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    MatcherKind matcher = MatcherKind::threshold;
    /// Pairs merged when building level + 1 from this level (0 at the coarsest).
    std::size_t pairs_merged = 0;
};

/// G_0 (finest) .. G_L (coarsest); parents[l] maps nodes of G_l to G_{l+1}.
struct Hierarchy {
    std::vector<WeightedGraph> graphs;
    std::vector<std::vector<NodeId>> parents;
    std::vector<LevelSummary> summary;

    std::size_t depth() const noexcept { return graphs.size() - 1; }
};

Hierarchy build_hierarchy(const WeightedGraph& graph, const CoarsenConfig& config,
                          std::uint64_t seed);

nlohmann::json hierarchy_summary_json(const Hierarchy& h);

}  // namespace mlqaoa
