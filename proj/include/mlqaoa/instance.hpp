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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace mlqaoa {

using NodeId = std::uint32_t;

/// A cut assignment y ∈ {0,1}^n; spin convention s_i = 1 - 2 y_i.
using Bits = std::vector<std::uint8_t>;

struct Edge {
    NodeId u;
    NodeId v;
    double w;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    NodeId node;
    double w;
};

/// Immutable sparse undirected weighted graph.
///
/// Construction canonicalizes the edge list: endpoints are ordered (u < v),
/// parallel edges are summed, zero-weight aggregates are dropped and edges are
/// sorted lexicographically. Adjacency is stored in CSR form with each
/// neighbor list sorted by node id.
class WeightedGraph {
 public:
    WeightedGraph() = default;

    /// Throws ArgumentError on self-loops or out-of-range endpoints.
    WeightedGraph(std::size_t n, std::span<const Edge> edges);

    std::size_t num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const Neighbor> neighbors(NodeId i) const noexcept {
        return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
    }

    /// Position of node i's first neighbor in the flat CSR adjacency array.
    std::size_t adjacency_begin(NodeId i) const noexcept { return offsets_[i]; }
    std::size_t adjacency_size() const noexcept { return adjacency_.size(); }

    std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

    /// Weight of edge (i, j), or 0 if absent.
    double weight(NodeId i, NodeId j) const;

    double total_weight() const noexcept { return positive_weight_ + negative_weight_; }
    double positive_weight() const noexcept { return positive_weight_; }
    double negative_weight() const noexcept { return negative_weight_; }

    /// True when every weight is an integer (exact cut arithmetic).
    bool integral_weights() const noexcept { return integral_; }

 private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
    double positive_weight_ = 0.0;
    double negative_weight_ = 0.0;
    bool integral_ = true;
};

struct QuboTerm {
    std::size_t i;
    std::size_t j;
    double q;
};

/// Upper-triangular QUBO max Σ_{i≤j} Q_ij x_i x_j over binary x.
class QuboInstance {
 public:
    /// Requires n ≥ 1, i ≤ j < n and unique (i, j) keys; zero entries are dropped.
    QuboInstance(std::size_t n, std::vector<QuboTerm> terms);

    std::size_t num_variables() const noexcept { return n_; }
    std::span<const QuboTerm> terms() const noexcept { return terms_; }

 private:
    std::size_t n_;
    std::vector<QuboTerm> terms_;
};

/// Which QUBO→MaxCut construction produced a ReductionRecord.
enum class ReductionMap {
    /// W_ij = Q_ij, W_{i,n} = Q_ii + Σ_{j≥i} Q_ij (the classic anchor map).
    direct,
    /// Ising-derived map: W_ij = -Q_ij, W_{i,n} = 2 Q_ii + Σ_{j≠i} Q_ij.
    ising,
};

/// MaxCut graph on n+1 nodes with Cut(y) = scale · Qubo(retrieve(y)) + offset.
struct ReductionRecord {
    WeightedGraph graph;
    NodeId anchor = 0;
    double scale = 1.0;
    double offset = 0.0;
    ReductionMap map = ReductionMap::ising;
};

/// Σ w_uv [y_u ≠ y_v].
double cut_value(const WeightedGraph& graph, std::span<const std::uint8_t> y);

double qubo_value(const QuboInstance& q, std::span<const std::uint8_t> x);

/// Builds the anchor-node MaxCut instance. The direct map is tried first and
/// accepted only if an affine fit with positive scale reproduces the QUBO on a
/// fixed set of probe assignments; otherwise the Ising-derived map is used.
ReductionRecord qubo_to_maxcut(const QuboInstance& q);

/// Direct anchor map without validation (exposed for tests).
WeightedGraph direct_reduction_graph(const QuboInstance& q);

/// x_i = y_i XOR y_anchor.
Bits retrieve_qubo_solution(const ReductionRecord& rec, std::span<const std::uint8_t> y);

// --- file formats -----------------------------------------------------------

WeightedGraph parse_gset(std::istream& in, const std::string& source = "<gset>");
WeightedGraph load_gset(const std::filesystem::path& path);
void write_gset(std::ostream& out, const WeightedGraph& graph);

WeightedGraph parse_matrix_market(std::istream& in, const std::string& source = "<mtx>");
WeightedGraph load_matrix_market(const std::filesystem::path& path);

QuboInstance qubo_from_json(const nlohmann::json& doc);
nlohmann::json qubo_to_json(const QuboInstance& q);
QuboInstance load_qubo_json(const std::filesystem::path& path);

/// Result document: {"instance", "n", "objective", "assignment", "runtime_seconds",
/// "seed", "metadata"}.
struct SolutionRecord {
    std::string instance;
    std::size_t n = 0;
    double objective = 0.0;
    Bits assignment;
    double runtime_seconds = 0.0;
    std::uint64_t seed = 0;
    nlohmann::json metadata = nlohmann::json::object();
};

std::string bits_to_string(std::span<const std::uint8_t> bits);
Bits bits_from_string(const std::string& s);

nlohmann::json solution_to_json(const SolutionRecord& rec);
SolutionRecord solution_from_json(const nlohmann::json& doc);

/// Validates |assignment| == n before writing; throws ArgumentError otherwise.
void save_solution(const std::filesystem::path& path, const SolutionRecord& rec);
SolutionRecord load_solution(const std::filesystem::path& path);

/// Writes a JSON document with two-space indentation; throws IoError on failure.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace mlqaoa
