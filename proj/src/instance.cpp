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

#include "mlqaoa/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "mlqaoa/errors.hpp"
#include "mlqaoa/rng.hpp"

namespace mlqaoa {

WeightedGraph::WeightedGraph(std::size_t n, std::span<const Edge> edges) : n_(n) {
    if (n > std::numeric_limits<NodeId>::max()) throw ArgumentError("graph too large");
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) {
            throw ArgumentError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                ") out of range for " + std::to_string(n) + " nodes");
        }
        if (e.u == e.v) throw ArgumentError("self-loop on node " + std::to_string(e.u));
        if (!std::isfinite(e.w)) throw ArgumentError("non-finite edge weight");
        canon.push_back(e.u < e.v ? e : Edge{e.v, e.u, e.w});
    }
    std::stable_sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t k = 0; k < canon.size();) {
        Edge agg = canon[k];
        std::size_t l = k + 1;
        for (; l < canon.size() && canon[l].u == agg.u && canon[l].v == agg.v; ++l) {
            agg.w += canon[l].w;
        }
        if (agg.w != 0.0) edges_.push_back(agg);
        k = l;
    }

    std::vector<std::size_t> degree(n, 0);
    for (const Edge& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
        (e.w > 0 ? positive_weight_ : negative_weight_) += e.w;
        if (e.w != std::floor(e.w)) integral_ = false;
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    adjacency_.resize(offsets_[n]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v), so filling in edge order leaves every
    // neighbor list sorted: node i sees its smaller neighbors (as v) first,
    // in increasing u, then its larger neighbors in increasing v.
    for (const Edge& e : edges_) adjacency_[cursor[e.v]++] = {e.u, e.w};
    for (const Edge& e : edges_) adjacency_[cursor[e.u]++] = {e.v, e.w};
}

double WeightedGraph::weight(NodeId i, NodeId j) const {
    if (i >= n_ || j >= n_) throw ArgumentError("node index out of range");
    const auto nb = neighbors(i);
    const auto it = std::lower_bound(nb.begin(), nb.end(), j,
                                     [](const Neighbor& a, NodeId b) { return a.node < b; });
    return (it != nb.end() && it->node == j) ? it->w : 0.0;
}

QuboInstance::QuboInstance(std::size_t n, std::vector<QuboTerm> terms) : n_(n) {
    if (n == 0) throw ArgumentError("QUBO needs at least one variable");
    for (const QuboTerm& t : terms) {
        if (t.i > t.j) throw ArgumentError("QUBO term below the diagonal");
        if (t.j >= n) throw ArgumentError("QUBO term index out of range");
        if (!std::isfinite(t.q)) throw ArgumentError("non-finite QUBO coefficient");
    }
    std::sort(terms.begin(), terms.end(), [](const QuboTerm& a, const QuboTerm& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (std::size_t k = 1; k < terms.size(); ++k) {
        if (terms[k].i == terms[k - 1].i && terms[k].j == terms[k - 1].j) {
            throw ArgumentError("duplicate QUBO term (" + std::to_string(terms[k].i) + ", " +
                                std::to_string(terms[k].j) + ")");
        }
    }
    std::erase_if(terms, [](const QuboTerm& t) { return t.q == 0.0; });
    terms_ = std::move(terms);
}

double cut_value(const WeightedGraph& graph, std::span<const std::uint8_t> y) {
    if (y.size() != graph.num_nodes()) {
        throw ArgumentError("assignment length " + std::to_string(y.size()) + " != node count " +
                            std::to_string(graph.num_nodes()));
    }
    double cut = 0.0;
    for (const Edge& e : graph.edges()) {
        if ((y[e.u] != 0) != (y[e.v] != 0)) cut += e.w;
    }
    return cut;
}

double qubo_value(const QuboInstance& q, std::span<const std::uint8_t> x) {
    if (x.size() != q.num_variables()) {
        throw ArgumentError("assignment length " + std::to_string(x.size()) +
                            " != variable count " + std::to_string(q.num_variables()));
    }
    double value = 0.0;
    for (const QuboTerm& t : q.terms()) {
        if (x[t.i] != 0 && x[t.j] != 0) value += t.q;
    }
    return value;
}

WeightedGraph direct_reduction_graph(const QuboInstance& q) {
    const std::size_t n = q.num_variables();
    std::vector<double> anchor(n, 0.0);
    std::vector<Edge> edges;
    for (const QuboTerm& t : q.terms()) {
        if (t.i != t.j) edges.push_back({NodeId(t.i), NodeId(t.j), t.q});
        // Σ_{j≥i} Q_ij contains the diagonal once more.
        anchor[t.i] += (t.i == t.j) ? 2.0 * t.q : t.q;
    }
    for (std::size_t i = 0; i < n; ++i) edges.push_back({NodeId(i), NodeId(n), anchor[i]});
    return WeightedGraph(n + 1, edges);
}

namespace {

WeightedGraph ising_reduction_graph(const QuboInstance& q) {
    // x_i = (1 - s_i)/2 turns Σ Q_ij x_i x_j into Σ J_ij s_i s_j + Σ h_i s_i + c with
    // J_ij = Q_ij/4 and h_i = -Q_ii/2 - Σ_{j≠i} Q_ij/4. The anchor spin absorbs the
    // fields; w = -4J then gives Cut(y) = 2·Qubo(y XOR y_anchor).
    const std::size_t n = q.num_variables();
    std::vector<double> anchor(n, 0.0);
    std::vector<Edge> edges;
    for (const QuboTerm& t : q.terms()) {
        if (t.i == t.j) {
            anchor[t.i] += 2.0 * t.q;
        } else {
            edges.push_back({NodeId(t.i), NodeId(t.j), -t.q});
            anchor[t.i] += t.q;
            anchor[t.j] += t.q;
        }
    }
    for (std::size_t i = 0; i < n; ++i) edges.push_back({NodeId(i), NodeId(n), anchor[i]});
    return WeightedGraph(n + 1, edges);
}

struct AffineFit {
    double scale = 1.0;
    double offset = 0.0;
    double residual = 0.0;
};

// Least-squares fit of cut = scale·qubo + offset over the probe assignments.
AffineFit fit_affine(const ReductionRecord& rec, const QuboInstance& q,
                     const std::vector<Bits>& probes) {
    std::vector<double> xs, ys;
    for (const Bits& y : probes) {
        xs.push_back(qubo_value(q, retrieve_qubo_solution(rec, y)));
        ys.push_back(cut_value(rec.graph, y));
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    AffineFit fit;
    if (sxx > 0) fit.scale = sxy / sxx;
    fit.offset = my - fit.scale * mx;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        fit.residual = std::max(fit.residual, std::abs(ys[k] - fit.scale * xs[k] - fit.offset));
    }
    return fit;
}

std::vector<Bits> reduction_probes(std::size_t nodes) {
    Rng rng(0x7175626f);
    std::vector<Bits> probes;
    probes.emplace_back(nodes, 0);
    probes.emplace_back(nodes, 1);
    for (int k = 0; k < 30; ++k) {
        Bits y(nodes);
        for (auto& b : y) b = static_cast<std::uint8_t>(rng.next() & 1);
        probes.push_back(std::move(y));
    }
    return probes;
}

double residual_tolerance(const QuboInstance& q) {
    double mag = 1.0;
    for (const QuboTerm& t : q.terms()) mag += std::abs(t.q);
    return 1e-9 * mag;
}

}  // namespace

ReductionRecord qubo_to_maxcut(const QuboInstance& q) {
    const std::size_t n = q.num_variables();
    const auto probes = reduction_probes(n + 1);
    const double tol = residual_tolerance(q);

    ReductionRecord direct{direct_reduction_graph(q), NodeId(n), 1.0, 0.0, ReductionMap::direct};
    const AffineFit fit = fit_affine(direct, q, probes);
    if (fit.scale > 0 && fit.residual <= tol) {
        direct.scale = fit.scale;
        direct.offset = fit.offset;
        return direct;
    }

    ReductionRecord ising{ising_reduction_graph(q), NodeId(n), 2.0, 0.0, ReductionMap::ising};
    for (const Bits& y : probes) {
        const double expect = ising.scale * qubo_value(q, retrieve_qubo_solution(ising, y));
        if (std::abs(cut_value(ising.graph, y) - expect) > tol) {
            throw InvariantError("Ising-derived QUBO reduction failed its affine check");
        }
    }
    return ising;
}

Bits retrieve_qubo_solution(const ReductionRecord& rec, std::span<const std::uint8_t> y) {
    if (y.size() != rec.graph.num_nodes()) {
        throw ArgumentError("cut assignment length " + std::to_string(y.size()) +
                            " != reduced node count " + std::to_string(rec.graph.num_nodes()));
    }
    const std::uint8_t a = y[rec.anchor] != 0;
    Bits x(rec.anchor);
    for (std::size_t i = 0; i < rec.anchor; ++i) x[i] = static_cast<std::uint8_t>((y[i] != 0) ^ a);
    return x;
}

}  // namespace mlqaoa
