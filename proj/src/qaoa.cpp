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

#include "mlqaoa/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "format.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/parallel.hpp"

namespace mlqaoa {

AnalyticQaoa::AnalyticQaoa(const WeightedGraph& graph, QaoaParams params, double kappa)
        : graph_(&graph),
          params_(params),
          sin4b_(std::sin(4.0 * params.beta)),
          sin2b_sq_(std::sin(2.0 * params.beta) * std::sin(2.0 * params.beta)) {
    const double phase = kappa * params.gamma;
    cos_.resize(graph.adjacency_size());
    sin_.resize(graph.adjacency_size());
    for (NodeId i = 0; i < graph.num_nodes(); ++i) {
        const std::size_t base = graph.adjacency_begin(i);
        const auto nb = graph.neighbors(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            cos_[base + k] = std::cos(phase * nb[k].w);
            sin_[base + k] = std::sin(phase * nb[k].w);
        }
    }
}

AnalyticQaoa::Terms AnalyticQaoa::terms(NodeId i, NodeId j) const {
    const std::size_t n = graph_->num_nodes();
    if (i >= n || j >= n) throw ArgumentError("node index out of range");
    if (i == j) throw ArgumentError("correlation requires i != j");

    constexpr NodeId kEnd = std::numeric_limits<NodeId>::max();
    const auto ni = graph_->neighbors(i);
    const auto nj = graph_->neighbors(j);
    const std::size_t bi = graph_->adjacency_begin(i);
    const std::size_t bj = graph_->adjacency_begin(j);

    // prod_i = Π_{k∈N(i)\{j}} cos(γ̂ w_ik), likewise prod_j. Over the union,
    // a neighbor of only one endpoint contributes the same factor to both
    // products of the quadratic term; `shared_sum`/`shared_diff` collect the
    // common neighbors, where cos(γ̂(w_ik ± w_jk)) differ.
    double prod_i = 1.0, prod_j = 1.0, exclusive = 1.0, shared_sum = 1.0, shared_diff = 1.0;
    double sin_ij = 0.0;
    bool common = false;
    std::size_t a = 0, b = 0;
    while (a < ni.size() || b < nj.size()) {
        if (a < ni.size() && ni[a].node == j) {
            sin_ij = sin_[bi + a];
            ++a;
            continue;
        }
        if (b < nj.size() && nj[b].node == i) {
            ++b;
            continue;
        }
        const NodeId ka = a < ni.size() ? ni[a].node : kEnd;
        const NodeId kb = b < nj.size() ? nj[b].node : kEnd;
        if (ka < kb) {
            const double c = cos_[bi + a++];
            prod_i *= c;
            exclusive *= c;
        } else if (kb < ka) {
            const double c = cos_[bj + b++];
            prod_j *= c;
            exclusive *= c;
        } else {
            const double ca = cos_[bi + a], sa = sin_[bi + a];
            const double cb = cos_[bj + b], sb = sin_[bj + b];
            prod_i *= ca;
            prod_j *= cb;
            shared_sum *= ca * cb - sa * sb;
            shared_diff *= ca * cb + sa * sb;
            common = true;
            ++a;
            ++b;
        }
    }
    Terms t;
    t.linear = 0.5 * sin_ij * (prod_i + prod_j);
    if (common) t.quadratic = -0.5 * exclusive * (shared_sum - shared_diff);
    return t;
}

double AnalyticQaoa::zz(NodeId i, NodeId j) const {
    const Terms t = terms(i, j);
    return sin4b_ * t.linear + sin2b_sq_ * t.quadratic;
}

double AnalyticQaoa::expected_cut() const {
    double total = 0.0;
    for (const Edge& e : graph_->edges()) total += e.w * 0.5 * (1.0 - zz(e.u, e.v));
    return total;
}

double zz_correlation(const WeightedGraph& graph, NodeId i, NodeId j, QaoaParams params) {
    if (i == j) throw ArgumentError("correlation requires i != j");
    return AnalyticQaoa(graph, params).zz(i, j);
}

double expected_cut(const WeightedGraph& graph, QaoaParams params) {
    return AnalyticQaoa(graph, params).expected_cut();
}

OracleResult statevector_oracle(const WeightedGraph& graph, QaoaParams params) {
    const std::size_t n = graph.num_nodes();
    if (n > kOracleMaxQubits) {
        throw SizeError("statevector oracle supports at most " +
                        std::to_string(kOracleMaxQubits) + " qubits, got " + std::to_string(n));
    }
    const std::size_t dim = std::size_t{1} << n;
    auto spin = [](std::size_t x, std::size_t q) { return ((x >> q) & 1) ? -1.0 : 1.0; };

    OracleResult r;
    r.n = n;
    r.amplitudes.resize(dim);
    const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t x = 0; x < dim; ++x) {
        double energy = 0.0;
        for (const Edge& e : graph.edges()) energy += e.w * spin(x, e.u) * spin(x, e.v);
        r.amplitudes[x] = std::polar(amp, -params.gamma * energy);
    }
    // exp(-iβX) = cos β·I - i sin β·X on each qubit.
    const std::complex<double> c(std::cos(params.beta), 0.0);
    const std::complex<double> s(0.0, -std::sin(params.beta));
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t x = 0; x < dim; ++x) {
            if (x & bit) continue;
            const auto a0 = r.amplitudes[x], a1 = r.amplitudes[x | bit];
            r.amplitudes[x] = c * a0 + s * a1;
            r.amplitudes[x | bit] = s * a0 + c * a1;
        }
    }
    r.zz.assign(n * n, 0.0);
    for (std::size_t x = 0; x < dim; ++x) {
        const double p = std::norm(r.amplitudes[x]);
        double cut = 0.0;
        for (const Edge& e : graph.edges()) {
            if (((x >> e.u) ^ (x >> e.v)) & 1) cut += e.w;
        }
        r.expected_cut += p * cut;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) r.zz[i * n + j] += p * spin(x, i) * spin(x, j);
        }
    }
    return r;
}

void update_statistics(LandscapeGrid& grid) {
    const double count = static_cast<double>(grid.values.size());
    grid.mean = std::accumulate(grid.values.begin(), grid.values.end(), 0.0) / count;
    double ss = 0.0;
    for (double v : grid.values) ss += (v - grid.mean) * (v - grid.mean);
    grid.stddev = std::sqrt(ss / count);
}

LandscapeGrid grid_search(const WeightedGraph& graph, const GridSpec& spec, unsigned threads) {
    if (spec.gamma_points < 2 || spec.beta_points < 2) {
        throw ArgumentError("grid needs at least 2 points per axis");
    }
    LandscapeGrid grid;
    grid.spec = spec;
    grid.values.assign(spec.size(), 0.0);
    std::vector<double> sin4b(spec.beta_points), sin2b_sq(spec.beta_points);
    for (std::size_t b = 0; b < spec.beta_points; ++b) {
        sin4b[b] = std::sin(4.0 * spec.beta(b));
        sin2b_sq[b] = std::sin(2.0 * spec.beta(b)) * std::sin(2.0 * spec.beta(b));
    }
    // Per γ row, the edge terms are computed once and reused for every β.
    parallel_for(spec.gamma_points, threads, [&](std::size_t a) {
        const AnalyticQaoa eval(graph, {spec.gamma(a), 0.0});
        double half_weight = 0.0, linear = 0.0, quadratic = 0.0;
        for (const Edge& e : graph.edges()) {
            const auto t = eval.terms(e.u, e.v);
            half_weight += 0.5 * e.w;
            linear += 0.5 * e.w * t.linear;
            quadratic += 0.5 * e.w * t.quadratic;
        }
        for (std::size_t b = 0; b < spec.beta_points; ++b) {
            grid.values[a * spec.beta_points + b] =
                    half_weight - sin4b[b] * linear - sin2b_sq[b] * quadratic;
        }
    });
    update_statistics(grid);
    return grid;
}

std::vector<ParamCandidate> top_k_params(const LandscapeGrid& grid, std::size_t k,
                                         std::size_t separation) {
    if (k == 0) throw ArgumentError("k must be at least 1");
    std::vector<std::size_t> order(grid.values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return grid.values[x] > grid.values[y];
    });
    const std::size_t B = grid.spec.beta_points;
    std::vector<ParamCandidate> out;
    for (std::size_t idx : order) {
        if (out.size() == k) break;
        const std::size_t a = idx / B, b = idx % B;
        const bool clear = std::all_of(out.begin(), out.end(), [&](const ParamCandidate& c) {
            const std::size_t da = a > c.gamma_index ? a - c.gamma_index : c.gamma_index - a;
            const std::size_t db = b > c.beta_index ? b - c.beta_index : c.beta_index - b;
            return std::max(da, db) >= separation;
        });
        if (!clear) continue;
        out.push_back({{grid.spec.gamma(a), grid.spec.beta(b)}, grid.values[idx], a, b});
    }
    return out;
}

ZoneSet detect_zones(const LandscapeGrid& grid, double lambda) {
    ZoneSet zones;
    zones.spec = grid.spec;
    if (grid.stddev <= 1e-12 * std::max(1.0, std::abs(grid.mean))) return zones;
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
        if (std::abs(grid.values[k] - grid.mean) > lambda * grid.stddev) zones.points.push_back(k);
    }
    return zones;
}

double landscape_similarity(const ZoneSet& a, const ZoneSet& b) {
    if (!(a.spec == b.spec)) throw ArgumentError("zone sets come from different grid specs");
    if (a.points.empty() && b.points.empty()) return 1.0;
    std::vector<std::size_t> common;
    std::set_intersection(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
                          std::back_inserter(common));
    const std::size_t uni = a.points.size() + b.points.size() - common.size();
    return static_cast<double>(common.size()) / static_cast<double>(uni);
}

void write_landscape_csv(std::ostream& out, const LandscapeGrid& grid, const ZoneSet& zones) {
    out << "gamma,beta,expected_cut,in_zone\n";
    std::size_t z = 0;
    for (std::size_t a = 0; a < grid.spec.gamma_points; ++a) {
        for (std::size_t b = 0; b < grid.spec.beta_points; ++b) {
            const std::size_t idx = a * grid.spec.beta_points + b;
            while (z < zones.points.size() && zones.points[z] < idx) ++z;
            const bool in_zone = z < zones.points.size() && zones.points[z] == idx;
            out << detail::format_number(grid.spec.gamma(a)) << ','
                << detail::format_number(grid.spec.beta(b)) << ','
                << detail::format_number(grid.values[idx]) << ',' << (in_zone ? 1 : 0) << '\n';
        }
    }
}

}  // namespace mlqaoa
