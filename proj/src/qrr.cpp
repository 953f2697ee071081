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

#include "mlqaoa/qrr.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>

#include "mlqaoa/errors.hpp"
#include "mlqaoa/parallel.hpp"

namespace mlqaoa {

CorrelationMatrix build_correlation_matrix(const WeightedGraph& graph, QaoaParams params,
                                           unsigned threads) {
    const std::size_t n = graph.num_nodes();
    CorrelationMatrix z;
    z.n = n;
    z.params = params;
    z.values.assign(n * n, 0.0);
    const AnalyticQaoa eval(graph, params);
    // Row i owns the pairs (i, j > i) and writes both (i,j) and (j,i).
    parallel_for(n, threads, [&](std::size_t row) {
        const auto i = static_cast<NodeId>(row);
        std::vector<NodeId> reach;
        for (const Neighbor& k : graph.neighbors(i)) {
            if (k.node > i) reach.push_back(k.node);
            for (const Neighbor& j : graph.neighbors(k.node)) {
                if (j.node > i) reach.push_back(j.node);
            }
        }
        std::sort(reach.begin(), reach.end());
        reach.erase(std::unique(reach.begin(), reach.end()), reach.end());
        for (NodeId j : reach) {
            const double value = -eval.zz(i, j);
            z.values[row * n + j] = value;
            z.values[std::size_t(j) * n + row] = value;
        }
    });
    return z;
}

Bits sign_round(std::span<const double> v) {
    Bits bits(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) bits[i] = static_cast<std::uint8_t>(v[i] < 0.0);
    return bits;
}

std::vector<RoundedCandidate> qrr_candidates(const WeightedGraph& graph,
                                             const EigenDecomposition& eig, QaoaParams params,
                                             std::size_t top_m, unsigned threads) {
    if (top_m == 0) throw ArgumentError("top_m must be at least 1");
    if (eig.n != graph.num_nodes()) throw ArgumentError("eigendecomposition size mismatch");
    std::vector<RoundedCandidate> all(eig.n);
    parallel_for(eig.n, threads, [&](std::size_t k) {
        all[k].bits = sign_round(eig.vector(k));
        all[k].objective = cut_value(graph, all[k].bits);
        all[k].eigen_index = k;
        all[k].params = params;
    });
    std::stable_sort(all.begin(), all.end(), [](const RoundedCandidate& a, const RoundedCandidate& b) {
        return a.objective > b.objective;
    });
    if (all.size() > top_m) all.resize(top_m);
    return all;
}

std::vector<RoundedCandidate> qrr_candidates(const WeightedGraph& graph, CorrelationMatrix z,
                                             std::size_t top_m, unsigned threads) {
    if (z.n != graph.num_nodes()) throw ArgumentError("correlation matrix size mismatch");
    const QaoaParams params = z.params;
    const EigenDecomposition eig = symmetric_eigendecomposition(std::move(z.values), z.n);
    return qrr_candidates(graph, eig, params, top_m, threads);
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "correlation dump assumes a little-endian host");

}  // namespace

void write_correlation_matrix(const std::filesystem::path& path, const CorrelationMatrix& z) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const std::uint64_t n = z.n;
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(z.values.data()),
              static_cast<std::streamsize>(z.values.size() * sizeof(double)));
    if (!out) throw IoError("write to " + path.string() + " failed");
}

CorrelationMatrix read_correlation_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in) throw IoError(path.string() + ": truncated header");
    CorrelationMatrix z;
    z.n = n;
    z.values.resize(n * n);
    in.read(reinterpret_cast<char*>(z.values.data()),
            static_cast<std::streamsize>(z.values.size() * sizeof(double)));
    if (!in) throw IoError(path.string() + ": truncated matrix");
    return z;
}

}  // namespace mlqaoa
