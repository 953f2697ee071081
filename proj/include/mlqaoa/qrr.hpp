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
#include <span>
#include <vector>

#include "mlqaoa/eigen.hpp"
#include "mlqaoa/instance.hpp"
#include "mlqaoa/qaoa.hpp"

namespace mlqaoa {

/// Z_ii = 0, Z_ij = -⟨Z_i Z_j⟩ at fixed (γ, β); dense row-major.
struct CorrelationMatrix {
    std::size_t n = 0;
    std::vector<double> values;
    QaoaParams params;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// Only pairs within graph distance 2 can be nonzero at depth 1, so the
/// evaluation loops over those pairs; every other entry is exactly zero.
CorrelationMatrix build_correlation_matrix(const WeightedGraph& graph, QaoaParams params,
                                           unsigned threads = 1);

/// bit_i = 1 iff v_i < 0 (zeros round to 0).
Bits sign_round(std::span<const double> v);

struct RoundedCandidate {
    Bits bits;
    double objective = 0.0;
    std::size_t eigen_index = 0;  // rank in descending eigenvalue order
    QaoaParams params;
};

/// Rounds every eigenvector and keeps the `top_m` best cuts (ties by eigen index).
std::vector<RoundedCandidate> qrr_candidates(const WeightedGraph& graph,
                                             const EigenDecomposition& eig, QaoaParams params,
                                             std::size_t top_m, unsigned threads = 1);

/// Eigendecomposes Z, then as above. Pass an rvalue to avoid copying Z.
std::vector<RoundedCandidate> qrr_candidates(const WeightedGraph& graph, CorrelationMatrix z,
                                             std::size_t top_m, unsigned threads = 1);

/// Debug dump: little-endian u64 n, then n² little-endian f64 row-major.
void write_correlation_matrix(const std::filesystem::path& path, const CorrelationMatrix& z);
CorrelationMatrix read_correlation_matrix(const std::filesystem::path& path);

}  // namespace mlqaoa
