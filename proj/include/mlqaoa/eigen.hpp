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
#include <span>
#include <vector>

namespace mlqaoa {

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order.
/// Eigenvector k occupies vectors[k*n, (k+1)*n).
struct EigenDecomposition {
    std::size_t n = 0;
    std::vector<double> values;
    std::vector<double> vectors;

    std::span<const double> vector(std::size_t k) const {
        return {vectors.data() + k * n, n};
    }
};

enum class EigenBackend {
    /// Cyclic Jacobi for n ≤ 64, LAPACK dsyevd above.
    automatic,
    jacobi,
    lapack,
};

/// Full eigendecomposition of the row-major symmetric n×n matrix `a`, taken
/// by value so callers can move large matrices in; LAPACK works in place.
/// Throws ArgumentError if |a_ij - a_ji| > 1e-12 anywhere.
EigenDecomposition symmetric_eigendecomposition(std::vector<double> a, std::size_t n,
                                                EigenBackend backend = EigenBackend::automatic);

}  // namespace mlqaoa
