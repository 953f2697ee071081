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

#include "mlqaoa/eigen.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mlqaoa/errors.hpp"

namespace mlqaoa {

namespace {

constexpr std::size_t kJacobiMaxSize = 64;
constexpr int kJacobiMaxSweeps = 100;

// Cyclic Jacobi: sweep over all (p, q) above the diagonal, annihilating a_pq
// with a plane rotation, until the off-diagonal mass is negligible relative to
// the Frobenius norm.
EigenDecomposition jacobi(std::vector<double> a, std::size_t n) {
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double frob = 0.0;
    for (double x : a) frob += x * x;
    const double stop = frob * 1e-30;

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        }
        if (off <= stop) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = a[q * n + p] = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * n + x] > a[y * n + y];
    });
    EigenDecomposition out;
    out.n = n;
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t col = order[k];
        out.values[k] = a[col * n + col];
        for (std::size_t i = 0; i < n; ++i) out.vectors[k * n + i] = v[i * n + col];
    }
    return out;
}

EigenDecomposition lapack(std::vector<double> a, std::size_t n) {
    // Symmetric, so the row-major buffer is also its column-major self.
    std::vector<double> w(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                                           a.data(), static_cast<lapack_int>(n), w.data());
    if (info != 0) throw InvariantError("dsyevd failed with info " + std::to_string(info));
    // Ascending columns → descending contiguous vectors, reversed in place.
    EigenDecomposition out;
    out.n = n;
    out.values.assign(w.rbegin(), w.rend());
    for (std::size_t k = 0; k < n / 2; ++k) {
        std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(k * n),
                         a.begin() + static_cast<std::ptrdiff_t>((k + 1) * n),
                         a.begin() + static_cast<std::ptrdiff_t>((n - 1 - k) * n));
    }
    out.vectors = std::move(a);
    return out;
}

}  // namespace

EigenDecomposition symmetric_eigendecomposition(std::vector<double> a, std::size_t n,
                                                EigenBackend backend) {
    if (a.size() != n * n) throw ArgumentError("matrix buffer is not n×n");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(std::abs(a[i * n + j] - a[j * n + i]) <= 1e-12)) {
                throw ArgumentError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
            }
        }
    }
    if (n == 0) return {};
    if (backend == EigenBackend::automatic) {
        backend = n <= kJacobiMaxSize ? EigenBackend::jacobi : EigenBackend::lapack;
    }
    return backend == EigenBackend::jacobi ? jacobi(std::move(a), n) : lapack(std::move(a), n);
}

}  // namespace mlqaoa
