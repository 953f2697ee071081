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

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "mlqaoa/instance.hpp"

namespace mlqaoa {

/// Depth-1 QAOA angles, in radians.
struct QaoaParams {
    double gamma = 0.0;
    double beta = 0.0;

    friend bool operator==(const QaoaParams&, const QaoaParams&) = default;
};

/// Phase-angle scale in the closed form: γ̂ = kappa·γ for the cost unitary
/// exp(-iγ Σ w_uv Z_u Z_v) and mixer exp(-iβ Σ X). Pinned against the
/// statevector oracle (see qaoa_test).
inline constexpr double kConventionScale = 2.0;

/// Closed-form depth-1 correlations ⟨Z_i Z_j⟩ for a field-free Ising cost.
///
/// Construction tabulates cos(γ̂ w) and sin(γ̂ w) for every adjacency entry, so
/// each correlation is a trig-free merge of two sorted neighbor lists,
/// O(deg i + deg j). Absent edges contribute w = 0. The graph must outlive
/// the evaluator.
class AnalyticQaoa {
 public:
    AnalyticQaoa(const WeightedGraph& graph, QaoaParams params,
                 double kappa = kConventionScale);

    /// β-independent parts of a correlation:
    /// ⟨Z_i Z_j⟩ = sin(4β)·linear + sin²(2β)·quadratic.
    struct Terms {
        double linear = 0.0;
        double quadratic = 0.0;
    };

    Terms terms(NodeId i, NodeId j) const;

    /// ⟨Z_i Z_j⟩; throws ArgumentError if i == j.
    double zz(NodeId i, NodeId j) const;

    /// Σ_e w_e (1 - ⟨Z_u Z_v⟩) / 2.
    double expected_cut() const;

    const WeightedGraph& graph() const noexcept { return *graph_; }
    QaoaParams params() const noexcept { return params_; }

 private:
    const WeightedGraph* graph_;
    QaoaParams params_;
    double sin4b_;
    double sin2b_sq_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

double zz_correlation(const WeightedGraph& graph, NodeId i, NodeId j, QaoaParams params);
double expected_cut(const WeightedGraph& graph, QaoaParams params);

inline constexpr std::size_t kOracleMaxQubits = 16;

struct OracleResult {
    std::vector<std::complex<double>> amplitudes;  // basis index bit q = qubit q
    std::vector<double> zz;                        // n×n row-major, diagonal 1
    double expected_cut = 0.0;
    std::size_t n = 0;

    double correlation(std::size_t i, std::size_t j) const { return zz[i * n + j]; }
};

/// Dense simulation of exp(-iβ Σ X) exp(-iγ H) |+⟩^n. Throws SizeError for n > 16.
OracleResult statevector_oracle(const WeightedGraph& graph, QaoaParams params);

/// G points over [gamma_min, gamma_max) × B points over [beta_min, beta_max).
struct GridSpec {
    double gamma_min = -std::numbers::pi;
    double gamma_max = std::numbers::pi;
    std::size_t gamma_points = 32;
    double beta_min = 0.0;
    double beta_max = std::numbers::pi / 2;
    std::size_t beta_points = 16;

    double gamma(std::size_t a) const {
        return gamma_min + (gamma_max - gamma_min) * static_cast<double>(a) /
                                   static_cast<double>(gamma_points);
    }
    double beta(std::size_t b) const {
        return beta_min + (beta_max - beta_min) * static_cast<double>(b) /
                                  static_cast<double>(beta_points);
    }
    std::size_t size() const { return gamma_points * beta_points; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct LandscapeGrid {
    GridSpec spec;
    std::vector<double> values;  // row-major: values[a * beta_points + b]
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation

    double at(std::size_t a, std::size_t b) const { return values[a * spec.beta_points + b]; }
};

/// Recomputes mean and stddev from values.
void update_statistics(LandscapeGrid& grid);

/// Expected cut at every grid point. Requires at least 2 points per axis.
LandscapeGrid grid_search(const WeightedGraph& graph, const GridSpec& spec = {},
                          unsigned threads = 1);

struct ParamCandidate {
    QaoaParams params;
    double expected_cut = 0.0;
    std::size_t gamma_index = 0;
    std::size_t beta_index = 0;
};

/// Highest-value grid points, ties to the lowest flat index, with pairwise
/// Chebyshev separation ≥ `separation` grid steps (no wrap-around).
std::vector<ParamCandidate> top_k_params(const LandscapeGrid& grid, std::size_t k,
                                         std::size_t separation);

struct ZoneSet {
    GridSpec spec;
    std::vector<std::size_t> points;  // sorted flat indices
};

/// {(a,b) : |v - μ| > λσ}; empty when σ is zero (relative to |μ|).
ZoneSet detect_zones(const LandscapeGrid& grid, double lambda = 3.0);

/// |A ∩ B| / |A ∪ B|, 1 when both are empty. Grid specs must match.
double landscape_similarity(const ZoneSet& a, const ZoneSet& b);

/// CSV "gamma,beta,expected_cut,in_zone", row-major over γ then β.
void write_landscape_csv(std::ostream& out, const LandscapeGrid& grid, const ZoneSet& zones);

}  // namespace mlqaoa
