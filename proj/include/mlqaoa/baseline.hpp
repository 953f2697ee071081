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
#include <optional>
#include <span>
#include <vector>

#include "mlqaoa/instance.hpp"
#include "mlqaoa/rng.hpp"

namespace mlqaoa {

inline constexpr std::size_t kBruteForceMaxNodes = 22;

struct CutResult {
    double value = 0.0;
    Bits assignment;
};

/// Exact maximum cut over 2^(n-1) assignments (bit 0 fixed to 0).
/// Throws SizeError for n > 22.
CutResult brute_force_max_cut(const WeightedGraph& graph);

/// Best of `trials` uniform random assignments (trials ≥ 1).
CutResult random_baseline(const WeightedGraph& graph, std::size_t trials, Rng& rng);

/// Circle relaxation: angles θ_i, objective Σ w_ij (1 - cos(θ_i - θ_j)) / 2.
struct Rank2State {
    std::vector<double> angles;
    double objective = 0.0;
    std::size_t sweeps = 0;
    /// Objective after each sweep; trace[0] is the starting objective.
    std::vector<double> trace;
};

struct Rank2Options {
    std::size_t max_sweeps = 1000;
    std::optional<double> max_seconds;
    /// Stop once a sweep gains less than tol · max(1, |objective|).
    double tol = 1e-9;
    /// Uniform jitter (radians) added to warm-start angles bπ.
    double jitter = 0.1;
};

double rank2_objective(const WeightedGraph& graph, std::span<const double> angles);

std::vector<double> random_angles(std::size_t n, Rng& rng);

/// Angles bπ + U(-jitter, jitter).
std::vector<double> warm_start_angles(std::span<const std::uint8_t> bits, double jitter, Rng& rng);

/// Coordinate ascent θ_i ← atan2(Σ w sin θ_j, Σ w cos θ_j) + π in node order.
/// Each update maximizes node i's share, so the objective never decreases.
Rank2State rank2_local_solve(const WeightedGraph& graph, std::vector<double> angles,
                             const Rank2Options& options = {});

/// Best of `num_hyperplanes` random cuts bit_i = [sin(θ_i - φ) > 0], with
/// `warm` (if given) as an extra candidate, then 1-opt.
Bits rank2_round(const Rank2State& state, const WeightedGraph& graph, std::size_t num_hyperplanes,
                 Rng& rng, std::optional<std::span<const std::uint8_t>> warm = std::nullopt);

/// Flips single nodes while any flip strictly improves the cut.
void one_opt(const WeightedGraph& graph, Bits& bits);

/// True when no single flip improves the cut by more than 1e-9.
bool is_one_opt_stable(const WeightedGraph& graph, std::span<const std::uint8_t> bits);

}  // namespace mlqaoa
