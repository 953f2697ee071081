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
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mlqaoa/instance.hpp"
#include "mlqaoa/rng.hpp"

namespace mlqaoa {

struct GaConfig {
    std::size_t population_size = 32;
    std::size_t generations = 200;
    std::size_t tournament_size = 3;
    double crossover_rate = 0.9;
    /// Per-bit flip probability; 1/n when unset.
    std::optional<double> mutation_rate;
    std::size_t elite_count = 2;
    std::uint64_t seed = 0;
    /// Wall-clock cap in seconds; unlimited when unset.
    std::optional<double> time_budget;

    /// Throws ArgumentError unless population_size ≥ 2, elite_count <
    /// population_size, tournament_size ≥ 1 and rates lie in [0, 1].
    void validate() const;
};

struct Member {
    Bits bits;
    double fitness = 0.0;
};

struct Population {
    std::vector<Member> members;
};

struct GenerationStats {
    std::size_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
    double worst = 0.0;
};

struct GaResult {
    Bits best;
    double best_fitness = 0.0;
    std::size_t generations = 0;
    /// Row 0 is the initial population, then one row per generation.
    std::vector<GenerationStats> trace;
};

/// Elitist generational GA maximizing cut value. Smaller initial populations
/// are topped up with uniform random members; larger ones keep their best.
/// Throws ArgumentError on an empty population or a member of the wrong length.
GaResult ga_run(const WeightedGraph& graph, std::span<const Bits> initial, const GaConfig& config);

/// Best of k uniform draws with replacement (first drawn wins ties).
const Member& tournament_select(const Population& population, std::size_t k, Rng& rng);

/// Per bit, the children swap alleles with probability ½.
std::pair<Bits, Bits> uniform_crossover(std::span<const std::uint8_t> a,
                                        std::span<const std::uint8_t> b, Rng& rng);

/// Flips each bit independently with probability `rate`.
void mutate(Bits& member, double rate, Rng& rng);

/// CSV "generation,best,mean,worst".
void write_ga_trace_csv(std::ostream& out, std::span<const GenerationStats> trace);

}  // namespace mlqaoa
