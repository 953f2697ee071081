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

#include "mlqaoa/ga.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <ostream>
#include <string>

#include "format.hpp"
#include "mlqaoa/errors.hpp"

namespace mlqaoa {

void GaConfig::validate() const {
    if (population_size < 2) throw ArgumentError("population_size must be at least 2");
    if (elite_count >= population_size) throw ArgumentError("elite_count must be < population_size");
    if (tournament_size < 1) throw ArgumentError("tournament_size must be at least 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw ArgumentError("crossover_rate must lie in [0, 1]");
    }
    if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
        throw ArgumentError("mutation_rate must lie in [0, 1]");
    }
}

const Member& tournament_select(const Population& population, std::size_t k, Rng& rng) {
    if (population.members.empty()) throw ArgumentError("tournament on empty population");
    if (k == 0) throw ArgumentError("tournament size must be at least 1");
    const Member* best = &population.members[rng.index(population.members.size())];
    for (std::size_t t = 1; t < k; ++t) {
        const Member& c = population.members[rng.index(population.members.size())];
        if (c.fitness > best->fitness) best = &c;
    }
    return *best;
}

std::pair<Bits, Bits> uniform_crossover(std::span<const std::uint8_t> a,
                                        std::span<const std::uint8_t> b, Rng& rng) {
    if (a.size() != b.size()) throw ArgumentError("crossover parents differ in length");
    std::pair<Bits, Bits> children{Bits(a.begin(), a.end()), Bits(b.begin(), b.end())};
    // One engine draw serves 64 positions.
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i % 64 == 0) word = rng.next();
        if ((word >> (i % 64)) & 1) std::swap(children.first[i], children.second[i]);
    }
    return children;
}

void mutate(Bits& member, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw ArgumentError("mutation rate must lie in [0, 1]");
    if (rate == 0.0) return;
    for (auto& bit : member) {
        if (rng.uniform() < rate) bit ^= 1;
    }
}

namespace {

GenerationStats stats_of(const Population& pop, std::size_t generation) {
    GenerationStats s;
    s.generation = generation;
    s.best = -std::numeric_limits<double>::infinity();
    s.worst = std::numeric_limits<double>::infinity();
    for (const Member& m : pop.members) {
        s.best = std::max(s.best, m.fitness);
        s.worst = std::min(s.worst, m.fitness);
        s.mean += m.fitness;
    }
    s.mean /= static_cast<double>(pop.members.size());
    return s;
}

void sort_by_fitness(Population& pop) {
    std::stable_sort(pop.members.begin(), pop.members.end(),
                     [](const Member& a, const Member& b) { return a.fitness > b.fitness; });
}

}  // namespace

GaResult ga_run(const WeightedGraph& graph, std::span<const Bits> initial, const GaConfig& config) {
    config.validate();
    if (initial.empty()) throw ArgumentError("GA needs a non-empty initial population");
    const std::size_t n = graph.num_nodes();
    for (const Bits& b : initial) {
        if (b.size() != n) {
            throw ArgumentError("population member length " + std::to_string(b.size()) +
                                " != node count " + std::to_string(n));
        }
    }
    const double rate = config.mutation_rate.value_or(n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
    const auto start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
        if (!config.time_budget) return false;
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return elapsed.count() >= *config.time_budget;
    };

    Rng rng(config.seed);
    Population pop;
    for (const Bits& b : initial) pop.members.push_back({b, cut_value(graph, b)});
    sort_by_fitness(pop);
    if (pop.members.size() > config.population_size) pop.members.resize(config.population_size);
    while (pop.members.size() < config.population_size) {
        Bits b(n);
        for (auto& bit : b) bit = static_cast<std::uint8_t>(rng.next() & 1);
        const double f = cut_value(graph, b);
        pop.members.push_back({std::move(b), f});
    }
    sort_by_fitness(pop);

    GaResult result;
    result.trace.push_back(stats_of(pop, 0));
    // With elite_count == 0 the population best may regress; the returned
    // member is the best ever seen.
    Member best = pop.members.front();
    for (std::size_t gen = 0; gen < config.generations; ++gen) {
        if (out_of_time()) break;
        Population next;
        next.members.reserve(config.population_size);
        for (std::size_t e = 0; e < config.elite_count; ++e) next.members.push_back(pop.members[e]);
        while (next.members.size() < config.population_size) {
            const Member& p1 = tournament_select(pop, config.tournament_size, rng);
            const Member& p2 = tournament_select(pop, config.tournament_size, rng);
            std::pair<Bits, Bits> kids = rng.uniform() < config.crossover_rate
                                                 ? uniform_crossover(p1.bits, p2.bits, rng)
                                                 : std::pair<Bits, Bits>{p1.bits, p2.bits};
            mutate(kids.first, rate, rng);
            mutate(kids.second, rate, rng);
            const double f1 = cut_value(graph, kids.first);
            next.members.push_back({std::move(kids.first), f1});
            if (next.members.size() < config.population_size) {
                const double f2 = cut_value(graph, kids.second);
                next.members.push_back({std::move(kids.second), f2});
            }
        }
        sort_by_fitness(next);
        pop = std::move(next);
        if (pop.members.front().fitness > best.fitness) best = pop.members.front();
        result.generations = gen + 1;
        result.trace.push_back(stats_of(pop, gen + 1));
    }
    result.best = std::move(best.bits);
    result.best_fitness = best.fitness;
    return result;
}

void write_ga_trace_csv(std::ostream& out, std::span<const GenerationStats> trace) {
    out << "generation,best,mean,worst\n";
    for (const auto& s : trace) {
        out << s.generation << ',' << detail::format_number(s.best) << ','
            << detail::format_number(s.mean) << ',' << detail::format_number(s.worst) << '\n';
    }
}

}  // namespace mlqaoa
