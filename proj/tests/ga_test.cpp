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

#include <cmath>
#include <sstream>

#include "doctest.h"

#include "generators.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/ga.hpp"

using namespace mlqaoa;
using namespace mlqaoa::testing;

namespace {

Bits random_bits(std::size_t n, Rng& rng) {
    Bits b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.next() & 1);
    return b;
}

Population ranked_population(std::size_t m) {
    Population p;
    for (std::size_t i = 0; i < m; ++i) p.members.push_back({Bits{static_cast<std::uint8_t>(i)}, static_cast<double>(m - i)});
    return p;
}

}  // namespace

TEST_CASE("GaConfig validation") {
    GaConfig c;
    CHECK_NOTHROW(c.validate());
    c.population_size = 1;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = {};
    c.elite_count = c.population_size;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = {};
    c.crossover_rate = 1.5;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = {};
    c.mutation_rate = -0.1;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("identical members without mutation stay put") {
    const auto g = erdos_renyi(20, 0.3, Weights::unit, 1);
    Rng rng(1);
    const Bits member = random_bits(20, rng);
    const std::vector<Bits> pop(32, member);
    GaConfig c;
    c.mutation_rate = 0.0;
    const GaResult r = ga_run(g, pop, c);
    CHECK(r.best == member);
    CHECK(r.best_fitness == cut_value(g, member));
}

TEST_CASE("GA is deterministic, monotone and never loses the best seed") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = erdos_renyi(40, 0.2, Weights::plus_minus_one, seed);
        Rng rng(seed);
        std::vector<Bits> pop;
        for (int k = 0; k < 10; ++k) pop.push_back(random_bits(40, rng));
        double best_initial = -1e300;
        for (const auto& b : pop) best_initial = std::max(best_initial, cut_value(g, b));
        GaConfig c;
        c.seed = seed;
        c.generations = 50;
        const GaResult a = ga_run(g, pop, c), b = ga_run(g, pop, c);
        CHECK(a.best == b.best);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t t = 0; t < a.trace.size(); ++t) {
            CHECK(a.trace[t].best == b.trace[t].best);
            CHECK(a.trace[t].mean == b.trace[t].mean);
            if (t > 0) CHECK(a.trace[t].best >= a.trace[t - 1].best);
        }
        CHECK(a.best_fitness >= best_initial);
        CHECK(a.best_fitness == cut_value(g, a.best));
        CHECK(a.generations == 50);

        GaConfig no_elite = c;
        no_elite.elite_count = 0;
        CHECK(ga_run(g, pop, no_elite).best_fitness >= best_initial);
    }
}

TEST_CASE("GA input validation") {
    const auto g = erdos_renyi(5, 0.5, Weights::unit, 1);
    CHECK_THROWS_AS(ga_run(g, std::vector<Bits>{}, GaConfig{}), ArgumentError);
    CHECK_THROWS_AS(ga_run(g, std::vector<Bits>{Bits(4, 0)}, GaConfig{}), ArgumentError);
}

TEST_CASE("GA time budget stops early") {
    const auto g = random_nm(2000, 20000, Weights::unit, 3);
    GaConfig c;
    c.generations = 1000000;
    c.time_budget = 0.2;
    const GaResult r = ga_run(g, std::vector<Bits>{Bits(2000, 0)}, c);
    CHECK(r.generations < 1000000);
}

TEST_CASE("tournament selection frequencies") {
    const std::size_t m = 8;
    const Population p = ranked_population(m);
    Rng rng(99);
    const int trials = 10000;
    int top1 = 0, top3 = 0;
    std::vector<int> uniform(m, 0);
    for (int t = 0; t < trials; ++t) {
        ++uniform[tournament_select(p, 1, rng).bits[0]];
        if (tournament_select(p, 3, rng).bits[0] == 0) ++top3;
        if (tournament_select(p, m, rng).fitness >= p.members[m - 1].fitness) ++top1;
    }
    for (int count : uniform) CHECK(std::abs(count / double(trials) - 1.0 / m) <= 0.03);
    // P(best among 3 draws with replacement) = 1 - (1 - 1/m)^3.
    const double expected = 1.0 - std::pow(1.0 - 1.0 / m, 3);
    CHECK(std::abs(top3 / double(trials) - expected) <= 0.03);
    CHECK(top1 == trials);
}

TEST_CASE("uniform crossover") {
    Rng rng(5);
    const Bits a = random_bits(100, rng);
    auto [c1, c2] = uniform_crossover(a, a, rng);
    CHECK(c1 == a);
    CHECK(c2 == a);

    Bits comp = a;
    for (auto& x : comp) x ^= 1;
    auto [d1, d2] = uniform_crossover(a, comp, rng);
    for (std::size_t i = 0; i < 100; ++i) CHECK(d1[i] != d2[i]);

    const Bits zeros(70, 0), ones(70, 1);
    std::vector<int> from_a(70, 0);
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        auto [x, y] = uniform_crossover(zeros, ones, rng);
        for (std::size_t i = 0; i < 70; ++i) {
            from_a[i] += x[i] == 0;
            REQUIRE(x[i] != y[i]);
        }
    }
    for (int f : from_a) CHECK(std::abs(f / double(trials) - 0.5) <= 0.01);
    CHECK_THROWS_AS(uniform_crossover(zeros, Bits(3, 0), rng), ArgumentError);
}

TEST_CASE("mutation") {
    Rng rng(6);
    const Bits a = random_bits(50, rng);
    Bits same = a;
    mutate(same, 0.0, rng);
    CHECK(same == a);
    Bits all = a;
    mutate(all, 1.0, rng);
    for (std::size_t i = 0; i < 50; ++i) CHECK(all[i] != a[i]);

    const std::size_t n = 40;
    double flips = 0.0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        Bits b(n, 0);
        mutate(b, 1.0 / n, rng);
        for (auto x : b) flips += x;
    }
    CHECK(std::abs(flips / trials - 1.0) <= 0.05);
}

TEST_CASE("GA trace CSV") {
    const auto g = erdos_renyi(10, 0.5, Weights::unit, 2);
    GaConfig c;
    c.generations = 3;
    const GaResult r = ga_run(g, std::vector<Bits>{Bits(10, 0)}, c);
    std::ostringstream out;
    write_ga_trace_csv(out, r.trace);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "generation,best,mean,worst");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
}
