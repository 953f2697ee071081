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

#include "mlqaoa/baseline.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "mlqaoa/errors.hpp"

namespace mlqaoa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFlipEps = 1e-9;

// Cut change from flipping node i.
double flip_gain(const WeightedGraph& graph, std::span<const std::uint8_t> bits, NodeId i) {
    double gain = 0.0;
    for (const Neighbor& nb : graph.neighbors(i)) gain += bits[nb.node] == bits[i] ? nb.w : -nb.w;
    return gain;
}

double wrap_angle(double theta) {
    theta = std::fmod(theta, kTwoPi);
    return theta < 0 ? theta + kTwoPi : theta;
}

}  // namespace

CutResult brute_force_max_cut(const WeightedGraph& graph) {
    const std::size_t n = graph.num_nodes();
    if (n > kBruteForceMaxNodes) {
        throw SizeError("brute force supports at most " + std::to_string(kBruteForceMaxNodes) +
                        " nodes, got " + std::to_string(n));
    }
    CutResult best{0.0, Bits(n, 0)};
    if (n <= 1) return best;
    // Gray-code walk over bits 1..n-1; each step flips one node.
    Bits bits(n, 0);
    double cut = 0.0;
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    for (std::uint64_t k = 1; k < steps; ++k) {
        const auto node = static_cast<NodeId>(std::countr_zero(k) + 1);
        cut += flip_gain(graph, bits, node);
        bits[node] ^= 1;
        if (cut > best.value) {
            best.value = cut;
            best.assignment = bits;
        }
    }
    best.value = cut_value(graph, best.assignment);
    return best;
}

CutResult random_baseline(const WeightedGraph& graph, std::size_t trials, Rng& rng) {
    if (trials == 0) throw ArgumentError("trials must be at least 1");
    CutResult best;
    for (std::size_t t = 0; t < trials; ++t) {
        Bits b(graph.num_nodes());
        for (auto& bit : b) bit = static_cast<std::uint8_t>(rng.next() & 1);
        const double v = cut_value(graph, b);
        if (t == 0 || v > best.value) best = {v, std::move(b)};
    }
    return best;
}

double rank2_objective(const WeightedGraph& graph, std::span<const double> angles) {
    if (angles.size() != graph.num_nodes()) throw ArgumentError("angle count != node count");
    double total = 0.0;
    for (const Edge& e : graph.edges()) total += e.w * 0.5 * (1.0 - std::cos(angles[e.u] - angles[e.v]));
    return total;
}

std::vector<double> random_angles(std::size_t n, Rng& rng) {
    std::vector<double> angles(n);
    for (double& a : angles) a = rng.uniform(0.0, kTwoPi);
    return angles;
}

std::vector<double> warm_start_angles(std::span<const std::uint8_t> bits, double jitter, Rng& rng) {
    std::vector<double> angles(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        angles[i] = wrap_angle((bits[i] ? std::numbers::pi : 0.0) + rng.uniform(-jitter, jitter));
    }
    return angles;
}

Rank2State rank2_local_solve(const WeightedGraph& graph, std::vector<double> angles,
                             const Rank2Options& options) {
    const std::size_t n = graph.num_nodes();
    if (angles.size() != n) throw ArgumentError("angle count != node count");
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> c(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        angles[i] = wrap_angle(angles[i]);
        c[i] = std::cos(angles[i]);
        s[i] = std::sin(angles[i]);
    }
    Rank2State state;
    state.objective = rank2_objective(graph, angles);
    state.trace.push_back(state.objective);
    while (state.sweeps < options.max_sweeps) {
        if (options.max_seconds) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            if (elapsed.count() >= *options.max_seconds) break;
        }
        for (NodeId i = 0; i < n; ++i) {
            double sc = 0.0, ss = 0.0;
            for (const Neighbor& nb : graph.neighbors(i)) {
                sc += nb.w * c[nb.node];
                ss += nb.w * s[nb.node];
            }
            if (std::hypot(sc, ss) <= 1e-12) continue;
            angles[i] = wrap_angle(std::atan2(ss, sc) + std::numbers::pi);
            c[i] = std::cos(angles[i]);
            s[i] = std::sin(angles[i]);
        }
        ++state.sweeps;
        const double next = rank2_objective(graph, angles);
        const double gain = next - state.objective;
        state.objective = next;
        state.trace.push_back(next);
        if (gain < options.tol * std::max(1.0, std::abs(next))) break;
    }
    state.angles = std::move(angles);
    return state;
}

void one_opt(const WeightedGraph& graph, Bits& bits) {
    const std::size_t n = graph.num_nodes();
    if (bits.size() != n) throw ArgumentError("assignment length != node count");
    std::vector<double> gain(n);
    std::vector<std::uint8_t> queued(n, 1);
    std::deque<NodeId> work;
    for (NodeId i = 0; i < n; ++i) {
        gain[i] = flip_gain(graph, bits, i);
        work.push_back(i);
    }
    while (!work.empty()) {
        const NodeId i = work.front();
        work.pop_front();
        queued[i] = 0;
        if (gain[i] <= kFlipEps) continue;
        // After the flip, every edge at i changes state; each neighbor's gain
        // moves by ±2w accordingly.
        for (const Neighbor& nb : graph.neighbors(i)) {
            const bool was_same = bits[nb.node] == bits[i];
            gain[nb.node] += was_same ? -2.0 * nb.w : 2.0 * nb.w;
            if (!queued[nb.node] && gain[nb.node] > kFlipEps) {
                queued[nb.node] = 1;
                work.push_back(nb.node);
            }
        }
        bits[i] ^= 1;
        gain[i] = -gain[i];
    }
}

bool is_one_opt_stable(const WeightedGraph& graph, std::span<const std::uint8_t> bits) {
    for (NodeId i = 0; i < graph.num_nodes(); ++i) {
        if (flip_gain(graph, bits, i) > kFlipEps) return false;
    }
    return true;
}

Bits rank2_round(const Rank2State& state, const WeightedGraph& graph, std::size_t num_hyperplanes,
                 Rng& rng, std::optional<std::span<const std::uint8_t>> warm) {
    const std::size_t n = graph.num_nodes();
    if (num_hyperplanes == 0) throw ArgumentError("num_hyperplanes must be at least 1");
    if (state.angles.size() != n) throw ArgumentError("angle count != node count");
    Bits best;
    double best_value = 0.0;
    if (warm) {
        if (warm->size() != n) throw ArgumentError("warm-start length != node count");
        best.assign(warm->begin(), warm->end());
        best_value = cut_value(graph, best);
    }
    Bits bits(n);
    for (std::size_t h = 0; h < num_hyperplanes; ++h) {
        const double phi = rng.uniform(0.0, kTwoPi);
        for (std::size_t i = 0; i < n; ++i) {
            bits[i] = static_cast<std::uint8_t>(std::sin(state.angles[i] - phi) > 0.0);
        }
        const double v = cut_value(graph, bits);
        if (best.empty() || v > best_value) {
            best = bits;
            best_value = v;
        }
    }
    one_opt(graph, best);
    return best;
}

}  // namespace mlqaoa
