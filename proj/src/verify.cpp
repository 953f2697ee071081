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

#include "mlqaoa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mlqaoa/coarsen.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/instance.hpp"
#include "mlqaoa/pipeline.hpp"
#include "mlqaoa/rng.hpp"

namespace mlqaoa {

namespace {

WeightedGraph random_graph(std::size_t n, double p, Rng& rng) {
    static constexpr double kWeights[] = {-2.0, -1.0, 1.0, 2.0};
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (rng.bernoulli(p)) edges.push_back({i, j, kWeights[rng.index(4)]});
        }
    }
    return WeightedGraph(n, edges);
}

std::string graph_text(const WeightedGraph& g) {
    std::ostringstream out;
    write_gset(out, g);
    return out.str();
}

void record(SuiteResult& r, bool ok, double error, nlohmann::json detail) {
    r.max_error = std::max(r.max_error, error);
    if (ok) {
        ++r.passed;
        return;
    }
    ++r.failed;
    if (r.counterexample.is_null()) r.counterexample = std::move(detail);
}

Bits bits_of(std::uint64_t mask, std::size_t n) {
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>((mask >> i) & 1);
    return b;
}

}  // namespace

SuiteResult verify_oracle(const VerifyOptions& options) {
    constexpr double kZzTol = 1e-8;
    constexpr double kCutTol = 1e-9;
    SuiteResult r;
    r.name = "oracle";
    Rng rng(mix_seed(options.seed, 0x6f72));
    for (int g = 0; g < 20; ++g) {
        const std::size_t n = 2 + rng.index(9);
        const WeightedGraph graph = random_graph(n, 0.5, rng);
        for (int k = 0; k < 10; ++k) {
            const QaoaParams params{rng.uniform(-std::numbers::pi, std::numbers::pi),
                                    rng.uniform(0.0, std::numbers::pi / 2)};
            const AnalyticQaoa analytic(graph, params, options.kappa);
            const OracleResult oracle = statevector_oracle(graph, params);
            double zz_err = 0.0;
            for (NodeId i = 0; i < n; ++i) {
                for (NodeId j = i + 1; j < n; ++j) {
                    zz_err = std::max(zz_err, std::abs(analytic.zz(i, j) - oracle.correlation(i, j)));
                }
            }
            const double cut_err = std::abs(analytic.expected_cut() - oracle.expected_cut);
            const bool ok = zz_err <= kZzTol && cut_err <= kCutTol;
            record(r, ok, std::max(zz_err, cut_err),
                   {{"graph", graph_text(graph)},
                    {"gamma", params.gamma},
                    {"beta", params.beta},
                    {"max_zz_error", zz_err},
                    {"expected_cut_error", cut_err}});
        }
    }
    return r;
}

SuiteResult verify_coarsen(const VerifyOptions& options) {
    SuiteResult r;
    r.name = "coarsen";
    Rng rng(mix_seed(options.seed, 0x636f));
    for (int g = 0; g < 20; ++g) {
        const std::size_t n = 6 + rng.index(27);
        const WeightedGraph graph = random_graph(n, 0.3, rng);
        CoarsenConfig config;
        config.coarsest_size = 4;
        config.matcher = g % 2 == 0 ? MatcherKind::threshold : MatcherKind::logarithmic;
        const Hierarchy h = build_hierarchy(graph, config, rng.next());
        for (std::size_t l = 0; l < h.depth(); ++l) {
            const WeightedGraph& coarse = h.graphs[l + 1];
            const std::size_t cn = coarse.num_nodes();
            const bool exhaustive = cn <= 12;
            const std::size_t samples = exhaustive ? (std::size_t{1} << cn) : 256;
            for (std::size_t s = 0; s < samples; ++s) {
                Bits y = exhaustive ? bits_of(s, cn) : Bits(cn);
                if (!exhaustive) {
                    for (auto& bit : y) bit = static_cast<std::uint8_t>(rng.next() & 1);
                }
                const double cc = cut_value(coarse, y);
                const double fc = cut_value(h.graphs[l], interpolate(y, h.parents[l]));
                // Weights are integers, so equality is exact.
                record(r, cc == fc, std::abs(cc - fc),
                       {{"graph", graph_text(graph)},
                        {"level", l},
                        {"coarse_assignment", bits_to_string(y)},
                        {"coarse_cut", cc},
                        {"fine_cut", fc}});
            }
        }
    }
    return r;
}

SuiteResult verify_reduction(const VerifyOptions& options) {
    constexpr std::size_t kVars = 8;
    SuiteResult r;
    r.name = "reduction";
    Rng rng(mix_seed(options.seed, 0x7265));
    for (int t = 0; t < 25; ++t) {
        std::vector<QuboTerm> terms;
        for (std::size_t i = 0; i < kVars; ++i) {
            for (std::size_t j = i; j < kVars; ++j) {
                terms.push_back({i, j, static_cast<double>(static_cast<int>(rng.index(11)) - 5)});
            }
        }
        const QuboInstance q(kVars, terms);
        const ReductionRecord rec = qubo_to_maxcut(q);
        const std::size_t gn = rec.graph.num_nodes();
        double worst = 0.0;
        double best_cut = -1e300, best_qubo = -1e300, qubo_at_best_cut = 0.0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << gn); ++mask) {
            const Bits y = bits_of(mask, gn);
            const double cut = cut_value(rec.graph, y);
            const double qv = qubo_value(q, retrieve_qubo_solution(rec, y));
            worst = std::max(worst, std::abs(cut - (rec.scale * qv + rec.offset)));
            if (cut > best_cut) {
                best_cut = cut;
                qubo_at_best_cut = qv;
            }
            best_qubo = std::max(best_qubo, qv);
        }
        const bool ok = worst == 0.0 && rec.scale > 0 && qubo_at_best_cut == best_qubo;
        record(r, ok, worst,
               {{"qubo", qubo_to_json(q)},
                {"scale", rec.scale},
                {"offset", rec.offset},
                {"max_affine_error", worst},
                {"qubo_at_max_cut", qubo_at_best_cut},
                {"qubo_optimum", best_qubo}});
    }
    return r;
}

std::vector<SuiteResult> run_verify_suites(const std::string& suite, const VerifyOptions& options) {
    if (suite == "oracle") return {verify_oracle(options)};
    if (suite == "coarsen") return {verify_coarsen(options)};
    if (suite == "reduction") return {verify_reduction(options)};
    if (suite == "all") return {verify_oracle(options), verify_coarsen(options), verify_reduction(options)};
    throw ArgumentError("unknown suite '" + suite + "' (expected oracle, coarsen, reduction or all)");
}

nlohmann::json suite_result_to_json(const SuiteResult& r) {
    return {{"suite", r.name},
            {"passed", r.passed},
            {"failed", r.failed},
            {"max_error", r.max_error},
            {"counterexample", r.counterexample}};
}

}  // namespace mlqaoa
