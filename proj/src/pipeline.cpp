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

#include "mlqaoa/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <tuple>

#include "format.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/parallel.hpp"
#include "mlqaoa/qrr.hpp"
#include "mlqaoa/rng.hpp"

namespace mlqaoa {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Seed streams; each level gets its own GA and perturbation stream.
constexpr std::uint64_t kHierarchyStream = 1;
constexpr std::uint64_t kGaStream = 0x100;
constexpr std::uint64_t kPerturbStream = 0x200;

struct PoolEntry {
    std::size_t param_index;
    RoundedCandidate candidate;
};

// Above this size per-parameter passes run one at a time so that only one
// dense Z is alive; the passes themselves then use the worker threads.
constexpr std::size_t kConcurrentParamLimit = 2000;

std::vector<PoolEntry> qrr_pool(const WeightedGraph& graph, std::span<const QaoaParams> params,
                                const PipelineConfig& config) {
    std::vector<std::vector<RoundedCandidate>> per_param(params.size());
    const unsigned threads = resolve_threads(config.threads);
    auto run = [&](std::size_t p, unsigned inner) {
        per_param[p] = qrr_candidates(graph, build_correlation_matrix(graph, params[p], inner),
                                      config.top_m, inner);
    };
    if (graph.num_nodes() <= kConcurrentParamLimit) {
        parallel_for(params.size(), threads, [&](std::size_t p) { run(p, 1); });
    } else {
        for (std::size_t p = 0; p < params.size(); ++p) run(p, threads);
    }
    std::vector<PoolEntry> pool;
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (auto& c : per_param[p]) pool.push_back({p, std::move(c)});
    }
    std::stable_sort(pool.begin(), pool.end(), [](const PoolEntry& a, const PoolEntry& b) {
        if (a.candidate.objective != b.candidate.objective) {
            return a.candidate.objective > b.candidate.objective;
        }
        return std::tie(a.param_index, a.candidate.eigen_index) <
               std::tie(b.param_index, b.candidate.eigen_index);
    });
    if (pool.size() > config.pool_size) pool.resize(config.pool_size);
    return pool;
}

// Params that produced at least one pool member, in their original order.
std::vector<QaoaParams> pool_params(std::span<const PoolEntry> pool,
                                    std::span<const QaoaParams> params) {
    std::vector<std::uint8_t> used(params.size(), 0);
    for (const PoolEntry& e : pool) used[e.param_index] = 1;
    std::vector<QaoaParams> out;
    for (std::size_t p = 0; p < params.size(); ++p) {
        if (used[p]) out.push_back(params[p]);
    }
    return out;
}

std::vector<RetainedParam> with_expected_cut(const WeightedGraph& graph,
                                             std::span<const QaoaParams> params) {
    std::vector<RetainedParam> out;
    out.reserve(params.size());
    for (const QaoaParams& p : params) out.push_back({p, expected_cut(graph, p)});
    return out;
}

GaConfig level_ga_config(const PipelineConfig& config, std::size_t level) {
    GaConfig ga = config.ga;
    ga.seed = mix_seed(config.seed, kGaStream + level);
    return ga;
}

// Keeps the first best member: ties go to the earlier population entry.
std::size_t best_index(const WeightedGraph& graph, std::span<const Bits> population,
                       double& best_value) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const double v = cut_value(graph, population[i]);
        if (i == 0 || v > best_value) {
            best = i;
            best_value = v;
        }
    }
    return best;
}

void finish_with_ga(const WeightedGraph& graph, std::vector<Bits> population,
                    const PipelineConfig& config, std::size_t level, LevelOutcome& out) {
    double before = 0.0;
    const std::size_t idx = best_index(graph, population, before);
    out.report.best_before = before;
    GaResult ga = ga_run(graph, population, level_ga_config(config, level));
    // The GA keeps its best-ever member, so this only guards rounding of equal cuts.
    if (ga.best_fitness >= before) {
        out.best = std::move(ga.best);
        out.objective = ga.best_fitness;
    } else {
        out.best = std::move(population[idx]);
        out.objective = before;
    }
    out.report.best_after = out.objective;
    out.report.ga_ran = true;
}

void finish_without_ga(const WeightedGraph& graph, std::vector<Bits> population,
                       LevelOutcome& out) {
    double before = 0.0;
    const std::size_t idx = best_index(graph, population, before);
    out.best = std::move(population[idx]);
    out.objective = before;
    out.report.best_before = before;
    out.report.best_after = before;
}

std::vector<Bits> perturbations(std::span<const std::uint8_t> base, const PipelineConfig& config,
                                std::size_t level) {
    Rng rng(mix_seed(config.seed, kPerturbStream + level));
    const double rate = std::max(1.0 / static_cast<double>(std::max<std::size_t>(base.size(), 1)), 0.01);
    std::vector<Bits> out;
    out.emplace_back(base.begin(), base.end());
    for (std::size_t k = 0; k < config.pool_size; ++k) {
        Bits b(base.begin(), base.end());
        mutate(b, rate, rng);
        out.push_back(std::move(b));
    }
    return out;
}

LevelReport blank_report(const WeightedGraph& graph, std::size_t level) {
    LevelReport r;
    r.level = level;
    r.n = graph.num_nodes();
    r.m = graph.num_edges();
    return r;
}

}  // namespace

Bits interpolate(std::span<const std::uint8_t> coarse, std::span<const NodeId> parent) {
    Bits fine(parent.size());
    for (std::size_t i = 0; i < parent.size(); ++i) {
        if (parent[i] >= coarse.size()) {
            throw ArgumentError("parent map points past the coarse assignment (length " +
                                std::to_string(coarse.size()) + ")");
        }
        fine[i] = coarse[parent[i]];
    }
    return fine;
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::qrr_plus_ga: return "qrr_plus_ga";
        case Variant::qrr_only: return "qrr_only";
        case Variant::ga_only: return "ga_only";
    }
    return "unknown";
}

Variant variant_from_string(const std::string& s) {
    if (s == "qrr_plus_ga") return Variant::qrr_plus_ga;
    if (s == "qrr_only") return Variant::qrr_only;
    if (s == "ga_only") return Variant::ga_only;
    throw ArgumentError("unknown variant '" + s + "' (expected qrr_only, ga_only or qrr_plus_ga)");
}

void PipelineConfig::validate() const {
    if (k_params < 1) throw ArgumentError("k_params must be at least 1");
    if (top_m < 1) throw ArgumentError("top_m must be at least 1");
    if (pool_size < 1) throw ArgumentError("pool_size must be at least 1");
    if (coarsen.coarsest_size < 1) throw ArgumentError("coarsest_size must be at least 1");
    if (grid.gamma_points < 2 || grid.beta_points < 2) {
        throw ArgumentError("grid needs at least 2 points per axis");
    }
    ga.validate();
}

LevelOutcome solve_coarsest(const WeightedGraph& graph, const PipelineConfig& config,
                            std::size_t level) {
    config.validate();
    const auto start = Clock::now();
    LevelOutcome out;
    out.report = blank_report(graph, level);

    const LandscapeGrid grid = grid_search(graph, config.grid, config.threads);
    const std::vector<ParamCandidate> top = top_k_params(grid, config.k_params, config.separation);
    std::vector<QaoaParams> params;
    for (const ParamCandidate& c : top) params.push_back(c.params);

    const std::vector<PoolEntry> pool = qrr_pool(graph, params, config);
    out.retained = pool_params(pool, params);
    for (const ParamCandidate& c : top) {
        if (std::find(out.retained.begin(), out.retained.end(), c.params) != out.retained.end()) {
            out.report.params.push_back({c.params, c.expected_cut});
        }
    }

    std::vector<Bits> population;
    for (const PoolEntry& e : pool) population.push_back(e.candidate.bits);
    if (population.empty()) population.emplace_back(graph.num_nodes(), 0);
    finish_with_ga(graph, std::move(population), config, level, out);
    out.report.wall_seconds = seconds_since(start);
    return out;
}

LevelOutcome refine_level(const WeightedGraph& graph, std::span<const std::uint8_t> interpolated,
                          std::span<const QaoaParams> transferred, const PipelineConfig& config,
                          std::size_t level) {
    config.validate();
    if (transferred.empty()) throw ArgumentError("refine_level needs at least one parameter");
    if (interpolated.size() != graph.num_nodes()) {
        throw ArgumentError("interpolated solution length " + std::to_string(interpolated.size()) +
                            " != node count " + std::to_string(graph.num_nodes()));
    }
    const auto start = Clock::now();
    LevelOutcome out;
    out.report = blank_report(graph, level);

    const bool use_qrr = config.variant != Variant::ga_only &&
                         graph.num_nodes() <= config.max_qrr_size;
    std::vector<Bits> population;
    if (use_qrr) {
        const std::vector<PoolEntry> pool = qrr_pool(graph, transferred, config);
        out.retained = pool_params(pool, transferred);
        for (const PoolEntry& e : pool) population.push_back(e.candidate.bits);
        population.emplace_back(interpolated.begin(), interpolated.end());
    } else {
        out.report.qrr_skipped = true;
        out.retained.assign(transferred.begin(), transferred.end());
        population = perturbations(interpolated, config, level);
    }
    if (out.retained.empty()) out.retained.assign(transferred.begin(), transferred.end());
    out.report.params = with_expected_cut(graph, out.retained);

    if (config.variant == Variant::qrr_only) {
        finish_without_ga(graph, std::move(population), out);
    } else {
        finish_with_ga(graph, std::move(population), config, level, out);
    }
    out.report.wall_seconds = seconds_since(start);
    return out;
}

Hierarchy build_pipeline_hierarchy(const WeightedGraph& graph, const PipelineConfig& config) {
    return build_hierarchy(graph, config.coarsen, mix_seed(config.seed, kHierarchyStream));
}

SolveResult solve(const WeightedGraph& graph, const PipelineConfig& config) {
    config.validate();
    if (graph.num_nodes() == 0) throw ArgumentError("cannot solve an empty graph");
    const auto start = Clock::now();
    SolveResult result;
    result.hierarchy = build_pipeline_hierarchy(graph, config);
    const Hierarchy& h = result.hierarchy;

    std::size_t level = h.depth();
    LevelOutcome current = solve_coarsest(h.graphs[level], config, level);
    result.levels.push_back(current.report);
    while (level > 0) {
        --level;
        const Bits fine = interpolate(current.best, h.parents[level]);
        current = refine_level(h.graphs[level], fine, current.retained, config, level);
        result.levels.push_back(current.report);
    }
    result.objective = cut_value(graph, current.best);
    if (result.objective != current.objective) {
        // Cut values are recomputed in the same order on the same graph.
        throw InvariantError("final objective does not match its recomputation");
    }
    result.assignment = std::move(current.best);
    result.runtime_seconds = seconds_since(start);
    return result;
}

std::vector<VariantSeries> run_variant_comparison(const WeightedGraph& graph,
                                                  const PipelineConfig& config) {
    std::vector<VariantSeries> out;
    for (Variant v : {Variant::qrr_only, Variant::ga_only, Variant::qrr_plus_ga}) {
        PipelineConfig c = config;
        c.variant = v;
        out.push_back({v, solve(graph, c)});
    }
    return out;
}

void write_variant_csv(std::ostream& out, std::span<const VariantSeries> series) {
    out << "level,variant,objective,runtime_seconds\n";
    for (const VariantSeries& s : series) {
        for (const LevelReport& r : s.result.levels) {
            out << r.level << ',' << to_string(s.variant) << ','
                << detail::format_number(r.best_after) << ','
                << detail::format_number(r.wall_seconds) << '\n';
        }
    }
}

namespace {

template <class T>
T get_as(const nlohmann::json& value, const std::string& key) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ArgumentError("config key '" + key + "' has the wrong type");
    }
}

std::size_t get_count(const nlohmann::json& value, const std::string& key) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        throw ArgumentError("config key '" + key + "' must be a non-negative integer");
    }
    return value.get<std::size_t>();
}

double get_double(const nlohmann::json& value, const std::string& key) {
    if (!value.is_number()) throw ArgumentError("config key '" + key + "' must be a number");
    return value.get<double>();
}

std::optional<double> get_optional_double(const nlohmann::json& value, const std::string& key) {
    if (value.is_null()) return std::nullopt;
    return get_double(value, key);
}

}  // namespace

nlohmann::json pipeline_config_to_json(const PipelineConfig& c) {
    nlohmann::json j;
    j["matcher"] = to_string(c.coarsen.matcher);
    j["merge_delta1"] = c.coarsen.thresholds.delta1;
    j["merge_delta2"] = c.coarsen.thresholds.delta2;
    j["k_nn"] = c.coarsen.k_nn;
    j["coarsest_size"] = c.coarsen.coarsest_size;
    if (c.coarsen.max_levels == std::numeric_limits<std::size_t>::max()) {
        j["max_levels"] = nullptr;
    } else {
        j["max_levels"] = c.coarsen.max_levels;
    }
    j["relax_max_iters"] = c.coarsen.relax.max_iters;
    j["relax_tol"] = c.coarsen.relax.displacement_tol;
    j["grid_gamma_min"] = c.grid.gamma_min;
    j["grid_gamma_max"] = c.grid.gamma_max;
    j["grid_gamma_points"] = c.grid.gamma_points;
    j["grid_beta_min"] = c.grid.beta_min;
    j["grid_beta_max"] = c.grid.beta_max;
    j["grid_beta_points"] = c.grid.beta_points;
    j["k_params"] = c.k_params;
    j["separation"] = c.separation;
    j["top_m"] = c.top_m;
    j["pool_size"] = c.pool_size;
    j["max_qrr_size"] = c.max_qrr_size;
    j["ga_population"] = c.ga.population_size;
    j["ga_generations"] = c.ga.generations;
    j["ga_tournament"] = c.ga.tournament_size;
    j["ga_crossover_rate"] = c.ga.crossover_rate;
    j["ga_mutation_rate"] = c.ga.mutation_rate ? nlohmann::json(*c.ga.mutation_rate) : nullptr;
    j["ga_elite"] = c.ga.elite_count;
    j["ga_time_budget"] = c.ga.time_budget ? nlohmann::json(*c.ga.time_budget) : nullptr;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["variant"] = to_string(c.variant);
    return j;
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& doc, PipelineConfig c) {
    if (!doc.is_object()) throw ArgumentError("config must be a JSON object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "matcher") c.coarsen.matcher = matcher_from_string(get_as<std::string>(v, key));
        else if (key == "merge_delta1") c.coarsen.thresholds.delta1 = get_double(v, key);
        else if (key == "merge_delta2") c.coarsen.thresholds.delta2 = get_double(v, key);
        else if (key == "k_nn") c.coarsen.k_nn = get_count(v, key);
        else if (key == "coarsest_size") c.coarsen.coarsest_size = get_count(v, key);
        else if (key == "max_levels") {
            c.coarsen.max_levels =
                    v.is_null() ? std::numeric_limits<std::size_t>::max() : get_count(v, key);
        }
        else if (key == "relax_max_iters") c.coarsen.relax.max_iters = get_count(v, key);
        else if (key == "relax_tol") c.coarsen.relax.displacement_tol = get_double(v, key);
        else if (key == "grid_gamma_min") c.grid.gamma_min = get_double(v, key);
        else if (key == "grid_gamma_max") c.grid.gamma_max = get_double(v, key);
        else if (key == "grid_gamma_points") c.grid.gamma_points = get_count(v, key);
        else if (key == "grid_beta_min") c.grid.beta_min = get_double(v, key);
        else if (key == "grid_beta_max") c.grid.beta_max = get_double(v, key);
        else if (key == "grid_beta_points") c.grid.beta_points = get_count(v, key);
        else if (key == "k_params") c.k_params = get_count(v, key);
        else if (key == "separation") c.separation = get_count(v, key);
        else if (key == "top_m") c.top_m = get_count(v, key);
        else if (key == "pool_size") c.pool_size = get_count(v, key);
        else if (key == "max_qrr_size") c.max_qrr_size = get_count(v, key);
        else if (key == "ga_population") c.ga.population_size = get_count(v, key);
        else if (key == "ga_generations") c.ga.generations = get_count(v, key);
        else if (key == "ga_tournament") c.ga.tournament_size = get_count(v, key);
        else if (key == "ga_crossover_rate") c.ga.crossover_rate = get_double(v, key);
        else if (key == "ga_mutation_rate") c.ga.mutation_rate = get_optional_double(v, key);
        else if (key == "ga_elite") c.ga.elite_count = get_count(v, key);
        else if (key == "ga_time_budget") c.ga.time_budget = get_optional_double(v, key);
        else if (key == "seed") c.seed = get_count(v, key);
        else if (key == "threads") c.threads = static_cast<unsigned>(get_count(v, key));
        else if (key == "variant") c.variant = variant_from_string(get_as<std::string>(v, key));
        else throw ArgumentError("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

std::string config_digest(const PipelineConfig& config) {
    nlohmann::json j = pipeline_config_to_json(config);
    j.erase("threads");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json level_report_to_json(const LevelReport& r) {
    nlohmann::json params = nlohmann::json::array();
    for (const RetainedParam& p : r.params) {
        params.push_back({{"gamma", p.params.gamma},
                          {"beta", p.params.beta},
                          {"expected_cut", p.expected_cut}});
    }
    return {{"level", r.level},
            {"n", r.n},
            {"m", r.m},
            {"params", params},
            {"best_before", r.best_before},
            {"best_after", r.best_after},
            {"wall_seconds", r.wall_seconds},
            {"qrr_skipped", r.qrr_skipped},
            {"ga_ran", r.ga_ran}};
}

nlohmann::json solve_report_to_json(const SolveResult& result, const PipelineConfig& config,
                                    const std::string& instance) {
    nlohmann::json levels = nlohmann::json::array();
    for (const LevelReport& r : result.levels) levels.push_back(level_report_to_json(r));
    return {{"instance", instance},
            {"config_digest", config_digest(config)},
            {"variant", to_string(config.variant)},
            {"levels", levels},
            {"hierarchy", hierarchy_summary_json(result.hierarchy)},
            {"objective", result.objective},
            {"assignment", bits_to_string(result.assignment)},
            {"n", result.assignment.size()},
            {"seed", config.seed},
            {"runtime_seconds", result.runtime_seconds}};
}

}  // namespace mlqaoa
