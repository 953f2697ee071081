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
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "mlqaoa/coarsen.hpp"
#include "mlqaoa/ga.hpp"
#include "mlqaoa/instance.hpp"
#include "mlqaoa/qaoa.hpp"

namespace mlqaoa {

/// fine[i] = coarse[parent[i]].
Bits interpolate(std::span<const std::uint8_t> coarse, std::span<const NodeId> parent);

enum class Variant {
    /// QRR at every level, GA everywhere.
    qrr_plus_ga,
    /// GA only at the coarsest level; finer levels take the best of QRR pool and interpolation.
    qrr_only,
    /// QRR only at the coarsest level; finer levels run GA from the interpolation.
    ga_only,
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct PipelineConfig {
    CoarsenConfig coarsen;
    GridSpec grid;
    std::size_t k_params = 10;
    std::size_t separation = 2;
    std::size_t top_m = 5;
    /// Candidates kept from the k_params · top_m QRR pool to seed the GA.
    std::size_t pool_size = 20;
    GaConfig ga;
    /// Levels above this size skip QRR (dense Z needs n² doubles).
    std::size_t max_qrr_size = 12000;
    std::uint64_t seed = 0;
    /// 0 means all cores. Results do not depend on it.
    unsigned threads = 1;
    Variant variant = Variant::qrr_plus_ga;

    void validate() const;
};

struct RetainedParam {
    QaoaParams params;
    /// Analytic expected cut at the level that reports it.
    double expected_cut = 0.0;
};

struct LevelReport {
    std::size_t level = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<RetainedParam> params;
    double best_before = 0.0;
    double best_after = 0.0;
    double wall_seconds = 0.0;
    bool qrr_skipped = false;
    bool ga_ran = false;
};

struct LevelOutcome {
    Bits best;
    double objective = 0.0;
    std::vector<QaoaParams> retained;
    LevelReport report;
};

/// Grid search, QRR per top parameter, GA seeded by the best pool members.
/// `level` only labels the report and derives the GA seed.
LevelOutcome solve_coarsest(const WeightedGraph& graph, const PipelineConfig& config,
                            std::size_t level = 0);

/// QRR with the transferred parameters (no re-gridding), then GA on the pool
/// plus the interpolated solution, as the variant allows.
LevelOutcome refine_level(const WeightedGraph& graph, std::span<const std::uint8_t> interpolated,
                          std::span<const QaoaParams> transferred, const PipelineConfig& config,
                          std::size_t level);

struct SolveResult {
    Bits assignment;
    double objective = 0.0;
    /// Coarsest level first.
    std::vector<LevelReport> levels;
    Hierarchy hierarchy;
    double runtime_seconds = 0.0;
};

/// The hierarchy `solve` works on for this config and seed.
Hierarchy build_pipeline_hierarchy(const WeightedGraph& graph, const PipelineConfig& config);

SolveResult solve(const WeightedGraph& graph, const PipelineConfig& config);

struct VariantSeries {
    Variant variant = Variant::qrr_plus_ga;
    SolveResult result;
};

/// One solve per variant under the same seed, in the order qrr_only, ga_only, qrr_plus_ga.
std::vector<VariantSeries> run_variant_comparison(const WeightedGraph& graph,
                                                  const PipelineConfig& config);

/// "level,variant,objective,runtime_seconds", coarsest level first per variant.
void write_variant_csv(std::ostream& out, std::span<const VariantSeries> series);

/// Flat key set; every field is written.
nlohmann::json pipeline_config_to_json(const PipelineConfig& config);
/// Overlays the keys of `doc` on `base`. Unknown keys and wrong types raise ArgumentError.
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc, PipelineConfig base = {});
/// FNV-1a of the config JSON with `threads` removed, as 16 hex digits.
std::string config_digest(const PipelineConfig& config);

nlohmann::json level_report_to_json(const LevelReport& report);
nlohmann::json solve_report_to_json(const SolveResult& result, const PipelineConfig& config,
                                    const std::string& instance);

}  // namespace mlqaoa
