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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "mlqaoa/pipeline.hpp"

namespace mlqaoa::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailure = 1,
    kInputError = 2,
    kInternalError = 3,
};

/// Everything a run can be configured with. Pipeline keys are flat and shared
/// with `pipeline_config_to_json`; the rest are listed in `run_config_to_json`.
struct RunConfig {
    PipelineConfig pipeline;
    /// "gset", "mtx" or "qubo"; inferred from the instance extension when empty.
    std::string format;
    std::filesystem::path out_dir = ".";
    std::optional<double> budget_seconds;
    std::string method = "rank2";
    std::optional<std::filesystem::path> warm_start;
    std::string suite = "all";
    std::size_t num_hyperplanes = 64;
    std::size_t rank2_max_sweeps = 1000;
    double rank2_jitter = 0.1;
    std::size_t random_trials = 1000;
    double zone_lambda = 3.0;
};

nlohmann::json run_config_to_json(const RunConfig& config);
/// Unknown keys and wrong types raise ArgumentError.
RunConfig run_config_from_json(const nlohmann::json& doc, RunConfig base = {});

/// Full command line (argv[0] is the program name). Writes progress and
/// results to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlqaoa::cli
