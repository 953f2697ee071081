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
#include <string>
#include <vector>

#include "json.hpp"

#include "mlqaoa/qaoa.hpp"

namespace mlqaoa {

struct SuiteResult {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
    /// Largest deviation seen across all checks.
    double max_error = 0.0;
    /// First failing case, null when everything passed.
    nlohmann::json counterexample;

    bool ok() const noexcept { return failed == 0; }
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    /// Convention scale handed to the analytic evaluator; the oracle suite
    /// fails for anything but the true value.
    double kappa = kConventionScale;
};

/// Analytic correlations and expected cut against the statevector simulator
/// (random graphs with n ≤ 10, weights in {-2,-1,1,2}).
SuiteResult verify_oracle(const VerifyOptions& options = {});

/// Cut preservation under interpolation on random hierarchies.
SuiteResult verify_coarsen(const VerifyOptions& options = {});

/// Affine QUBO↔MaxCut relation on 25 random 8-variable QUBOs, checked exhaustively.
SuiteResult verify_reduction(const VerifyOptions& options = {});

/// "oracle", "coarsen", "reduction" or "all".
std::vector<SuiteResult> run_verify_suites(const std::string& suite, const VerifyOptions& options = {});

nlohmann::json suite_result_to_json(const SuiteResult& result);

}  // namespace mlqaoa
